#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "treeagg/admm.hpp"
#include "treeagg/count_design.hpp"
#include "treeagg/hclust.hpp"
#include "treeagg/io.hpp"
#include "treeagg/tree.hpp"

// Simulation harness: synthetic scenario generators built on clustered
// latent vectors, the comparison sweeps against the baselines, and the
// Monte Carlo checks of the finite-sample guarantees (rare-feature OLS
// exceedance, oracle-aggregation support recovery, and the slow-rate
// prediction bound).  Every generator is a pure function of its spec, so a
// seed pins the entire pipeline.

namespace treeagg {

// ---- closed forms -------------------------------------------------------

double normal_cdf(double x);

// Lower bound 2 Phi(-eta sqrt(k) / sigma) on the probability that the OLS
// coefficient of a binary feature with k active samples misses its target
// by more than eta.
double ols_exceedance_bound(double eta, int k, double sigma);

// Constant in the Gaussian lower-tail bound behind the recovery window:
// (1/3) e^{1/(pi/2 + 2)} sqrt(1/4 + 1/pi).
double recovery_constant();

// Penalty level for the oracle-aggregated lasso on k blocks of n/k samples.
double oracle_lambda(std::int64_t n, int k, double sigma);

// Admissible range (lo, hi] for the minimal nonzero block coefficient: above
// lo the oracle-aggregated lasso recovers the signed support with
// probability at least 1 - 2/sqrt(n); at or below hi the plain lasso cannot
// exceed a 1/e recovery rate asymptotically.
struct SignalWindow {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;
};
SignalWindow signal_window(std::int64_t n, int k, double sigma);

// ---- scenario generation ------------------------------------------------

struct ScenarioSpec {
  std::int64_t n = 100;
  int p = 200;
  int k = 10;
  double zero_frac = 0.2;   // leading fraction of zero branch coefficients
  double latent_spread = 0.1;
  double poisson_mean = 0.1;
  double sigma_override = -1.0;  // < 0 applies sigma = ||X beta*|| / (5 n)
  Linkage linkage = Linkage::kComplete;
  std::uint64_t seed = 1;
};

struct ScenarioData {
  FeatureTree tree;
  CountDesign X;
  Eigen::VectorXd y;
  Eigen::VectorXd beta_star;
  Eigen::VectorXd branch_values;  // coefficient per planted group
  AggregatingSet b_star;          // empty when the tree has no exact cut
  double sigma = 0.0;
};

// Clustered-latent scenario: k unit-simplex centers in R^{k-1}, p/k latent
// vectors per center, dendrogram over the latents cut into k branches whose
// roots carry the planted coefficients (the leading zero_frac * k of them
// zero, the rest N(0, 4)), Poisson counts, Gaussian noise at the sigma rule.
ScenarioData gen_scenario(const ScenarioSpec& spec);

// Tree-distortion variant: the planted groups are fixed contiguous feature
// blocks, while the tree is rebuilt from latent vectors at spread
// latent_spread, so it only approximately reflects the true aggregation.
ScenarioData gen_distorted(const ScenarioSpec& spec);

// ---- comparison sweeps ---------------------------------------------------

struct SweepConfig {
  int replicates = 100;
  int n_alpha = 8;
  int n_lambda = 50;
  double lambda_min_ratio = 1e-3;
  std::uint64_t seed = 1;
  FitConfig solver;  // lambda/alpha are overridden per grid point
};

// Best-over-grid estimation error per k for the aggregation fit, oracle
// least squares, and the scenario's baselines (OLS when low_dim, lasso and
// ridge otherwise).  Columns: k, method, mean_est_err, se_est_err.
io::Table run_scenario_sweep(const ScenarioSpec& base,
                             const std::vector<int>& k_values, bool low_dim,
                             const SweepConfig& cfg);

// Best-over-grid prediction error of the aggregation fit as the tree
// degrades.  Columns: tau, mean_pred_err, se_pred_err.
io::Table run_distortion_sweep(const ScenarioSpec& base,
                               const std::vector<double>& taus,
                               const SweepConfig& cfg);

// ---- guarantee checks ----------------------------------------------------

// Empirical exceedance frequency of the OLS coefficient of a rare binary
// feature (k active samples, Gaussian companion columns), against the
// theoretical lower bound, for each sample size.  The design is fixed per n
// and only the noise is redrawn, using the exact identity
// betahat_j - beta*_j = w^T eps with w the j-th hat vector.
// Columns: n, exceed_rate, lower_bound, replicates.
io::Table verify_ols_failure(const std::vector<std::int64_t>& n_values, int k,
                             double eta, double sigma, int replicates,
                             std::uint64_t seed);

struct RecoveryReport {
  std::int64_t n = 0;
  int k = 0;
  int replicates = 0;
  double sigma = 0.0;
  double signal = 0.0;  // magnitude of the k-1 nonzero block coefficients
  double lambda = 0.0;
  SignalWindow window;
  double oracle_rate = 0.0;
  double lasso_rate = 0.0;
  double oracle_guarantee = 0.0;  // 1 - 2/sqrt(n)
  double lasso_ceiling = 0.0;     // finite-n failure bound
};

// Identity-design support recovery: per replicate, exact evaluation of the
// oracle-aggregated lasso at its prescribed lambda and of the plain lasso's
// best-over-path recovery criterion (smallest signal |y| must beat the
// largest null |y|).  signal <= 0 picks the window's upper end.
RecoveryReport verify_support_recovery(std::int64_t n, int k, double sigma,
                                       double signal, int replicates,
                                       std::uint64_t seed);

struct BoundReport {
  int replicates = 0;
  int violations = 0;
  double violation_rate = 0.0;
  double nominal_rate = 0.0;  // 1/p
  double mean_lhs = 0.0;
  double mean_rhs = 0.0;
  double mean_alpha = 0.0;
  bool tree_size_ok = false;      // |T| <= 2p on every replicate
  bool col_norm_ok = false;       // max_u ||X A_u|| <= sqrt(n) on every one
  bool corollary_chain_ok = false;  // bound <= both corollary forms
};

// Slow-rate prediction bound check on normalized high-dimensional
// scenarios: fit at lambda = 8 sigma sqrt(log(2p)/n) and the
// support-balanced alpha, then compare (1/n)||X bhat - X b*||^2 against
// 3 lambda (alpha ||btilde*||_1 + (1-alpha) ||b*||_1).
BoundReport verify_prediction_bound(const ScenarioSpec& base, int replicates,
                                    std::uint64_t seed,
                                    const FitConfig& solver = {});

}  // namespace treeagg
