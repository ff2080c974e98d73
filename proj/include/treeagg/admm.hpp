#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "treeagg/aggregation.hpp"
#include "treeagg/count_design.hpp"
#include "treeagg/tree.hpp"

// Tree-guided aggregation/sparsity estimator
//
//   min_{beta, gamma}  (1/2n) ||y - X beta||^2
//                      + lambda * (alpha ||gamma_{-root}||_1
//                                  + (1 - alpha) ||beta||_1)
//   subject to         beta = A gamma,
//
// solved by consensus ADMM over three beta copies (smooth loss, l1 prox,
// constraint projection) and two gamma copies (l1 prox with a free root,
// constraint projection).  alpha = 0 recovers the plain lasso in beta;
// alpha = 1 is the lasso in gamma on the aggregated design with an
// unpenalized root.

namespace treeagg {

struct FitConfig {
  double lambda = 0.0;
  double alpha = 0.0;  // in [0,1]
  double rho = 1.0;
  double eps_abs = 1e-5;
  double eps_rel = 1e-4;
  int max_iter = 10000;
  bool intercept = false;
  // Verifies each iteration that the dual averages stay at zero (an
  // algebraic identity of the consensus updates).
  bool debug_checks = false;
};

// Full internal solver state, carried so a later solve can warm-start.
struct SolverState {
  Eigen::VectorXd beta, gamma;
  Eigen::VectorXd v1, v2, v3;  // duals of the beta copies
  Eigen::VectorXd u1, u2;      // duals of the gamma copies
};

struct FitResult {
  Eigen::VectorXd beta;   // A gamma, so always consensus-feasible
  Eigen::VectorXd gamma;
  double intercept = 0.0;
  bool converged = false;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;      // penalized objective at (beta, gamma)
  double consensus_gap = 0.0;  // ||beta_avg - A gamma_avg||_inf at exit
  SolverState state;
};

// Factorizations shared across an entire (lambda, alpha) grid: the design
// SVD, X^T y, and the consensus projector depend only on (X, y, tree,
// intercept).
class SolverWorkspace {
 public:
  SolverWorkspace(const CountDesign& X, const Eigen::VectorXd& y,
                  const FeatureTree& tree, bool intercept);

  FitResult solve(const FitConfig& cfg,
                  const SolverState* warm = nullptr) const;

  const AggregationMatrix& aggregation() const { return agg_; }
  std::int64_t samples() const { return n_; }

 private:
  std::int64_t n_ = 0;
  int p_ = 0, m_ = 0;
  bool intercept_ = false;
  double y_mean_ = 0.0;
  Eigen::VectorXd col_mean_;
  Eigen::MatrixXd Xc_;  // centered when intercept is requested
  Eigen::VectorXd yc_, Xty_;
  Eigen::MatrixXd V_;        // right singular vectors of Xc
  Eigen::VectorXd dsq_;      // squared singular values
  AggregationMatrix agg_;
  Eigen::MatrixXd Q_;  // consensus projector factor, (p+m) x p
};

FitResult fit(const CountDesign& X, const Eigen::VectorXd& y,
              const FeatureTree& tree, const FitConfig& cfg,
              const SolverState* warm = nullptr);

struct GridPoint {
  double lambda = 0.0;
  double alpha = 0.0;
};

// Solves the whole grid with one workspace.  Within each alpha lane (grid
// points sharing alpha, in order) lambda must be non-increasing; each solve
// warm-starts from the previous one in its lane.  Lanes run in parallel,
// results stay in grid order.
std::vector<FitResult> fit_path(const CountDesign& X, const Eigen::VectorXd& y,
                                const FeatureTree& tree,
                                const std::vector<GridPoint>& grid,
                                const FitConfig& base);

// Penalized objective at (beta, gamma) on the data as given.  The overload
// taking the aggregation matrix warns on stderr when beta strays from
// A gamma by more than 1e-6.
double objective_value(const CountDesign& X, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& beta,
                       const Eigen::VectorXd& gamma, const FitConfig& cfg);
double objective_value(const CountDesign& X, const Eigen::VectorXd& y,
                       const AggregationMatrix& agg,
                       const Eigen::VectorXd& beta,
                       const Eigen::VectorXd& gamma, const FitConfig& cfg);

// Smallest attainable stationarity violation at (A gamma, gamma): the
// minimum-norm element of
//   (1/n)(XA)^T (XA gamma - y) + lambda(1-alpha) A^T s + lambda alpha E t
// over valid subgradient boxes.  Coordinates within zero_tol of zero leave
// their subgradient free.
double kkt_residual(const CountDesign& X, const Eigen::VectorXd& y,
                    const AggregationMatrix& agg, const Eigen::VectorXd& beta,
                    const Eigen::VectorXd& gamma, const FitConfig& cfg,
                    double zero_tol = 1e-6);

}  // namespace treeagg
