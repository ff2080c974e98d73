#pragma once

#include <vector>

#include <Eigen/Core>

#include "treeagg/count_design.hpp"
#include "treeagg/tree.hpp"

// Reference estimators the aggregation fit is compared against: plain lasso
// by coordinate descent, ridge through the design SVD, minimum-norm OLS,
// and the infeasible least squares fit on the correctly aggregated columns.

namespace treeagg {

struct LassoConfig {
  double tol = 1e-8;       // max stationarity violation at exit
  int max_sweeps = 100000;
  bool intercept = false;
  // Per-feature penalty multipliers; empty means all ones.  A zero entry
  // leaves that coordinate unpenalized.
  std::vector<double> penalty_factor;
};

struct LassoResult {
  Eigen::VectorXd beta;
  double intercept = 0.0;
  int sweeps = 0;
  bool converged = false;
};

// min (1/2n)||y - b0 - X beta||^2 + lambda sum_j pf_j |beta_j|.
// Zero-norm columns keep a zero coefficient.  `warm` seeds beta.
LassoResult lasso_cd(const CountDesign& X, const Eigen::VectorXd& y,
                     double lambda, const LassoConfig& cfg = {},
                     const Eigen::VectorXd* warm = nullptr);

// min (1/2n)||y - b0 - X beta||^2 + (lambda/2)||beta||^2 through one SVD;
// the path overload reuses the factorization across the lambda grid.
struct RidgeResult {
  Eigen::VectorXd beta;
  double intercept = 0.0;
};
RidgeResult ridge_svd(const CountDesign& X, const Eigen::VectorXd& y,
                      double lambda, bool intercept = false);
std::vector<RidgeResult> ridge_svd(const CountDesign& X,
                                   const Eigen::VectorXd& y,
                                   const std::vector<double>& lambdas,
                                   bool intercept = false);

// Least squares via the compact SVD; rank-deficient designs return the
// minimum-norm solution and set *rank_deficient when asked.
Eigen::VectorXd ols(const CountDesign& X, const Eigen::VectorXd& y,
                    bool* rank_deficient = nullptr);

// Least squares on the aggregated columns X A_u for the given nodes, mapped
// back to per-feature coefficients (constant over each node's leaves, zero
// elsewhere).  Throws std::runtime_error when the aggregated design is
// singular.
Eigen::VectorXd oracle_ls(const CountDesign& X, const Eigen::VectorXd& y,
                          const FeatureTree& tree,
                          const std::vector<int>& nodes);

// Entrywise sign pattern with sign(0) = 0 exactly.
Eigen::VectorXi signed_support(const Eigen::VectorXd& v);

// Equal-sized coefficient blocks on an identity design: n samples split into
// k blocks whose true coefficients beta_tilde are constant per block, with
// the last block null.
struct BlockSpec {
  int k = 1;
  std::int64_t n = 1;
  Eigen::VectorXd beta_tilde;  // length k, last entry 0
};
void validate(const BlockSpec& spec);

// Closed-form lasso on the block-aggregated identity design: per block,
// S(block mean, lambda*k), broadcast back to the n coordinates.  Equals
// lasso_cd on the n-by-k block indicator design at the same lambda.
Eigen::VectorXd oracle_lasso_identity(const Eigen::VectorXd& y,
                                      const BlockSpec& spec, double lambda);

// The identity-design lasso path parametrized by its threshold: S(y, t)
// elementwise (equal to lasso_cd with X = I_n at penalty t/n).
Eigen::VectorXd lasso_identity(const Eigen::VectorXd& y, double t);

// beta_tilde replicated blockwise to length n (n divisible by its size).
Eigen::VectorXd broadcast_blocks(const Eigen::VectorXd& blocks,
                                 std::int64_t n);

}  // namespace treeagg
