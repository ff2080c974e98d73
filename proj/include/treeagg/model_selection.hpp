#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "treeagg/admm.hpp"
#include "treeagg/count_design.hpp"
#include "treeagg/tree.hpp"

// Penalty grids, K-fold cross-validation over (lambda, alpha), and the
// error metrics the simulation studies report.

namespace treeagg {

// Smallest lambda with an all-zero lasso component: ||X^T y||_inf /
// (n (1 - alpha)).  Defined for alpha < 1.
double lambda_max(const CountDesign& X, const Eigen::VectorXd& y, double alpha);

// `count` log-spaced values from hi down to ratio*hi (hi > 0, ratio in
// (0,1), count >= 1; a single value is just hi).
std::vector<double> log_space(double hi, double ratio, int count);

// Full (lambda, alpha) grid: n_alpha equally spaced alphas covering
// [0, (1 + 1/p)^{-1}], each carrying n_lambda log-spaced lambdas descending
// from that lane's lambda_max.  Lane order groups the grid for warm starts.
std::vector<GridPoint> make_grid(const CountDesign& X, const Eigen::VectorXd& y,
                                 int n_alpha, int n_lambda,
                                 double lambda_min_ratio = 1e-3);

struct CVResult {
  std::vector<GridPoint> grid;
  Eigen::VectorXd cv_mean;       // validation MSE averaged over folds
  Eigen::VectorXd cv_se;         // standard error over folds
  int best_index = 0;
  std::vector<int> fold_of;      // fold id per sample
  FitResult refit;               // full-data fit at the selected pair
};

// Optional interval predictions are clamped to before scoring or reporting.
struct Clip {
  double lo = 0.0;
  double hi = 0.0;
};

// Contiguous-block folds over a seeded shuffle of the samples.  Ties in
// cv_mean resolve toward the largest lambda, then the smallest alpha.
CVResult kfold_cv(const CountDesign& X, const Eigen::VectorXd& y,
                  const FeatureTree& tree, const std::vector<GridPoint>& grid,
                  int folds, std::uint64_t seed, const FitConfig& base = {},
                  const Clip* clip = nullptr);

// intercept + X beta from a fit, optionally clamped to [clip.lo, clip.hi].
Eigen::VectorXd predict(const CountDesign& X_new, const FitResult& fit,
                        const Clip* clip = nullptr);

struct Metrics {
  double est_err = 0.0;   // ||bhat - bstar||^2 / p
  double pred_err = 0.0;  // ||X (bhat - bstar)||^2 / n
  bool exact_signed_support = false;
};

Metrics evaluate(const Eigen::VectorXd& beta_hat,
                 const Eigen::VectorXd& beta_star, const CountDesign& X);

}  // namespace treeagg
