#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "treeagg/baselines.hpp"
#include "treeagg/count_design.hpp"
#include "treeagg/model_selection.hpp"
#include "treeagg/rng.hpp"
#include "treeagg/tree.hpp"

using treeagg::Clip;
using treeagg::CountDesign;
using treeagg::CVResult;
using treeagg::FeatureTree;
using treeagg::FitConfig;
using treeagg::GridPoint;
using treeagg::Rng;

namespace {

FitConfig tight_base() {
  FitConfig cfg;
  cfg.eps_abs = 1e-9;
  cfg.eps_rel = 1e-9;
  cfg.max_iter = 200000;
  return cfg;
}

Eigen::MatrixXd poisson_design(Rng& rng, std::int64_t n, int p, double mean) {
  Eigen::MatrixXd X(n, p);
  for (std::int64_t i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = static_cast<double>(rng.poisson(mean));
  return X;
}

FeatureTree small_tree() {
  // Leaves 0..2, branch 3 over {0,1}, root 4.
  return FeatureTree({3, 3, 4, 4, -1}, 3);
}

}  // namespace

TEST_CASE("critical penalty and log-spaced ladders") {
  Rng rng(111);
  const Eigen::MatrixXd X = poisson_design(rng, 20, 5, 1.0);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) y[i] = 2.0 * rng.normal();
  const CountDesign Xc(X);

  const double lam0 = treeagg::lambda_max(Xc, y, 0.0);
  CHECK(lam0 == doctest::Approx((X.transpose() * y).lpNorm<Eigen::Infinity>() /
                                20.0)
                    .epsilon(1e-15));
  CHECK(treeagg::lambda_max(Xc, y, 0.5) == doctest::Approx(2.0 * lam0));
  CHECK(treeagg::lasso_cd(Xc, y, lam0 * (1 + 1e-9))
            .beta.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(treeagg::lasso_cd(Xc, y, lam0 * 0.9).beta.lpNorm<Eigen::Infinity>() >
        0.0);
  CHECK_THROWS(treeagg::lambda_max(Xc, y, 1.0));

  const std::vector<double> ladder = treeagg::log_space(4.0, 1e-2, 5);
  REQUIRE(ladder.size() == 5);
  CHECK(ladder.front() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(ladder.back() == doctest::Approx(0.04).epsilon(1e-12));
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    CHECK(ladder[i] < ladder[i - 1]);
    CHECK(ladder[i] / ladder[i - 1] ==
          doctest::Approx(ladder[1] / ladder[0]).epsilon(1e-12));
  }
  CHECK(treeagg::log_space(4.0, 1e-2, 1) == std::vector<double>{4.0});
  CHECK_THROWS(treeagg::log_space(0.0, 0.5, 3));
  CHECK_THROWS(treeagg::log_space(1.0, 1.5, 3));
}

TEST_CASE("grid covers the alpha range with descending lambda lanes") {
  Rng rng(112);
  const Eigen::MatrixXd X = poisson_design(rng, 15, 4, 1.0);
  Eigen::VectorXd y(15);
  for (int i = 0; i < 15; ++i) y[i] = rng.normal() + 1.0;
  const CountDesign Xc(X);

  const int n_alpha = 3, n_lambda = 4;
  const std::vector<GridPoint> grid =
      treeagg::make_grid(Xc, y, n_alpha, n_lambda, 1e-2);
  REQUIRE(grid.size() == 12);

  const double cap = 1.0 / (1.0 + 0.25);
  CHECK(grid[0].alpha == 0.0);
  CHECK(grid[11].alpha == doctest::Approx(cap).epsilon(1e-15));
  CHECK(grid[4].alpha == doctest::Approx(cap / 2).epsilon(1e-15));
  for (int a = 0; a < n_alpha; ++a) {
    const double alpha = grid[static_cast<std::size_t>(a) * n_lambda].alpha;
    const double hi = treeagg::lambda_max(Xc, y, alpha);
    for (int l = 0; l < n_lambda; ++l) {
      const GridPoint& pt = grid[static_cast<std::size_t>(a) * n_lambda + l];
      CHECK(pt.alpha == alpha);
      if (l == 0) CHECK(pt.lambda == doctest::Approx(hi).epsilon(1e-15));
      if (l > 0)
        CHECK(pt.lambda <
              grid[static_cast<std::size_t>(a) * n_lambda + l - 1].lambda);
    }
    CHECK(grid[static_cast<std::size_t>(a) * n_lambda + n_lambda - 1].lambda ==
          doctest::Approx(hi * 1e-2).epsilon(1e-12));
  }
}

TEST_CASE("noiseless data cross-validates to zero error") {
  Rng rng(113);
  const Eigen::MatrixXd X = poisson_design(rng, 18, 3, 1.2);
  Eigen::VectorXd beta_star(3);
  beta_star << 1.0, 1.0, -2.0;
  const Eigen::VectorXd y = X * beta_star;
  const CVResult cv = treeagg::kfold_cv(CountDesign(X), y, small_tree(),
                                        {{0.0, 0.0}}, 3, 5, tight_base());
  REQUIRE(cv.cv_mean.size() == 1);
  CHECK(cv.cv_mean[0] <= 1e-8);
  CHECK(cv.best_index == 0);
}

TEST_CASE("duplicated grid points score the same") {
  Rng rng(114);
  const Eigen::MatrixXd X = poisson_design(rng, 21, 3, 1.0);
  Eigen::VectorXd y(21);
  for (int i = 0; i < 21; ++i) y[i] = X.row(i).sum() + 0.4 * rng.normal();
  const CVResult cv = treeagg::kfold_cv(CountDesign(X), y, small_tree(),
                                        {{0.2, 0.4}, {0.2, 0.4}}, 3, 9,
                                        tight_base());
  CHECK(cv.cv_mean[0] == doctest::Approx(cv.cv_mean[1]).epsilon(1e-6));
}

TEST_CASE("leave-one-out matches an explicit loop") {
  Rng rng(115);
  const std::int64_t n = 12;
  const Eigen::MatrixXd X = poisson_design(rng, n, 3, 1.1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = X.row(i).sum() + 0.5 * rng.normal();
  const CountDesign Xc(X);
  const FeatureTree tree = small_tree();
  const FitConfig base = tight_base();
  const Clip clip{2.5, 3.5};  // narrow on purpose so clamping binds

  const CVResult cv = treeagg::kfold_cv(Xc, y, tree, {{0.1, 0.5}},
                                        static_cast<int>(n), 17, base, &clip);

  // Every sample is its own fold.
  std::vector<int> seen(n, 0);
  for (int f : cv.fold_of) seen[static_cast<std::size_t>(f)]++;
  for (int c : seen) CHECK(c == 1);

  Eigen::VectorXd errs(n);
  for (int f = 0; f < n; ++f) {
    std::vector<std::int64_t> train, test;
    for (std::int64_t i = 0; i < n; ++i)
      (cv.fold_of[static_cast<std::size_t>(i)] == f ? test : train)
          .push_back(i);
    REQUIRE(test.size() == 1);
    Eigen::VectorXd ytr(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) ytr[i] = y[train[i]];
    FitConfig cfg = base;
    cfg.lambda = 0.1;
    cfg.alpha = 0.5;
    const treeagg::FitResult fit =
        treeagg::fit(Xc.select_rows(train), ytr, tree, cfg);
    const Eigen::VectorXd pred =
        treeagg::predict(Xc.select_rows(test), fit, &clip);
    errs[f] = (y[test[0]] - pred[0]) * (y[test[0]] - pred[0]);
  }
  CHECK(std::abs(cv.cv_mean[0] - errs.mean()) <= 1e-12);
  const double sd =
      std::sqrt((errs.array() - errs.mean()).square().sum() / (n - 1));
  CHECK(std::abs(cv.cv_se[0] - sd / std::sqrt(static_cast<double>(n))) <=
        1e-12);
}

TEST_CASE("fold blocks are balanced") {
  Rng rng(116);
  const Eigen::MatrixXd X = poisson_design(rng, 19, 3, 1.0);
  Eigen::VectorXd y(19);
  for (int i = 0; i < 19; ++i) y[i] = rng.normal();
  const CVResult cv = treeagg::kfold_cv(CountDesign(X), y, small_tree(),
                                        {{0.5, 0.0}}, 4, 23, tight_base());
  std::vector<int> sizes(4, 0);
  for (int f : cv.fold_of) sizes[static_cast<std::size_t>(f)]++;
  int total = 0;
  for (int s : sizes) {
    CHECK(s >= 4);
    CHECK(s <= 5);
    total += s;
  }
  CHECK(total == 19);
}

TEST_CASE("selection is reproducible and ties break toward heavier penalties") {
  Rng rng(117);
  const Eigen::MatrixXd X = poisson_design(rng, 16, 3, 1.0);
  Eigen::VectorXd y(16);
  for (int i = 0; i < 16; ++i) y[i] = X.row(i).sum() + 0.3 * rng.normal();
  const CountDesign Xc(X);
  const std::vector<GridPoint> grid = treeagg::make_grid(Xc, y, 2, 4, 1e-2);

  const CVResult a = treeagg::kfold_cv(Xc, y, small_tree(), grid, 4, 31);
  const CVResult b = treeagg::kfold_cv(Xc, y, small_tree(), grid, 4, 31);
  CHECK(a.best_index == b.best_index);
  CHECK((a.cv_mean - b.cv_mean).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((a.cv_se - b.cv_se).lpNorm<Eigen::Infinity>() == 0.0);

  // A zero response makes every grid point score exactly zero, so the tie
  // rule alone decides: largest lambda first, then smallest alpha.
  const std::vector<GridPoint> tie_grid = {
      {10.0, 0.5}, {5.0, 0.5}, {10.0, 0.0}, {5.0, 0.0}};
  const CVResult tie = treeagg::kfold_cv(Xc, Eigen::VectorXd::Zero(16),
                                         small_tree(), tie_grid, 4, 31);
  CHECK(tie.cv_mean.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(tie.best_index == 2);
}

TEST_CASE("cross-validation rejects malformed calls") {
  Rng rng(118);
  const Eigen::MatrixXd X = poisson_design(rng, 10, 3, 1.0);
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(10);
  const CountDesign Xc(X);
  CHECK_THROWS(treeagg::kfold_cv(Xc, y, small_tree(), {{0.1, 0.0}}, 1, 1));
  CHECK_THROWS(treeagg::kfold_cv(Xc, y, small_tree(), {{0.1, 0.0}}, 11, 1));
  CHECK_THROWS(treeagg::kfold_cv(Xc, y, small_tree(), {}, 3, 1));
}

TEST_CASE("prediction applies the intercept and the clamp") {
  treeagg::FitResult fit;
  fit.beta = Eigen::VectorXd::Ones(1);
  fit.intercept = 0.0;

  Eigen::MatrixXd X(3, 1);
  X << 6.2, 0.5, 3.0;
  const Clip clip{1.0, 5.0};
  const Eigen::VectorXd pred = treeagg::predict(CountDesign(X), fit, &clip);
  CHECK(pred[0] == 5.0);
  CHECK(pred[1] == 1.0);
  CHECK(pred[2] == 3.0);

  fit.intercept = 2.25;
  const Eigen::VectorXd shifted = treeagg::predict(CountDesign(X), fit);
  CHECK(shifted[2] == doctest::Approx(5.25).epsilon(1e-15));

  const Eigen::VectorXd at_zero =
      treeagg::predict(CountDesign(Eigen::MatrixXd::Zero(4, 1)), fit);
  for (int i = 0; i < 4; ++i) CHECK(at_zero[i] == 2.25);

  CHECK_THROWS(treeagg::predict(CountDesign(Eigen::MatrixXd::Zero(2, 3)), fit));
  const Clip bad{2.0, 1.0};
  CHECK_THROWS(treeagg::predict(CountDesign(X), fit, &bad));
}

TEST_CASE("error metrics") {
  Rng rng(119);
  const Eigen::MatrixXd X = poisson_design(rng, 14, 4, 1.0);
  Eigen::VectorXd beta_star(4);
  beta_star << 1.5, 0.0, -0.5, 0.0;
  const CountDesign Xc(X);

  const treeagg::Metrics exact = treeagg::evaluate(beta_star, beta_star, Xc);
  CHECK(exact.est_err == 0.0);
  CHECK(exact.pred_err == 0.0);
  CHECK(exact.exact_signed_support);

  const treeagg::Metrics null =
      treeagg::evaluate(Eigen::VectorXd::Zero(4), beta_star, Xc);
  CHECK(null.est_err == doctest::Approx(beta_star.squaredNorm() / 4.0));
  CHECK(null.pred_err ==
        doctest::Approx((X * beta_star).squaredNorm() / 14.0));
  CHECK_FALSE(null.exact_signed_support);

  Eigen::VectorXd beta_hat(4);
  beta_hat << 1.2, 0.0, -0.1, 0.3;
  const treeagg::Metrics m = treeagg::evaluate(beta_hat, beta_star, Xc);
  CHECK(m.est_err ==
        doctest::Approx((beta_hat - beta_star).squaredNorm() / 4.0));
  CHECK(m.pred_err ==
        doctest::Approx((X * (beta_hat - beta_star)).squaredNorm() / 14.0));
  CHECK_FALSE(m.exact_signed_support);
}

TEST_CASE("ridge limits and normal equations") {
  Rng rng(120);
  const Eigen::MatrixXd X = poisson_design(rng, 30, 5, 1.0);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) y[i] = X.row(i).sum() + rng.normal();
  const CountDesign Xc(X);

  CHECK(treeagg::ridge_svd(Xc, y, 1e8).beta.lpNorm<Eigen::Infinity>() <= 1e-5);

  const Eigen::VectorXd b_ols = treeagg::ols(Xc, y);
  CHECK((treeagg::ridge_svd(Xc, y, 1e-10).beta - b_ols)
            .lpNorm<Eigen::Infinity>() <= 1e-6);

  const double lambda = 0.3;
  const Eigen::VectorXd b = treeagg::ridge_svd(Xc, y, lambda).beta;
  const Eigen::VectorXd resid =
      (X.transpose() * X + 30.0 * lambda * Eigen::MatrixXd::Identity(5, 5)) *
          b -
      X.transpose() * y;
  CHECK(resid.lpNorm<Eigen::Infinity>() <= 1e-8);

  const std::vector<double> lambdas = {2.0, 0.3, 0.01};
  const std::vector<treeagg::RidgeResult> path =
      treeagg::ridge_svd(Xc, y, lambdas);
  REQUIRE(path.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const Eigen::VectorXd one = treeagg::ridge_svd(Xc, y, lambdas[i]).beta;
    CHECK((path[i].beta - one).lpNorm<Eigen::Infinity>() == 0.0);
  }
}
