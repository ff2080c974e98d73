#include "treeagg/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "treeagg/baselines.hpp"
#include "treeagg/rng.hpp"
#include "treeagg/runtime.hpp"

namespace treeagg {

double lambda_max(const CountDesign& X, const Eigen::VectorXd& y,
                  double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("lambda_max: requires alpha in [0,1)");
  if (y.size() != X.rows())
    throw std::invalid_argument("lambda_max: response length");
  return X.multiply_transpose(y).lpNorm<Eigen::Infinity>() /
         (static_cast<double>(X.rows()) * (1.0 - alpha));
}

std::vector<double> log_space(double hi, double ratio, int count) {
  if (!(hi > 0.0)) throw std::invalid_argument("log_space: hi must be > 0");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("log_space: ratio must be in (0,1)");
  if (count < 1) throw std::invalid_argument("log_space: count must be >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = hi;
    return out;
  }
  const double step = std::log(ratio) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = hi * std::exp(step * i);
  return out;
}

std::vector<GridPoint> make_grid(const CountDesign& X, const Eigen::VectorXd& y,
                                 int n_alpha, int n_lambda,
                                 double lambda_min_ratio) {
  if (n_alpha < 1 || n_lambda < 1)
    throw std::invalid_argument("make_grid: grid dimensions must be >= 1");
  const double p = static_cast<double>(X.cols());
  const double cap = 1.0 / (1.0 + 1.0 / p);
  std::vector<GridPoint> grid;
  grid.reserve(static_cast<std::size_t>(n_alpha) * n_lambda);
  for (int a = 0; a < n_alpha; ++a) {
    const double alpha =
        n_alpha == 1 ? 0.0 : cap * static_cast<double>(a) / (n_alpha - 1);
    const double hi = lambda_max(X, y, alpha);
    for (double lambda : log_space(hi, lambda_min_ratio, n_lambda))
      grid.push_back({lambda, alpha});
  }
  return grid;
}

CVResult kfold_cv(const CountDesign& X, const Eigen::VectorXd& y,
                  const FeatureTree& tree, const std::vector<GridPoint>& grid,
                  int folds, std::uint64_t seed, const FitConfig& base,
                  const Clip* clip) {
  const auto n = X.rows();
  if (folds < 2 || folds > n)
    throw std::invalid_argument("kfold_cv: folds must be in [2, n]");
  if (grid.empty()) throw std::invalid_argument("kfold_cv: empty grid");
  if (y.size() != n) throw std::invalid_argument("kfold_cv: response length");

  // Seeded shuffle, then contiguous blocks of near-equal size.
  std::vector<std::int64_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::int64_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::int64_t>(
        rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[i], perm[j]);
  }
  std::vector<int> fold_of(n, 0);
  std::vector<std::vector<std::int64_t>> val_rows(folds);
  for (int f = 0; f < folds; ++f) {
    const auto lo = n * f / folds, hi = n * (f + 1) / folds;
    for (auto i = lo; i < hi; ++i) {
      fold_of[perm[i]] = f;
      val_rows[f].push_back(perm[i]);
    }
  }
  for (auto& rows : val_rows) std::sort(rows.begin(), rows.end());

  const auto g = static_cast<int>(grid.size());
  Eigen::MatrixXd fold_mse(folds, g);
  const int threads = runtime::threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) \
    if (threads > 1)
  for (int f = 0; f < folds; ++f) {
    std::vector<std::int64_t> train;
    train.reserve(n - val_rows[f].size());
    for (std::int64_t i = 0; i < n; ++i)
      if (fold_of[i] != f) train.push_back(i);

    const CountDesign Xtr = X.select_rows(train);
    const CountDesign Xva = X.select_rows(val_rows[f]);
    Eigen::VectorXd ytr(train.size()), yva(val_rows[f].size());
    for (std::size_t i = 0; i < train.size(); ++i) ytr[i] = y[train[i]];
    for (std::size_t i = 0; i < val_rows[f].size(); ++i)
      yva[i] = y[val_rows[f][i]];

    const std::vector<FitResult> fits = fit_path(Xtr, ytr, tree, grid, base);
    for (int j = 0; j < g; ++j) {
      const Eigen::VectorXd pred = predict(Xva, fits[j], clip);
      fold_mse(f, j) =
          (yva - pred).squaredNorm() / static_cast<double>(yva.size());
    }
  }

  CVResult out;
  out.grid = grid;
  out.fold_of = std::move(fold_of);
  out.cv_mean = fold_mse.colwise().mean();
  out.cv_se.resize(g);
  for (int j = 0; j < g; ++j) {
    const double sd = std::sqrt(
        (fold_mse.col(j).array() - out.cv_mean[j]).square().sum() /
        (folds - 1));
    out.cv_se[j] = sd / std::sqrt(static_cast<double>(folds));
  }

  int best = 0;
  for (int j = 1; j < g; ++j) {
    const bool better =
        out.cv_mean[j] < out.cv_mean[best] ||
        (out.cv_mean[j] == out.cv_mean[best] &&
         (grid[j].lambda > grid[best].lambda ||
          (grid[j].lambda == grid[best].lambda &&
           grid[j].alpha < grid[best].alpha)));
    if (better) best = j;
  }
  out.best_index = best;

  FitConfig refit_cfg = base;
  refit_cfg.lambda = grid[best].lambda;
  refit_cfg.alpha = grid[best].alpha;
  out.refit = fit(X, y, tree, refit_cfg);
  return out;
}

Eigen::VectorXd predict(const CountDesign& X_new, const FitResult& fit,
                        const Clip* clip) {
  if (fit.beta.size() != X_new.cols())
    throw std::invalid_argument("predict: design has wrong column count");
  Eigen::VectorXd pred = X_new.multiply(fit.beta);
  pred.array() += fit.intercept;
  if (clip) {
    if (!(clip->lo <= clip->hi))
      throw std::invalid_argument("predict: clip interval is empty");
    pred = pred.cwiseMax(clip->lo).cwiseMin(clip->hi);
  }
  return pred;
}

Metrics evaluate(const Eigen::VectorXd& beta_hat,
                 const Eigen::VectorXd& beta_star, const CountDesign& X) {
  if (beta_hat.size() != beta_star.size() || beta_hat.size() != X.cols())
    throw std::invalid_argument("evaluate: size mismatch");
  Metrics m;
  m.est_err = (beta_hat - beta_star).squaredNorm() /
              static_cast<double>(beta_hat.size());
  m.pred_err = X.multiply(beta_hat - beta_star).squaredNorm() /
               static_cast<double>(X.rows());
  m.exact_signed_support = (signed_support(beta_hat).array() ==
                            signed_support(beta_star).array())
                               .all();
  return m;
}

}  // namespace treeagg
