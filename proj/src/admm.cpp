#include "treeagg/admm.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <stdexcept>

#include "treeagg/kernels.hpp"
#include "treeagg/linop.hpp"
#include "treeagg/runtime.hpp"

namespace treeagg {

namespace {

void validate_config(const FitConfig& cfg) {
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda))
    throw std::invalid_argument("fit: lambda must be finite and >= 0");
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
    throw std::invalid_argument("fit: alpha must lie in [0,1]");
  if (!(cfg.rho > 0.0) || !std::isfinite(cfg.rho))
    throw std::invalid_argument("fit: rho must be finite and > 0");
  if (!(cfg.eps_abs > 0.0) || !(cfg.eps_rel >= 0.0))
    throw std::invalid_argument("fit: eps_abs must be > 0 and eps_rel >= 0");
  if (cfg.max_iter < 1)
    throw std::invalid_argument("fit: max_iter must be >= 1");
}

double penalty_term(const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
                    const FitConfig& cfg) {
  const auto m = gamma.size();
  const double gamma_l1 = m > 1 ? gamma.head(m - 1).lpNorm<1>() : 0.0;
  return cfg.lambda *
         (cfg.alpha * gamma_l1 + (1.0 - cfg.alpha) * beta.lpNorm<1>());
}

}  // namespace

SolverWorkspace::SolverWorkspace(const CountDesign& X, const Eigen::VectorXd& y,
                                 const FeatureTree& tree, bool intercept)
    : agg_(tree) {
  n_ = X.rows();
  p_ = tree.leaf_count();
  m_ = tree.node_count();
  if (X.cols() != p_)
    throw std::invalid_argument("fit: design width and tree leaf count differ");
  if (y.size() != n_)
    throw std::invalid_argument("fit: response length and sample count differ");
  if (!y.allFinite())
    throw std::invalid_argument("fit: response contains nonfinite values");
  intercept_ = intercept;

  Xc_ = X.dense();
  col_mean_ = Xc_.colwise().mean();
  y_mean_ = y.mean();
  yc_ = y;
  if (intercept_) {
    Xc_.rowwise() -= col_mean_.transpose();
    yc_.array() -= y_mean_;
  }
  Xty_.noalias() = Xc_.transpose() * yc_;

  const CompactSVD svd = compact_svd(Xc_);
  V_ = svd.V;
  dsq_ = svd.d.cwiseProduct(svd.d);

  const NullspaceProjector proj(agg_.dense());
  Q_ = proj.Q();
}

FitResult SolverWorkspace::solve(const FitConfig& cfg,
                                 const SolverState* warm) const {
  validate_config(cfg);
  const int p = p_, m = m_;
  const double n = static_cast<double>(n_);
  const double rho = cfg.rho;
  const int rank = static_cast<int>(dsq_.size());

  Eigen::VectorXd beta, gamma, v1, v2, v3, u1, u2;
  if (warm) {
    if (warm->beta.size() != p || warm->gamma.size() != m)
      throw std::invalid_argument("fit: warm-start state has wrong shape");
    beta = warm->beta;
    gamma = warm->gamma;
    v1 = warm->v1;
    v2 = warm->v2;
    v3 = warm->v3;
    u1 = warm->u1;
    u2 = warm->u2;
  } else {
    beta = Eigen::VectorXd::Zero(p);
    gamma = Eigen::VectorXd::Zero(m);
    v1 = v2 = v3 = Eigen::VectorXd::Zero(p);
    u1 = u2 = Eigen::VectorXd::Zero(m);
  }

  const double thr_beta = cfg.lambda * (1.0 - cfg.alpha) / rho;
  Eigen::VectorXd thr_gamma = Eigen::VectorXd::Constant(m, cfg.lambda * cfg.alpha / rho);
  thr_gamma[m - 1] = 0.0;  // root stays unpenalized

  Eigen::VectorXd inv_d = (dsq_.array() + n * rho).inverse();
  Eigen::VectorXd b1(p), b2(p), b3(p), g1(m), g2(m);
  Eigen::VectorXd t(p), w(rank), ws(rank), z(p + m), qz(p);
  Eigen::VectorXd beta_new(p), gamma_new(m), shrink_in(m);

  const double dim_term = std::sqrt(3.0 * p + 2.0 * m);

  double r_pri = 0.0, r_dual = 0.0;
  bool converged = false;
  int iterations = cfg.max_iter;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    // Smooth-loss copy via the cached SVD of X:
    // b1 = (X^T X + n rho I)^{-1} (X^T y + n rho beta - n v1).
    t = Xty_ + n * rho * beta - n * v1;
    w.noalias() = V_.transpose() * t;
    ws.array() = w.array() * inv_d.array();
    b1.noalias() = V_ * ws;
    if (rank < p) {
      qz.noalias() = V_ * w;
      b1 += (t - qz) / (n * rho);
    }

    // Sparsity copies.
    t = beta - v2 / rho;
    kernels::soft_threshold(p, t.data(), thr_beta, b2.data());
    shrink_in = gamma - u1 / rho;
    kernels::soft_threshold_each(m, shrink_in.data(), thr_gamma.data(),
                                 g1.data());

    // Constraint copy: project onto {(A g, g)}.
    z.head(p) = beta - v3 / rho;
    z.tail(m) = gamma - u2 / rho;
    z -= Q_ * (Q_.transpose() * z).eval();
    b3 = z.head(p);
    g2 = z.tail(m);

    beta_new = (b1 + b2 + b3) / 3.0;
    gamma_new = (g1 + g2) / 2.0;

    r_pri = std::sqrt((b1 - beta_new).squaredNorm() +
                      (b2 - beta_new).squaredNorm() +
                      (b3 - beta_new).squaredNorm() +
                      (g1 - gamma_new).squaredNorm() +
                      (g2 - gamma_new).squaredNorm());
    r_dual = rho * std::sqrt(3.0 * (beta_new - beta).squaredNorm() +
                             2.0 * (gamma_new - gamma).squaredNorm());

    v1 += rho * (b1 - beta_new);
    v2 += rho * (b2 - beta_new);
    v3 += rho * (b3 - beta_new);
    u1 += rho * (g1 - gamma_new);
    u2 += rho * (g2 - gamma_new);
    beta.swap(beta_new);
    gamma.swap(gamma_new);

    if (cfg.debug_checks) {
      const double scale =
          1.0 + std::max({v1.lpNorm<Eigen::Infinity>(),
                          v2.lpNorm<Eigen::Infinity>(),
                          u1.lpNorm<Eigen::Infinity>()});
      if ((v1 + v2 + v3).lpNorm<Eigen::Infinity>() > 1e-8 * scale ||
          (u1 + u2).lpNorm<Eigen::Infinity>() > 1e-8 * scale)
        throw std::runtime_error("fit: dual averages drifted from zero");
    }

    const double copy_norm =
        std::sqrt(b1.squaredNorm() + b2.squaredNorm() + b3.squaredNorm() +
                  g1.squaredNorm() + g2.squaredNorm());
    const double avg_norm =
        std::sqrt(3.0 * beta.squaredNorm() + 2.0 * gamma.squaredNorm());
    const double eps_pri =
        cfg.eps_abs * dim_term + cfg.eps_rel * std::max(copy_norm, avg_norm);
    const double eps_dual =
        cfg.eps_abs * dim_term +
        cfg.eps_rel * std::sqrt(v1.squaredNorm() + v2.squaredNorm() +
                                v3.squaredNorm() + u1.squaredNorm() +
                                u2.squaredNorm());
    if (r_pri <= eps_pri && r_dual <= eps_dual) {
      converged = true;
      iterations = it;
      break;
    }
  }

  FitResult res;
  res.gamma = gamma;
  res.beta = agg_.expand(gamma);
  res.consensus_gap = (beta - res.beta).lpNorm<Eigen::Infinity>();
  res.converged = converged;
  res.iterations = iterations;
  res.primal_residual = r_pri;
  res.dual_residual = r_dual;
  res.objective = 0.5 / n * (yc_ - Xc_ * res.beta).squaredNorm() +
                  penalty_term(res.beta, res.gamma, cfg);
  if (intercept_) res.intercept = y_mean_ - col_mean_.dot(res.beta);
  res.state = SolverState{std::move(beta), std::move(gamma), std::move(v1),
                          std::move(v2), std::move(v3), std::move(u1),
                          std::move(u2)};
  return res;
}

FitResult fit(const CountDesign& X, const Eigen::VectorXd& y,
              const FeatureTree& tree, const FitConfig& cfg,
              const SolverState* warm) {
  const SolverWorkspace ws(X, y, tree, cfg.intercept);
  return ws.solve(cfg, warm);
}

std::vector<FitResult> fit_path(const CountDesign& X, const Eigen::VectorXd& y,
                                const FeatureTree& tree,
                                const std::vector<GridPoint>& grid,
                                const FitConfig& base) {
  const SolverWorkspace ws(X, y, tree, base.intercept);

  std::vector<std::vector<int>> lanes;
  std::map<double, int> lane_of;
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    auto [it, inserted] =
        lane_of.try_emplace(grid[i].alpha, static_cast<int>(lanes.size()));
    if (inserted) lanes.emplace_back();
    auto& lane = lanes[it->second];
    if (!lane.empty() && grid[lane.back()].lambda < grid[i].lambda)
      throw std::invalid_argument(
          "fit_path: lambda must be non-increasing within an alpha lane");
    lane.push_back(i);
  }

  std::vector<FitResult> out(grid.size());
  const int threads = runtime::threads();
  const auto lane_count = static_cast<std::int64_t>(lanes.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) \
    if (threads > 1)
  for (std::int64_t l = 0; l < lane_count; ++l) {
    const SolverState* warm = nullptr;
    for (int idx : lanes[l]) {
      FitConfig cfg = base;
      cfg.lambda = grid[idx].lambda;
      cfg.alpha = grid[idx].alpha;
      out[idx] = ws.solve(cfg, warm);
      warm = &out[idx].state;
    }
  }
  return out;
}

double objective_value(const CountDesign& X, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& beta,
                       const Eigen::VectorXd& gamma, const FitConfig& cfg) {
  if (beta.size() != X.cols() || y.size() != X.rows())
    throw std::invalid_argument("objective: size mismatch");
  const double n = static_cast<double>(X.rows());
  return 0.5 / n * (y - X.multiply(beta)).squaredNorm() +
         penalty_term(beta, gamma, cfg);
}

double objective_value(const CountDesign& X, const Eigen::VectorXd& y,
                       const AggregationMatrix& agg,
                       const Eigen::VectorXd& beta,
                       const Eigen::VectorXd& gamma, const FitConfig& cfg) {
  const double gap = (beta - agg.expand(gamma)).lpNorm<Eigen::Infinity>();
  if (gap > 1e-6)
    std::cerr << "objective: beta deviates from A gamma by " << gap << "\n";
  return objective_value(X, y, beta, gamma, cfg);
}

double kkt_residual(const CountDesign& X, const Eigen::VectorXd& y,
                    const AggregationMatrix& agg, const Eigen::VectorXd& beta,
                    const Eigen::VectorXd& gamma, const FitConfig& cfg,
                    double zero_tol) {
  validate_config(cfg);
  const int p = agg.features();
  const int m = agg.nodes();
  if (beta.size() != p || gamma.size() != m || X.cols() != p ||
      y.size() != X.rows())
    throw std::invalid_argument("kkt_residual: size mismatch");
  const double n = static_cast<double>(X.rows());

  // Gradient of the smooth part at gamma, in gamma coordinates.
  const Eigen::VectorXd resid = X.multiply(agg.expand(gamma)) - y;
  Eigen::VectorXd c = agg.reduce(X.multiply_transpose(resid)) / n;

  // Free subgradient coordinates become box-constrained columns of a least
  // squares problem; fixed signs fold into the constant term.
  struct Box {
    bool is_path;  // path-indicator column (beta subgradient) or unit column
    int index;     // leaf index for paths, node index for units
    double weight;
    double value = 0.0;
  };
  std::vector<Box> boxes;
  const double wb = cfg.lambda * (1.0 - cfg.alpha);
  const double wg = cfg.lambda * cfg.alpha;
  if (wb > 0.0)
    for (int j = 0; j < p; ++j) {
      if (std::abs(beta[j]) > zero_tol) {
        const double s = beta[j] > 0.0 ? 1.0 : -1.0;
        for (std::int64_t u : agg.path(j)) c[u] += wb * s;
      } else {
        boxes.push_back({true, j, wb});
      }
    }
  if (wg > 0.0)
    for (int u = 0; u + 1 < m; ++u) {
      if (std::abs(gamma[u]) > zero_tol)
        c[u] += wg * (gamma[u] > 0.0 ? 1.0 : -1.0);
      else
        boxes.push_back({false, u, wg});
    }

  // Cyclic coordinate descent with clipping on
  // min || c + sum_i weight_i q_i z_i ||^2, z_i in [-1, 1].
  Eigen::VectorXd r = c;
  auto col_dot = [&](const Box& b) {
    if (!b.is_path) return r[b.index];
    double acc = 0.0;
    for (std::int64_t u : agg.path(b.index)) acc += r[u];
    return acc;
  };
  auto col_sq = [&](const Box& b) {
    return b.is_path ? static_cast<double>(agg.path(b.index).size()) : 1.0;
  };
  double prev = r.squaredNorm();
  for (int sweep = 0; sweep < 1000 && !boxes.empty(); ++sweep) {
    for (auto& b : boxes) {
      const double q_dot_r = b.weight * col_dot(b);
      const double q_sq = b.weight * b.weight * col_sq(b);
      double target = b.value - q_dot_r / q_sq;
      target = std::clamp(target, -1.0, 1.0);
      const double delta = (target - b.value) * b.weight;
      if (delta == 0.0) continue;
      b.value = target;
      if (b.is_path)
        for (std::int64_t u : agg.path(b.index)) r[u] += delta;
      else
        r[b.index] += delta;
    }
    const double cur = r.squaredNorm();
    if (prev - cur <= 1e-15 * (1.0 + prev)) break;
    prev = cur;
  }
  return r.norm();
}

}  // namespace treeagg
