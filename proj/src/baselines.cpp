#include "treeagg/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "treeagg/linop.hpp"

namespace treeagg {

LassoResult lasso_cd(const CountDesign& X, const Eigen::VectorXd& y,
                     double lambda, const LassoConfig& cfg,
                     const Eigen::VectorXd* warm) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (y.size() != n) throw std::invalid_argument("lasso: response length");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lasso: lambda must be finite and >= 0");
  Eigen::VectorXd pf = Eigen::VectorXd::Ones(p);
  if (!cfg.penalty_factor.empty()) {
    if (static_cast<std::int64_t>(cfg.penalty_factor.size()) != p)
      throw std::invalid_argument("lasso: penalty factor length");
    for (std::int64_t j = 0; j < p; ++j) {
      pf[j] = cfg.penalty_factor[j];
      if (!(pf[j] >= 0.0))
        throw std::invalid_argument("lasso: penalty factors must be >= 0");
    }
  }

  LassoResult res;
  res.beta = warm ? *warm : Eigen::VectorXd::Zero(p);
  if (warm && warm->size() != p)
    throw std::invalid_argument("lasso: warm start length");

  const double nd = static_cast<double>(n);
  Eigen::VectorXd r = y - X.multiply(res.beta);
  if (cfg.intercept) {
    res.intercept = r.mean();
    r.array() -= res.intercept;
  }

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    for (std::int64_t j = 0; j < p; ++j) {
      const double sq = X.col_sq_norm(j);
      if (sq == 0.0) {
        res.beta[j] = 0.0;
        continue;
      }
      const double old = res.beta[j];
      const double z = X.col_dot(j, r) / nd + sq / nd * old;
      const double next = soft_threshold(z, lambda * pf[j]) * nd / sq;
      if (next != old) {
        const double delta = next - old;
        const auto rows = X.col_rows(j);
        const auto vals = X.col_values(j);
        for (std::size_t k = 0; k < rows.size(); ++k)
          r[rows[k]] -= vals[k] * delta;
        res.beta[j] = next;
      }
    }
    if (cfg.intercept) {
      const double shift = r.mean();
      res.intercept += shift;
      r.array() -= shift;
    }

    double viol = 0.0;
    for (std::int64_t j = 0; j < p; ++j) {
      if (X.col_sq_norm(j) == 0.0) continue;
      const double g = X.col_dot(j, r) / nd;
      const double lam = lambda * pf[j];
      const double v = res.beta[j] != 0.0
                           ? std::abs(g - lam * (res.beta[j] > 0 ? 1.0 : -1.0))
                           : std::max(0.0, std::abs(g) - lam);
      viol = std::max(viol, v);
    }
    if (cfg.intercept) viol = std::max(viol, std::abs(r.mean()));
    res.sweeps = sweep;
    if (viol <= cfg.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

namespace {

struct CenteredDense {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  Eigen::VectorXd col_mean;
  double y_mean = 0.0;
};

CenteredDense densify(const CountDesign& X, const Eigen::VectorXd& y,
                      bool center) {
  CenteredDense out;
  out.X = X.dense();
  out.y = y;
  out.col_mean = Eigen::VectorXd::Zero(X.cols());
  if (center) {
    out.col_mean = out.X.colwise().mean();
    out.y_mean = y.mean();
    out.X.rowwise() -= out.col_mean.transpose();
    out.y.array() -= out.y_mean;
  }
  return out;
}

}  // namespace

std::vector<RidgeResult> ridge_svd(const CountDesign& X,
                                   const Eigen::VectorXd& y,
                                   const std::vector<double>& lambdas,
                                   bool intercept) {
  if (y.size() != X.rows()) throw std::invalid_argument("ridge: response length");
  const double n = static_cast<double>(X.rows());
  const CenteredDense cd = densify(X, y, intercept);
  const CompactSVD svd = compact_svd(cd.X);
  const Eigen::VectorXd uty = svd.U.transpose() * cd.y;
  std::vector<RidgeResult> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    if (!(lambda >= 0.0))
      throw std::invalid_argument("ridge: lambda must be >= 0");
    Eigen::VectorXd scale =
        svd.d.array() / (svd.d.array().square() + n * lambda);
    RidgeResult r;
    r.beta = svd.V * scale.cwiseProduct(uty).eval();
    if (intercept) r.intercept = cd.y_mean - cd.col_mean.dot(r.beta);
    out.push_back(std::move(r));
  }
  return out;
}

RidgeResult ridge_svd(const CountDesign& X, const Eigen::VectorXd& y,
                      double lambda, bool intercept) {
  return ridge_svd(X, y, std::vector<double>{lambda}, intercept)[0];
}

Eigen::VectorXd ols(const CountDesign& X, const Eigen::VectorXd& y,
                    bool* rank_deficient) {
  if (y.size() != X.rows()) throw std::invalid_argument("ols: response length");
  const CompactSVD svd = compact_svd(X.dense());
  if (rank_deficient) *rank_deficient = svd.rank < X.cols();
  return svd.V *
         (svd.U.transpose() * y).cwiseQuotient(svd.d).eval();
}

Eigen::VectorXd oracle_ls(const CountDesign& X, const Eigen::VectorXd& y,
                          const FeatureTree& tree,
                          const std::vector<int>& nodes) {
  if (X.cols() != tree.leaf_count())
    throw std::invalid_argument("oracle_ls: X/tree size mismatch");
  if (y.size() != X.rows())
    throw std::invalid_argument("oracle_ls: response length");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  if (nodes.empty()) return beta;

  Eigen::MatrixXd B(X.rows(), nodes.size());
  for (std::size_t c = 0; c < nodes.size(); ++c)
    B.col(c) = X.sum_cols(tree.leaves_below(nodes[c]));
  const CompactSVD svd = compact_svd(B);
  if (svd.rank < static_cast<int>(nodes.size()))
    throw std::runtime_error("oracle_ls: aggregated design is singular");
  const Eigen::VectorXd theta =
      svd.V * (svd.U.transpose() * y).cwiseQuotient(svd.d).eval();
  for (std::size_t c = 0; c < nodes.size(); ++c)
    for (int leaf : tree.leaves_below(nodes[c])) beta[leaf] = theta[c];
  return beta;
}

Eigen::VectorXi signed_support(const Eigen::VectorXd& v) {
  Eigen::VectorXi s(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    s[i] = v[i] > 0.0 ? 1 : (v[i] < 0.0 ? -1 : 0);
  return s;
}

void validate(const BlockSpec& spec) {
  if (spec.k < 1 || spec.n < 1 || spec.n % spec.k != 0)
    throw std::invalid_argument("blocks: n must be a positive multiple of k");
  if (spec.beta_tilde.size() != spec.k)
    throw std::invalid_argument("blocks: beta_tilde must have length k");
  if (spec.beta_tilde[spec.k - 1] != 0.0)
    throw std::invalid_argument("blocks: last block coefficient must be 0");
}

Eigen::VectorXd oracle_lasso_identity(const Eigen::VectorXd& y,
                                      const BlockSpec& spec, double lambda) {
  validate(spec);
  if (y.size() != spec.n)
    throw std::invalid_argument("oracle_lasso_identity: response length");
  if (!(lambda >= 0.0))
    throw std::invalid_argument("oracle_lasso_identity: lambda must be >= 0");
  const std::int64_t size = spec.n / spec.k;
  Eigen::VectorXd blocks(spec.k);
  for (int j = 0; j < spec.k; ++j)
    blocks[j] =
        soft_threshold(y.segment(j * size, size).mean(), lambda * spec.k);
  return broadcast_blocks(blocks, spec.n);
}

Eigen::VectorXd lasso_identity(const Eigen::VectorXd& y, double t) {
  if (!(t >= 0.0))
    throw std::invalid_argument("lasso_identity: threshold must be >= 0");
  return soft_threshold(y, t);
}

Eigen::VectorXd broadcast_blocks(const Eigen::VectorXd& blocks,
                                 std::int64_t n) {
  const auto k = blocks.size();
  if (k < 1 || n % k != 0)
    throw std::invalid_argument("broadcast: n must be a multiple of k");
  const auto size = n / k;
  Eigen::VectorXd out(n);
  for (Eigen::Index j = 0; j < k; ++j)
    out.segment(j * size, size).setConstant(blocks[j]);
  return out;
}

}  // namespace treeagg
