#pragma once

#include <Eigen/Core>

// Dense linear-algebra helpers shared by the solver: rank-revealing compact
// SVD, the projector onto the consensus subspace {(A gamma, gamma)}, and
// scalar/vector soft thresholding.

namespace treeagg {

struct CompactSVD {
  Eigen::MatrixXd U;       // left vectors, one column per retained value
  Eigen::VectorXd d;       // singular values, descending, all > 0
  Eigen::MatrixXd V;       // right vectors
  int rank = 0;
};

// Singular values below rel_tol * d_max are treated as zero and dropped.
// Throws std::runtime_error if the decomposition fails to converge.
CompactSVD compact_svd(const Eigen::MatrixXd& M, double rel_tol = 1e-12);

// Orthogonal projector onto null([I : -A]) = {(A g, g)}, held as the right
// singular vectors Q of [I : -A] with nonzero singular value (exactly p of
// them since the block starts with an identity) and applied as
// z - Q (Q^T z).
class NullspaceProjector {
 public:
  explicit NullspaceProjector(const Eigen::MatrixXd& A);

  Eigen::VectorXd project(const Eigen::VectorXd& z) const;

  const Eigen::MatrixXd& Q() const { return Q_; }
  int features() const { return p_; }
  int nodes() const { return m_; }

 private:
  Eigen::MatrixXd Q_;  // (p + m) x p
  int p_ = 0, m_ = 0;
};

inline double soft_threshold(double x, double thr) {
  if (x > thr) return x - thr;
  if (x < -thr) return x + thr;
  return 0.0;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double thr);

// (I - (1/n) 1 1^T) v: subtracts the mean, so the result sums to zero and
// the map is idempotent.
Eigen::VectorXd centering_projection(const Eigen::VectorXd& v);

}  // namespace treeagg
