#include "treeagg/linop.hpp"

#include <stdexcept>

#include <Eigen/SVD>

#include "treeagg/kernels.hpp"

namespace treeagg {

CompactSVD compact_svd(const Eigen::MatrixXd& M, double rel_tol) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw std::runtime_error("compact_svd: decomposition did not converge");
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cut = sv.size() > 0 ? sv[0] * rel_tol : 0.0;
  int rank = 0;
  while (rank < sv.size() && sv[rank] > cut) ++rank;
  CompactSVD out;
  out.rank = rank;
  out.U = svd.matrixU().leftCols(rank);
  out.V = svd.matrixV().leftCols(rank);
  out.d = sv.head(rank);
  return out;
}

NullspaceProjector::NullspaceProjector(const Eigen::MatrixXd& A) {
  p_ = static_cast<int>(A.rows());
  m_ = static_cast<int>(A.cols());
  Eigen::MatrixXd B(p_, p_ + m_);
  B << Eigen::MatrixXd::Identity(p_, p_), -A;
  const CompactSVD svd = compact_svd(B);
  if (svd.rank != p_)
    throw std::runtime_error(
        "nullspace projector: [I : -A] must have exactly p nonzero singular "
        "values");
  Q_ = svd.V;
}

Eigen::VectorXd NullspaceProjector::project(const Eigen::VectorXd& z) const {
  if (z.size() != p_ + m_)
    throw std::invalid_argument("nullspace projector: size mismatch");
  return z - Q_ * (Q_.transpose() * z);
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double thr) {
  Eigen::VectorXd out(x.size());
  kernels::soft_threshold(x.size(), x.data(), thr, out.data());
  return out;
}

Eigen::VectorXd centering_projection(const Eigen::VectorXd& v) {
  if (v.size() == 0) return v;
  return v.array() - v.mean();
}

}  // namespace treeagg
