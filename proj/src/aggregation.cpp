#include "treeagg/aggregation.hpp"

#include <algorithm>
#include <stdexcept>

#include "treeagg/kernels.hpp"

namespace treeagg {

AggregationMatrix::AggregationMatrix(const FeatureTree& tree)
    : p_(tree.leaf_count()), m_(tree.node_count()) {
  row_ptr_.assign(p_ + 1, 0);
  for (int j = 0; j < p_; ++j) {
    std::vector<std::int64_t> path;
    for (int u = j; u != -1; u = tree.parent(u)) path.push_back(u);
    std::sort(path.begin(), path.end());
    row_nodes_.insert(row_nodes_.end(), path.begin(), path.end());
    row_ptr_[j + 1] = static_cast<std::int64_t>(row_nodes_.size());
  }
  col_ptr_.assign(m_ + 1, 0);
  for (int u = 0; u < m_; ++u) {
    const auto& lv = tree.leaves_below(u);
    col_leaves_.insert(col_leaves_.end(), lv.begin(), lv.end());
    col_ptr_[u + 1] = static_cast<std::int64_t>(col_leaves_.size());
  }
}

Eigen::VectorXd AggregationMatrix::expand(const Eigen::VectorXd& gamma) const {
  if (gamma.size() != m_)
    throw std::invalid_argument("aggregation: gamma size mismatch");
  Eigen::VectorXd beta(p_);
  kernels::compressed_rows_apply(p_, row_ptr_.data(), row_nodes_.data(),
                                 nullptr, gamma.data(), beta.data());
  return beta;
}

Eigen::VectorXd AggregationMatrix::reduce(const Eigen::VectorXd& v) const {
  if (v.size() != p_)
    throw std::invalid_argument("aggregation: leaf vector size mismatch");
  Eigen::VectorXd out(m_);
  kernels::compressed_rows_apply(m_, col_ptr_.data(), col_leaves_.data(),
                                 nullptr, v.data(), out.data());
  return out;
}

std::span<const std::int64_t> AggregationMatrix::path(int leaf) const {
  return {row_nodes_.data() + row_ptr_[leaf],
          static_cast<std::size_t>(row_ptr_[leaf + 1] - row_ptr_[leaf])};
}

Eigen::MatrixXd AggregationMatrix::dense() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p_, m_);
  for (int j = 0; j < p_; ++j)
    for (std::int64_t k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k)
      A(j, row_nodes_[k]) = 1.0;
  return A;
}

Eigen::VectorXd aggregated_col_norms(const CountDesign& X,
                                     const FeatureTree& tree) {
  if (X.cols() != tree.leaf_count())
    throw std::invalid_argument("aggregated norms: X/tree size mismatch");
  Eigen::VectorXd out(tree.node_count());
  for (int u = 0; u < tree.node_count(); ++u)
    out[u] = X.sum_cols(tree.leaves_below(u)).norm();
  return out;
}

}  // namespace treeagg
