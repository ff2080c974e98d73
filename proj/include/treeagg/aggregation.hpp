#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "treeagg/count_design.hpp"
#include "treeagg/tree.hpp"

// Binary aggregation matrix A in {0,1}^{p x m} for a feature tree with p
// leaves and m nodes: A[j,u] = 1 iff node u lies on the path from leaf j to
// the root (self included).  Coefficients expand along root-to-leaf paths,
// beta = A gamma, so a single nonzero gamma at a node shifts its whole
// branch by a constant.

namespace treeagg {

class AggregationMatrix {
 public:
  explicit AggregationMatrix(const FeatureTree& tree);

  int features() const { return p_; }
  int nodes() const { return m_; }

  // beta = A gamma: per-leaf path sums.
  Eigen::VectorXd expand(const Eigen::VectorXd& gamma) const;
  // A^T v: per-node sums of v over the node's leaves.
  Eigen::VectorXd reduce(const Eigen::VectorXd& v) const;

  std::span<const std::int64_t> path(int leaf) const;

  Eigen::MatrixXd dense() const;

 private:
  int p_ = 0, m_ = 0;
  std::vector<std::int64_t> row_ptr_, row_nodes_;  // leaf -> path nodes
  std::vector<std::int64_t> col_ptr_, col_leaves_;  // node -> leaves
};

// ||X A_u||_2 for every node u: norms of the aggregated design columns.
Eigen::VectorXd aggregated_col_norms(const CountDesign& X,
                                     const FeatureTree& tree);

}  // namespace treeagg
