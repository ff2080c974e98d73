#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

// Rooted feature tree over p features.  Nodes use a canonical internal
// numbering: leaves occupy 0..p-1 in feature order, internal nodes follow,
// every child index is smaller than its parent index, and the root is the
// last node.  That ordering makes one forward sweep a bottom-up traversal
// and one backward sweep top-down, which the aggregation routines rely on.

namespace treeagg {

class FeatureTree {
 public:
  // `parent` is over the canonical numbering (root entry -1).  Labels are
  // external node names kept for round-tripping; when empty they default to
  // "1".."m".  Heights, when present, carry the merge height per node
  // (leaves 0) and must be nonnegative.
  FeatureTree(std::vector<int> parent, int leaf_count,
              std::vector<std::string> labels = {},
              std::vector<double> heights = {});

  // Build from (node, parent) links with arbitrary string ids; a node whose
  // parent field is empty is the root.  Leaves (nodes that never appear as a
  // parent) get feature indices by order of appearance.  Internal nodes with
  // a single child violate fullness and are rejected, unless collapse_unary
  // is set, in which case they are spliced out.  Throws std::invalid_argument
  // on duplicate ids, unknown parents, multiple roots, cycles, or orphan
  // components.
  static FeatureTree from_links(
      const std::vector<std::pair<std::string, std::string>>& links,
      const std::vector<double>& heights = {}, bool collapse_unary = false);

  int node_count() const { return static_cast<int>(parent_.size()); }
  int leaf_count() const { return leaf_count_; }
  int root() const { return node_count() - 1; }
  int parent(int u) const { return parent_[u]; }
  bool is_leaf(int u) const { return u < leaf_count_; }
  const std::vector<int>& children(int u) const { return children_[u]; }
  const std::string& label(int u) const { return labels_[u]; }

  bool has_heights() const { return !heights_.empty(); }
  double height(int u) const { return heights_[u]; }

  // Sorted feature indices of the subtree rooted at u; cached per node.
  const std::vector<int>& leaves_below(int u) const { return leaves_[u]; }

  bool is_ancestor_or_self(int anc, int u) const;

 private:
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<std::string> labels_;
  std::vector<double> heights_;
  std::vector<std::vector<int>> leaves_;
  int leaf_count_ = 0;
};

// An aggregating set: node ids whose branches partition the leaves.  Kept
// sorted by node id.
using AggregatingSet = std::vector<int>;

bool is_aggregating_set(const FeatureTree& tree, const AggregatingSet& set);

// Coarsest aggregating set merging features whose coefficients agree within
// `tol`: the maximal nodes whose leaf coefficients span a range <= tol.
// Maximality makes the result unique and independent of any sibling order.
// tol must be >= 0 (0 means exact ties only).
AggregatingSet coarsest_aggregating_set(const FeatureTree& tree,
                                        const Eigen::VectorXd& beta,
                                        double tol = 0.0);

}  // namespace treeagg
