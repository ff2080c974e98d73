#pragma once

#include <string>

#include <Eigen/Core>

#include "treeagg/count_design.hpp"
#include "treeagg/tree.hpp"

// Agglomerative clustering over feature side information plus the cut rules
// that turn a dendrogram into an aggregating set.  Merges follow
// Lance-Williams updates on Euclidean distances; at equal dissimilarity the
// pair with the lexicographically smallest cluster indices merges first, so
// a given input always yields the same tree.

namespace treeagg {

enum class Linkage { kSingle, kComplete, kAverage, kWard };

Linkage linkage_from_string(const std::string& name);

// `points` holds one row per feature.  Leaves keep the row order as feature
// indices; merge heights are recorded per internal node (Ward uses the
// ward.D2 convention: Lance-Williams on squared distances, square root
// reported).
FeatureTree build_tree_hclust(const Eigen::MatrixXd& points,
                              Linkage linkage = Linkage::kComplete);

// Branch roots after cutting all merges strictly above `threshold`.
// Requires merge heights; threshold below every merge gives all leaves,
// above the root merge gives {root}.
AggregatingSet cut_by_height(const FeatureTree& tree, double threshold);

// Split from the root while every child branch keeps aggregated-column
// density (fraction of samples with a positive count) at or above
// `threshold` in X; stop otherwise.  threshold 0 gives all leaves, any
// threshold above the densest branch gives {root}.
AggregatingSet cut_by_density(const FeatureTree& tree, const CountDesign& X,
                              double threshold);

// Remove the k-1 highest merges of a binary dendrogram (ties broken toward
// the later merge) and return the k branch roots.  k = 1 gives {root}.
AggregatingSet cut_k_branches(const FeatureTree& tree, int k);

}  // namespace treeagg
