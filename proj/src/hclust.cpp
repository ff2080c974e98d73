#include "treeagg/hclust.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace treeagg {

Linkage linkage_from_string(const std::string& name) {
  if (name == "single") return Linkage::kSingle;
  if (name == "complete") return Linkage::kComplete;
  if (name == "average") return Linkage::kAverage;
  if (name == "ward") return Linkage::kWard;
  throw std::invalid_argument("unknown linkage '" + name + "'");
}

FeatureTree build_tree_hclust(const Eigen::MatrixXd& points, Linkage linkage) {
  const int p = static_cast<int>(points.rows());
  if (p < 1) throw std::invalid_argument("hclust: no points");
  for (int i = 0; i < p; ++i)
    for (int c = 0; c < points.cols(); ++c)
      if (!std::isfinite(points(i, c)))
        throw std::invalid_argument("hclust: nonfinite coordinate");
  if (p == 1) return FeatureTree({-1}, 1, {}, {0.0});

  const bool squared = linkage == Linkage::kWard;
  const int m = 2 * p - 1;
  // Dissimilarities indexed by canonical node id; Ward keeps squared values
  // in the table and reports sqrt as the merge height.
  std::vector<double> dist(static_cast<std::size_t>(m) * m, 0.0);
  auto d = [&](int a, int b) -> double& {
    return dist[static_cast<std::size_t>(a) * m + b];
  };
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      const double sq = (points.row(i) - points.row(j)).squaredNorm();
      d(i, j) = d(j, i) = squared ? sq : std::sqrt(sq);
    }

  std::vector<int> active;
  for (int i = 0; i < p; ++i) active.push_back(i);
  std::vector<int> size(m, 1);
  std::vector<int> parent(m, -1);
  std::vector<double> heights(m, 0.0);

  for (int step = 0; step < p - 1; ++step) {
    int bi = -1, bj = -1;
    double best = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double v = d(active[a], active[b]);
        if (bi < 0 || v < best) {
          best = v;
          bi = active[a];
          bj = active[b];
        }
      }
    const int q = p + step;
    parent[bi] = parent[bj] = q;
    heights[q] = squared ? std::sqrt(best) : best;
    size[q] = size[bi] + size[bj];

    for (int k : active) {
      if (k == bi || k == bj) continue;
      const double dik = d(bi, k), djk = d(bj, k);
      double v = 0.0;
      switch (linkage) {
        case Linkage::kSingle:
          v = std::min(dik, djk);
          break;
        case Linkage::kComplete:
          v = std::max(dik, djk);
          break;
        case Linkage::kAverage:
          v = (size[bi] * dik + size[bj] * djk) / (size[bi] + size[bj]);
          break;
        case Linkage::kWard:
          v = ((size[bi] + size[k]) * dik + (size[bj] + size[k]) * djk -
               size[k] * best) /
              (size[q] + size[k]);
          break;
      }
      d(q, k) = d(k, q) = v;
    }
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](int x) { return x == bi || x == bj; }),
                 active.end());
    active.push_back(q);
  }
  return FeatureTree(std::move(parent), p, {}, std::move(heights));
}

AggregatingSet cut_by_height(const FeatureTree& tree, double threshold) {
  if (!tree.has_heights())
    throw std::invalid_argument("cut_by_height: tree has no merge heights");
  const int m = tree.node_count();
  auto qualifies = [&](int u) {
    return tree.is_leaf(u) || tree.height(u) <= threshold;
  };
  // Topmost qualifying node on each root-to-leaf path; covered[u] marks a
  // qualifying ancestor already claiming the branch.
  std::vector<char> covered(m, 0);
  for (int u = m - 2; u >= 0; --u) {
    const int pa = tree.parent(u);
    covered[u] = covered[pa] || qualifies(pa);
  }
  AggregatingSet out;
  for (int u = 0; u < m; ++u)
    if (qualifies(u) && !covered[u]) out.push_back(u);
  return out;
}

AggregatingSet cut_by_density(const FeatureTree& tree, const CountDesign& X,
                              double threshold) {
  if (X.cols() != tree.leaf_count())
    throw std::invalid_argument("cut_by_density: X/tree size mismatch");
  if (!(threshold >= 0.0))
    throw std::invalid_argument("cut_by_density: threshold must be >= 0");
  const int m = tree.node_count();
  const auto n = X.rows();

  // Aggregated-column support is the union of leaf supports (counts are
  // nonnegative), so density per node comes from one bottom-up bitset sweep.
  const std::size_t words = (static_cast<std::size_t>(n) + 63) / 64;
  std::vector<std::vector<std::uint64_t>> support(m);
  std::vector<double> density(m, 0.0);
  for (int u = 0; u < m; ++u) {
    support[u].assign(words, 0);
    if (tree.is_leaf(u)) {
      for (std::int64_t i : X.col_rows(u))
        support[u][i >> 6] |= 1ULL << (i & 63);
    } else {
      for (int c : tree.children(u))
        for (std::size_t w = 0; w < words; ++w) support[u][w] |= support[c][w];
    }
    std::int64_t nnz = 0;
    for (std::uint64_t w : support[u]) nnz += std::popcount(w);
    density[u] = static_cast<double>(nnz) / static_cast<double>(n);
  }

  AggregatingSet out;
  std::vector<int> stack{tree.root()};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    const bool split =
        !tree.is_leaf(u) &&
        std::all_of(tree.children(u).begin(), tree.children(u).end(),
                    [&](int c) { return density[c] >= threshold; });
    if (split)
      for (int c : tree.children(u)) stack.push_back(c);
    else
      out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

AggregatingSet cut_k_branches(const FeatureTree& tree, int k) {
  if (k < 1 || k > tree.leaf_count())
    throw std::invalid_argument("cut_k_branches: k out of range");
  if (!tree.has_heights())
    throw std::invalid_argument("cut_k_branches: tree has no merge heights");
  // Frontier refinement: pop the highest merge still on the frontier and
  // replace it by its children; k-1 pops of a binary dendrogram leave k
  // branches.
  auto higher = [&](int a, int b) {
    if (tree.height(a) != tree.height(b))
      return tree.height(a) < tree.height(b);
    return a < b;
  };
  std::priority_queue<int, std::vector<int>, decltype(higher)> frontier(higher);
  frontier.push(tree.root());
  int count = 1;
  AggregatingSet fixed;
  while (count < k) {
    if (frontier.empty())
      throw std::invalid_argument("cut_k_branches: k unreachable");
    const int u = frontier.top();
    frontier.pop();
    if (tree.is_leaf(u)) {
      fixed.push_back(u);
      continue;
    }
    count += static_cast<int>(tree.children(u).size()) - 1;
    if (count > k) throw std::invalid_argument("cut_k_branches: k unreachable");
    for (int c : tree.children(u)) frontier.push(c);
  }
  while (!frontier.empty()) {
    fixed.push_back(frontier.top());
    frontier.pop();
  }
  std::sort(fixed.begin(), fixed.end());
  return fixed;
}

}  // namespace treeagg
