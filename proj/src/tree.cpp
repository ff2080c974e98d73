#include "treeagg/tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace treeagg {

FeatureTree::FeatureTree(std::vector<int> parent, int leaf_count,
                         std::vector<std::string> labels,
                         std::vector<double> heights)
    : parent_(std::move(parent)),
      labels_(std::move(labels)),
      heights_(std::move(heights)),
      leaf_count_(leaf_count) {
  const int m = node_count();
  if (m == 0) throw std::invalid_argument("tree: empty node set");
  if (leaf_count_ < 1 || leaf_count_ > m)
    throw std::invalid_argument("tree: leaf count out of range");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != m)
    throw std::invalid_argument("tree: label count mismatch");
  if (!heights_.empty() && static_cast<int>(heights_.size()) != m)
    throw std::invalid_argument("tree: height count mismatch");
  if (leaf_count_ == m && m != 1)
    throw std::invalid_argument("tree: multiple nodes but no internal node");

  children_.assign(m, {});
  for (int u = 0; u < m; ++u) {
    const int pa = parent_[u];
    if (u == m - 1) {
      if (pa != -1) throw std::invalid_argument("tree: last node must be root");
      continue;
    }
    if (pa <= u || pa >= m)
      throw std::invalid_argument(
          "tree: parent index must exceed child index (canonical order)");
    children_[pa].push_back(u);
  }
  for (int u = leaf_count_; u < m; ++u) {
    if (children_[u].empty())
      throw std::invalid_argument("tree: internal node without children");
    if (children_[u].size() == 1)
      throw std::invalid_argument(
          "tree: internal node with a single child (tree must be full)");
  }
  for (int u = 0; u < leaf_count_; ++u)
    if (!children_[u].empty())
      throw std::invalid_argument("tree: leaf node with children");

  if (labels_.empty()) {
    labels_.resize(m);
    for (int u = 0; u < m; ++u) labels_[u] = std::to_string(u + 1);
  }
  if (!heights_.empty())
    for (double h : heights_)
      if (!(h >= 0.0)) throw std::invalid_argument("tree: negative height");

  leaves_.assign(m, {});
  for (int u = 0; u < m; ++u) {
    if (is_leaf(u)) {
      leaves_[u] = {u};
      continue;
    }
    for (int c : children_[u])
      leaves_[u].insert(leaves_[u].end(), leaves_[c].begin(), leaves_[c].end());
    std::sort(leaves_[u].begin(), leaves_[u].end());
  }
}

FeatureTree FeatureTree::from_links(
    const std::vector<std::pair<std::string, std::string>>& links,
    const std::vector<double>& heights, bool collapse_unary) {
  const int m = static_cast<int>(links.size());
  if (m == 0) throw std::invalid_argument("tree: no nodes");
  if (!heights.empty() && static_cast<int>(heights.size()) != m)
    throw std::invalid_argument("tree: height count mismatch");

  std::unordered_map<std::string, int> row_of;
  row_of.reserve(links.size());
  for (int i = 0; i < m; ++i)
    if (!row_of.emplace(links[i].first, i).second)
      throw std::invalid_argument("tree: duplicate node id '" + links[i].first +
                                  "'");

  int root_row = -1;
  for (int i = 0; i < m; ++i) {
    const auto& [id, pa] = links[i];
    if (pa.empty()) {
      if (root_row >= 0)
        throw std::invalid_argument("tree: multiple roots ('" +
                                    links[root_row].first + "' and '" + id +
                                    "')");
      root_row = i;
    } else if (!row_of.count(pa)) {
      throw std::invalid_argument("tree: unknown parent id '" + pa + "'");
    }
  }
  if (root_row < 0) throw std::invalid_argument("tree: no root node");

  // Leaves in order of appearance, then internal nodes in postorder from the
  // root so children always precede parents in the canonical numbering.
  std::vector<std::vector<int>> child_rows(m);
  for (int i = 0; i < m; ++i)
    if (i != root_row) child_rows[row_of[links[i].second]].push_back(i);

  std::vector<int> canon_of(m, -1);
  int next = 0;
  for (int i = 0; i < m; ++i)
    if (child_rows[i].empty()) canon_of[i] = next++;
  const int leaf_count = next;
  if (leaf_count == 0) throw std::invalid_argument("tree: cyclic parent links");

  std::vector<int> stack{root_row};
  std::vector<int> state(m, 0);
  std::vector<int> postorder;
  while (!stack.empty()) {
    const int i = stack.back();
    if (state[i] == 0) {
      state[i] = 1;
      for (auto it = child_rows[i].rbegin(); it != child_rows[i].rend(); ++it) {
        if (state[*it] == 1)
          throw std::invalid_argument("tree: cyclic parent links");
        stack.push_back(*it);
      }
    } else {
      stack.pop_back();
      state[i] = 2;
      if (!child_rows[i].empty()) postorder.push_back(i);
    }
  }
  for (int i : postorder) canon_of[i] = next++;
  if (next != m)
    throw std::invalid_argument(
        "tree: orphan nodes not reachable from the root");

  std::vector<int> parent(m, -1);
  std::vector<std::string> labels(m);
  std::vector<double> hts(heights.empty() ? 0 : m, 0.0);
  for (int i = 0; i < m; ++i) {
    const int u = canon_of[i];
    labels[u] = links[i].first;
    if (i != root_row) parent[u] = canon_of[row_of[links[i].second]];
    if (!heights.empty()) hts[u] = heights[i];
  }

  if (collapse_unary) {
    // Splice out internal nodes with a single child, bottom up.  A node's
    // children live at smaller indices, so by the time u is inspected its
    // subtree is already in final form.
    std::vector<std::vector<int>> kids(m);
    for (int u = 0; u + 1 < m; ++u) kids[parent[u]].push_back(u);
    std::vector<char> alive(m, 1);
    for (int u = leaf_count; u < m; ++u) {
      if (kids[u].size() != 1) continue;
      alive[u] = 0;
      const int c = kids[u].front();
      parent[c] = parent[u];
      if (parent[u] != -1) {
        auto& up = kids[parent[u]];
        std::replace(up.begin(), up.end(), u, c);
      }
    }
    std::vector<int> new_id(m, -1);
    int kept = 0;
    for (int u = 0; u < m; ++u)
      if (alive[u]) new_id[u] = kept++;
    std::vector<int> parent2(kept, -1);
    std::vector<std::string> labels2(kept);
    std::vector<double> hts2(hts.empty() ? 0 : kept, 0.0);
    for (int u = 0; u < m; ++u) {
      if (!alive[u]) continue;
      const int v = new_id[u];
      parent2[v] = parent[u] == -1 ? -1 : new_id[parent[u]];
      labels2[v] = std::move(labels[u]);
      if (!hts.empty()) hts2[v] = hts[u];
    }
    return FeatureTree(std::move(parent2), leaf_count, std::move(labels2),
                       std::move(hts2));
  }
  return FeatureTree(std::move(parent), leaf_count, std::move(labels),
                     std::move(hts));
}

bool FeatureTree::is_ancestor_or_self(int anc, int u) const {
  for (int v = u; v != -1; v = parent_[v])
    if (v == anc) return true;
  return false;
}

bool is_aggregating_set(const FeatureTree& tree, const AggregatingSet& set) {
  std::vector<int> cover(tree.leaf_count(), 0);
  for (int u : set) {
    if (u < 0 || u >= tree.node_count()) return false;
    for (int j : tree.leaves_below(u)) ++cover[j];
  }
  return std::all_of(cover.begin(), cover.end(),
                     [](int c) { return c == 1; });
}

AggregatingSet coarsest_aggregating_set(const FeatureTree& tree,
                                        const Eigen::VectorXd& beta,
                                        double tol) {
  const int m = tree.node_count();
  const int p = tree.leaf_count();
  if (beta.size() != p)
    throw std::invalid_argument("coarsest_aggregating_set: beta size mismatch");
  if (!(tol >= 0.0))
    throw std::invalid_argument("coarsest_aggregating_set: tol must be >= 0");

  // One bottom-up sweep gives each node's leaf-coefficient range; a branch
  // may merge exactly when that range is <= tol.
  std::vector<double> lo(m), hi(m);
  for (int u = 0; u < m; ++u) {
    if (tree.is_leaf(u)) {
      lo[u] = hi[u] = beta[u];
      continue;
    }
    lo[u] = beta[tree.leaves_below(u).front()];
    hi[u] = lo[u];
    for (int c : tree.children(u)) {
      lo[u] = std::min(lo[u], lo[c]);
      hi[u] = std::max(hi[u], hi[c]);
    }
  }

  AggregatingSet out;
  for (int u = 0; u < m; ++u) {
    const bool ok = (hi[u] - lo[u]) <= tol;
    if (!ok) continue;
    const int pa = tree.parent(u);
    if (pa == -1 || (hi[pa] - lo[pa]) > tol) out.push_back(u);
  }
  return out;
}

}  // namespace treeagg
