#include <doctest.h>

#include <vector>

#include <Eigen/Dense>

#include "support/reference.hpp"
#include "treeagg/aggregation.hpp"
#include "treeagg/count_design.hpp"
#include "treeagg/rng.hpp"
#include "treeagg/tree.hpp"

using treeagg::AggregationMatrix;
using treeagg::CountDesign;
using treeagg::FeatureTree;
using treeagg::Rng;

TEST_CASE("dense entries mark the path from each leaf to the root") {
  // Five leaves, two branch nodes, one root.
  const FeatureTree t({5, 5, 5, 6, 6, 7, 7, -1}, 5);
  const AggregationMatrix A(t);
  const Eigen::MatrixXd D = A.dense();
  REQUIRE(D.rows() == 5);
  REQUIRE(D.cols() == 8);
  Eigen::VectorXd row0 = Eigen::VectorXd::Zero(8);
  row0[0] = row0[5] = row0[7] = 1.0;
  CHECK((D.row(0).transpose() - row0).norm() == 0.0);
  // The root column is all ones and each leaf column is a basis vector.
  CHECK(D.col(7).sum() == 5.0);
  for (int j = 0; j < 5; ++j) {
    CHECK(D.col(j).sum() == 1.0);
    CHECK(D(j, j) == 1.0);
  }
  // Row sums equal the inclusive leaf depth.
  for (int j = 0; j < 5; ++j) CHECK(D.row(j).sum() == 3.0);
}

TEST_CASE("degenerate and star shapes") {
  const AggregationMatrix single(FeatureTree({-1}, 1));
  CHECK((single.dense() - Eigen::MatrixXd::Ones(1, 1)).norm() == 0.0);

  const int p = 6;
  std::vector<int> parent(p + 1, p);
  parent[p] = -1;
  const AggregationMatrix star(FeatureTree(parent, p));
  Eigen::MatrixXd expect(p, p + 1);
  expect << Eigen::MatrixXd::Identity(p, p), Eigen::VectorXd::Ones(p);
  CHECK((star.dense() - expect).norm() == 0.0);
}

TEST_CASE("expand and reduce agree with the dense matrix") {
  Rng rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    Rng local = rng.spawn(rep);
    const FeatureTree t =
        refimpl::random_full_tree(local, 2 + static_cast<int>(local.uniform_int(10)));
    const AggregationMatrix A(t);
    const Eigen::MatrixXd D = refimpl::dense_paths(t);
    CHECK((A.dense() - D).norm() == 0.0);

    Eigen::VectorXd gamma(t.node_count()), v(t.leaf_count());
    for (int u = 0; u < t.node_count(); ++u) gamma[u] = local.normal();
    for (int j = 0; j < t.leaf_count(); ++j) v[j] = local.normal();
    CHECK((A.expand(gamma) - D * gamma).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((A.reduce(v) - D.transpose() * v).lpNorm<Eigen::Infinity>() <= 1e-12);

    // Path iteration gives the same expansion leaf by leaf.
    for (int j = 0; j < t.leaf_count(); ++j) {
      double sum = 0.0;
      for (std::int64_t u : A.path(j)) sum += gamma[u];
      CHECK(sum == doctest::Approx(A.expand(gamma)[j]).epsilon(1e-13));
    }
  }
}

TEST_CASE("zeroing a branch's coefficients makes its leaves constant") {
  Rng rng(32);
  for (int rep = 0; rep < 25; ++rep) {
    Rng local = rng.spawn(rep);
    const FeatureTree t =
        refimpl::random_full_tree(local, 3 + static_cast<int>(local.uniform_int(9)));
    const AggregationMatrix A(t);
    Eigen::VectorXd gamma(t.node_count());
    for (int u = 0; u < t.node_count(); ++u) gamma[u] = local.normal();
    const int u =
        static_cast<int>(local.uniform_int(static_cast<std::uint64_t>(t.node_count())));
    // Zero gamma strictly below u (u's own entry only shifts the constant).
    for (int w = 0; w < t.node_count(); ++w)
      if (w != u && t.is_ancestor_or_self(u, w)) gamma[w] = 0.0;
    const Eigen::VectorXd beta = A.expand(gamma);
    const auto& leaves = t.leaves_below(u);
    for (std::size_t i = 1; i < leaves.size(); ++i)
      CHECK(beta[leaves[i]] == doctest::Approx(beta[leaves[0]]).epsilon(1e-13));
  }
}

TEST_CASE("aggregated column norms match explicit sums") {
  Rng rng(33);
  const FeatureTree t = refimpl::random_full_tree(rng, 7);
  Eigen::MatrixXd Xd(12, 7);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 7; ++j) Xd(i, j) = static_cast<double>(rng.poisson(0.7));
  const CountDesign X(Xd);
  const Eigen::VectorXd norms = treeagg::aggregated_col_norms(X, t);
  const Eigen::MatrixXd XA = Xd * refimpl::dense_paths(t);
  REQUIRE(norms.size() == t.node_count());
  for (int u = 0; u < t.node_count(); ++u)
    CHECK(norms[u] == doctest::Approx(XA.col(u).norm()).epsilon(1e-12));
}
