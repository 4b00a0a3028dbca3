#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "summtree/tree_model.hpp"
#include "test_util.hpp"

using namespace summtree;
using testutil::make_tree;

namespace {

TreeError::Kind kind_of(const std::vector<NodeRecord>& recs) {
  try {
    build_tree(recs);
  } catch (const TreeError& e) {
    return e.kind();
  }
  FAIL("expected a TreeError");
  return TreeError::Kind::parse;
}

NodeRecord rec(std::string id, std::optional<std::string> parent, double w) {
  return NodeRecord{std::move(id), std::move(parent), w};
}

}  // namespace

TEST_CASE("build_tree rejects malformed input") {
  using K = TreeError::Kind;
  CHECK(kind_of({}) == K::empty);
  CHECK(kind_of({rec("a", {}, 1), rec("a", "a", 1)}) == K::duplicate_id);
  CHECK(kind_of({rec("a", {}, 1), rec("b", "zz", 1)}) == K::missing_parent);
  CHECK(kind_of({rec("a", {}, 1), rec("b", {}, 1)}) == K::multiple_roots);
  CHECK(kind_of({rec("a", "b", 1), rec("b", "a", 1)}) == K::cycle);
  CHECK(kind_of({rec("r", {}, 1), rec("a", "b", 1), rec("b", "a", 1)}) == K::cycle);
  CHECK(kind_of({rec("a", "a", 1)}) == K::cycle);
  CHECK(kind_of({rec("a", {}, -1)}) == K::invalid_weight);
  CHECK(kind_of({rec("a", {}, std::nan(""))}) == K::invalid_weight);
  CHECK(kind_of({rec("a", {}, 0), rec("b", "a", 0)}) == K::zero_total);
}

TEST_CASE("single node tree") {
  auto t = make_tree({{"x", "", 2.5}});
  CHECK(t.size_n() == 1);
  CHECK(t.total_weight == 2.5);
  CHECK(t.level_begin == std::vector<int32_t>{0, 1});
  CHECK(t.is_leaf(0));
}

TEST_CASE("canonical labels: BFS, children sorted by size then id") {
  auto t = make_tree({{"r", "", 1},
                      {"big", "r", 5},
                      {"b", "r", 1},
                      {"a", "r", 1},
                      {"leaf", "big", 0.5}});
  REQUIRE(t.size_n() == 5);
  CHECK(t.ids == std::vector<std::string>{"r", "a", "b", "big", "leaf"});
  CHECK(t.first_child[0] == 1);
  CHECK(t.degree[0] == 3);
  CHECK(t.first_child[3] == 4);
  CHECK(t.size[3] == doctest::Approx(5.5));
  CHECK(t.size[0] == doctest::Approx(8.5));
  CHECK(t.count[0] == 5);
  CHECK(t.count[3] == 2);
  CHECK(t.depth == std::vector<int32_t>{0, 1, 1, 1, 2});
  CHECK(t.level_begin == std::vector<int32_t>{0, 1, 4, 5});
  CHECK(t.total_weight == t.size[0]);
}

TEST_CASE("preorder spans are subtrees") {
  auto t = testutil::random_canonical(200, WeightKind::real, 1.0, 17);
  for (int32_t v = 0; v < static_cast<int32_t>(t.size_n()); ++v) {
    auto sub = t.subtree(v);
    REQUIRE(sub.size() == static_cast<std::size_t>(t.count[v]));
    CHECK(sub.front() == v);
    double s = 0;
    for (int32_t u : sub) {
      int32_t x = u;
      while (x != v && x >= 0) x = t.parent[x];
      CHECK(x == v);
      s += t.weight[u];
    }
    CHECK(s == doctest::Approx(t.size[v]));
  }
  for (int32_t v = 1; v < static_cast<int32_t>(t.size_n()); ++v) {
    CHECK(t.parent[v] < v);
    if (t.parent[v] == t.parent[v - 1]) CHECK(t.size[v - 1] <= t.size[v]);
  }
}

TEST_CASE("to_records round trip and reweight") {
  auto t = testutil::random_canonical(50, WeightKind::integer, 5.0, 3);
  auto again = canonicalize(build_tree(to_records(t)));
  CHECK(again.ids == t.ids);
  CHECK(again.parent == t.parent);
  CHECK(again.weight == t.weight);

  std::vector<double> w(t.size_n(), 1.0);
  auto u = reweight(t, w);
  CHECK(u.total_weight == doctest::Approx(50.0));
  CHECK(u.count[0] == 50);
}

TEST_CASE("deep path does not recurse") {
  auto t = testutil::path_tree(200000);
  CHECK(t.depth.back() == 199999);
  CHECK(t.count[0] == 200000);
}
