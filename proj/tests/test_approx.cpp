#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "summtree/approx_solver.hpp"
#include "summtree/exact_solver.hpp"
#include "summtree/oracle.hpp"
#include "test_util.hpp"

using namespace summtree;

namespace {

RoundedTree round_tree(const CanonicalTree& t, int64_t w0) {
  return discrepancy_round(t, rescale(t.weight, t.total_weight, w0), w0);
}

void check_rounding(const CanonicalTree& t, const RoundedTree& r) {
  int64_t total = 0;
  for (std::size_t v = 0; v < t.size_n(); ++v) {
    const double f = std::floor(r.scaled[v]);
    CHECK((r.rounded[v] == static_cast<int64_t>(f) || r.rounded[v] == static_cast<int64_t>(f) + 1));
    total += r.rounded[v];
  }
  CHECK(total == r.w0);
  std::vector<double> scaled_size(r.scaled);
  for (auto v = static_cast<int32_t>(t.size_n()) - 1; v > 0; --v) scaled_size[t.parent[v]] += scaled_size[v];
  for (std::size_t v = 0; v < t.size_n(); ++v)
    CHECK(std::abs(static_cast<double>(r.rounded_size[v]) - scaled_size[v]) <= 1.0 + 1e-9);
}

}  // namespace

TEST_CASE("W0 formula") {
  CHECK(compute_w0(4, 0.5, 2.0) == 67);
  CHECK(compute_w0(1, 1.0, 2.0) == 4);
  CHECK(compute_w0(64, 100.0, 2.0) == 128);  // clamped at 2K
  CHECK_THROWS_AS(compute_w0(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(compute_w0(4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_w0(4, 0.1, -1.0), std::invalid_argument);
}

TEST_CASE("rescale") {
  std::vector<double> w{1, 1, 2};
  CHECK(rescale(w, 4.0, 8) == std::vector<double>{2, 2, 4});
}

TEST_CASE("rounding: half-up prefix sums") {
  auto p = testutil::path_tree(4, 0.5);
  auto r = discrepancy_round(p, p.weight, 2);
  CHECK(r.rounded == std::vector<int64_t>{1, 0, 1, 0});
  CHECK(r.rounded_size == std::vector<int64_t>{2, 1, 1, 0});

  auto star = testutil::make_tree({{"r", "", 0.3}, {"a", "r", 0.3}, {"b", "r", 0.4}});
  auto s = discrepancy_round(star, star.weight, 1);
  CHECK(s.rounded == std::vector<int64_t>{0, 1, 0});

  CHECK_THROWS_AS(discrepancy_round(star, star.weight, 2), std::logic_error);
}

TEST_CASE("rounding invariants on random trees") {
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    auto t = testutil::random_canonical(1 + seed * 7, WeightKind::real, 1.0, seed);
    for (int64_t w0 : {2, 17, 1000}) check_rounding(t, round_tree(t, w0));
  }
}

TEST_CASE("reduction: placeholders and chains") {
  // r(1) has zero children z1, z2; c(0) -> d(0) -> e(1) is a zero path.
  auto t = testutil::make_tree({{"r", "", 1},
                                {"z1", "r", 0},
                                {"z2", "r", 0},
                                {"c", "r", 0},
                                {"d", "c", 0},
                                {"e", "d", 1}});
  auto r = discrepancy_round(t, t.weight, 2);
  auto red = reduce_tree(t, r);
  CHECK(red.placeholder_roots.size() == 1);
  CHECK(red.placeholder_roots[0].size() == 2);
  REQUIRE(red.paths.size() == 1);
  CHECK(red.paths[0].l() == 2);
  CHECK(red.paths[0].l_prime() == 0);
  CHECK(red.paths[0].bottom == testutil::label_of(t, "e"));
  CHECK(red.compact_nodes() == 4);  // r, placeholder, chain, e
  CHECK(red.tprime_nodes == 5);     // chain expanded to c, d
  CHECK(red.positive_nodes == 2);
  CHECK(red.zero_branching_nodes == 0);
  int chains = 0;
  for (int32_t s : red.chain_shift)
    if (s > 0) {
      ++chains;
      CHECK(s == 2);
    }
  CHECK(chains == 1);
}

TEST_CASE("reduction: zero path with placeholders along it") {
  // c(0) has zero leaf y and positive child d(0) -> e(2).
  auto t = testutil::make_tree(
      {{"r", "", 0}, {"c", "r", 0}, {"y", "c", 0}, {"d", "c", 0}, {"e", "d", 2}, {"f", "r", 2}});
  auto red = reduce_tree(t, discrepancy_round(t, t.weight, 4));
  REQUIRE(red.paths.size() == 1);
  CHECK(red.paths[0].l() == 2);
  CHECK(red.paths[0].l_prime() == 1);
  CHECK(red.zero_branching_nodes == 1);  // r
}

TEST_CASE("path count exceeds W0 - 1 but obeys the branching bound") {
  auto t = testutil::make_tree(
      {{"root", "", 0}, {"x", "root", 0}, {"A", "x", 1}, {"y", "root", 0}, {"B", "y", 1}});
  auto r = discrepancy_round(t, t.weight, 2);
  auto red = reduce_tree(t, r);
  CHECK(red.paths.size() == 2);
  CHECK(static_cast<int64_t>(red.paths.size()) > r.w0 - 1);
  CHECK(static_cast<int64_t>(red.paths.size()) <= red.positive_nodes + red.zero_branching_nodes);

  for (uint64_t seed = 1; seed <= 40; ++seed) {
    auto u = testutil::random_canonical(400, WeightKind::real, 1.0, seed);
    auto ru = round_tree(u, 37);
    auto ru_red = reduce_tree(u, ru);
    CHECK(static_cast<int64_t>(ru_red.paths.size()) <= ru_red.positive_nodes + ru_red.zero_branching_nodes);
    CHECK(ru_red.positive_nodes + ru_red.zero_branching_nodes <= 2 * ru.w0 - 1);
  }
}

TEST_CASE("compact DP on T' equals the DP on the materialized T'") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    auto t = testutil::random_canonical(5 + seed * 5, WeightKind::real, 1.0, seed);
    for (int64_t w0 : {3, 11, 40}) {
      auto r = round_tree(t, w0);
      auto red = reduce_tree(t, r);
      auto tp = canonicalize(build_tree(tprime_records(t, r, red)));
      CHECK(static_cast<int64_t>(tp.size_n()) == red.tprime_nodes);
      const int K = 9;
      auto compact = run_dp(red.view(), K, ClassSet::prefix_and_near_prefix, Execution::serial);
      auto full = solve_exact(tp, K);
      REQUIRE(compact.cap(0) == full.cap(0));
      for (int k = 1; k <= full.cap(0); ++k)
        CHECK(compact.F(0, k) == doctest::Approx(full.F(0, k)).epsilon(1e-12));
      if (tp.size_n() <= 11) {
        auto bf = brute_force_all(tp);
        for (int k = 1; k <= full.cap(0); ++k)
          CHECK(compact.F(0, k) == doctest::Approx(bf[k - 1].best).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("approx trees are valid, sized k, and within epsilon") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    auto t = testutil::random_canonical(3 + seed % 7, WeightKind::real, 1.0, seed);
    const int n = static_cast<int>(t.size_n());
    auto bf = brute_force_all(t);
    for (double eps : {1.0, 0.2}) {
      auto res = solve_approx(t, n, eps, kDefaultW0Constant, Execution::serial);
      REQUIRE(res.trees.size() == static_cast<std::size_t>(n));
      for (int k = 1; k <= n; ++k) {
        const auto& s = res.trees[k - 1];
        CHECK(s.k() == static_cast<std::size_t>(k));
        CHECK(!check_summary(t, s));
        CHECK(recompute_entropy(t, s) == doctest::Approx(s.entropy_bits).epsilon(1e-12));
        CHECK(bf[k - 1].best - s.entropy_bits <= eps + 1e-12);
      }
    }
  }
}

TEST_CASE("approx reaches k beyond the reduced tree by splitting") {
  // Almost all mass at the root: the rounded tree keeps very few nodes.
  std::vector<std::tuple<std::string, std::string, double>> rows{{"r", "", 1000}};
  for (int i = 0; i < 20; ++i) rows.emplace_back("c" + std::to_string(i), "r", 1e-6);
  auto t = testutil::make_tree(rows);
  auto res = solve_approx(t, 16, 0.5);
  CHECK(res.tables.cap(0) < 16);
  for (int k = 1; k <= 16; ++k) {
    CHECK(res.trees[k - 1].k() == static_cast<std::size_t>(k));
    CHECK(!check_summary(t, res.trees[k - 1]));
  }
}

TEST_CASE("approx on a 100000-leaf star") {
  std::vector<NodeRecord> recs{{"root", std::nullopt, 1.0}};
  for (int i = 0; i < 100000; ++i) recs.push_back({"l" + std::to_string(i), "root", 1.0 + (i % 7)});
  auto t = canonicalize(build_tree(recs));
  auto res = solve_approx(t, 16, 0.1);
  auto ex = solve_exact(t, 16);
  CHECK(res.reduced.compact_nodes() < t.size_n());
  for (int k = 1; k <= 16; ++k) {
    CHECK(!check_summary(t, res.trees[k - 1]));
    CHECK(optimal_entropy(ex, k) - res.trees[k - 1].entropy_bits <= 0.1);
  }
}
