#include <doctest.h>

#include <stdexcept>

#include <set>

#include "summtree/oracle.hpp"
#include "test_util.hpp"

using namespace summtree;

namespace {

using Poly = std::vector<uint64_t>;  // coefficient i counts trees with i nodes

Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

void add_into(Poly& a, const Poly& b, std::size_t shift = 0) {
  if (a.size() < b.size() + shift) a.resize(b.size() + shift, 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] += b[i];
}

// Count of summary trees of T_v by size, from the generating polynomial
// A_v = x + x * sum over groups S (|S| = 0 or >= 2) of [S nonempty] x * prod_{c not in S} A_c,
// and A_v = x for a leaf. Children are processed with a state counting how
// many joined the group: 0, 1 or 2+.
Poly count_poly(const CanonicalTree& t, int32_t v) {
  if (t.is_leaf(v)) return {0, 1};
  std::vector<Poly> state{{1}, {}, {}};
  for (int32_t i = 0; i < t.degree[v]; ++i) {
    Poly a = count_poly(t, t.child(v, i));
    std::vector<Poly> next{{}, {}, {}};
    for (int s = 0; s < 3; ++s) {
      if (state[s].empty()) continue;
      add_into(next[s], mul(state[s], a));                  // child stays separate
      add_into(next[std::min(s + 1, 2)], state[s]);         // child joins the group
    }
    state = std::move(next);
  }
  Poly forest = state[0];
  add_into(forest, state[2], 1);  // the group node itself
  Poly out{0, 1};                 // v collapsed
  add_into(out, forest, 1);       // v as a singleton above the forest
  return out;
}

}  // namespace

TEST_CASE("single node") {
  auto t = testutil::make_tree({{"a", "", 1}});
  CHECK(enumerate_all(t, 1, [](const SummaryTree&) {}) == 1);
  CHECK(brute_force_opt(t, 1).best == 0.0);
}

TEST_CASE("root with two leaves") {
  auto t = testutil::make_tree({{"r", "", 1}, {"a", "r", 1}, {"b", "r", 1}});
  CHECK(enumerate_all(t, 1, [](const SummaryTree&) {}) == 1);
  CHECK(enumerate_all(t, 2, [](const SummaryTree&) {}) == 1);  // {r} + other{a,b}
  CHECK(enumerate_all(t, 3, [](const SummaryTree&) {}) == 1);
  CHECK(count_poly(t, 0) == Poly{0, 1, 1, 1});
}

TEST_CASE("P4 k=2 optimum") {
  auto t = testutil::path_tree(4);
  auto r = brute_force_opt(t, 2);
  CHECK(r.best == doctest::Approx(0.811278124459133).epsilon(1e-12));
  CHECK(r.restricted_best == r.best);
  CHECK(!check_summary(t, r.witness));
}

TEST_CASE("enumeration count matches the independent recurrence") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    auto shape = seed % 4 == 0 ? TreeShape::star : TreeShape::uniform;
    auto t = testutil::random_canonical(1 + seed % 11, WeightKind::unit, 1.0, seed, shape);
    const int n = static_cast<int>(t.size_n());
    Poly expect = count_poly(t, 0);
    expect.resize(static_cast<std::size_t>(n) + 1, 0);
    for (int k = 1; k <= n; ++k) {
      std::set<StructureKey> seen;
      std::size_t invalid = 0;
      auto count = enumerate_all(t, k, [&](const SummaryTree& s) {
        if (check_summary(t, s) || s.k() != static_cast<std::size_t>(k)) ++invalid;
        seen.insert(structure_key(t, s));
      });
      CHECK(count == expect[k]);
      CHECK(seen.size() == count);  // no duplicates
      CHECK(invalid == 0);
    }
  }
}

TEST_CASE("restricted maximum equals unrestricted maximum") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    auto t = testutil::random_canonical(4 + seed % 6, WeightKind::integer, 8.0, seed + 90);
    for (const auto& r : brute_force_all(t)) {
      CHECK(r.restricted_best == doctest::Approx(r.best).epsilon(1e-12));
      CHECK(r.prefix_best <= r.best + 1e-12);
      CHECK(recompute_entropy(t, r.witness) == doctest::Approx(r.best).epsilon(1e-12));
    }
  }
}

TEST_CASE("enumeration cap") {
  auto t = testutil::path_tree(13);
  CHECK_THROWS_AS(brute_force_opt(t, 2), EnumerationLimit);
  CHECK_NOTHROW(brute_force_opt(t, 2, 13));
}
