#include "summtree/oracle.hpp"

#include <bit>
#include <string>

namespace summtree {

namespace {

enum : unsigned { kRestricted = 1u, kPrefix = 2u };

struct Partial {
  std::vector<SummaryNode> nodes;  // nodes[0] covers the subtree root; parent -1 there
  unsigned flags = kRestricted | kPrefix;
};

using Buckets = std::vector<std::vector<Partial>>;  // index: number of nodes

unsigned shape_flags(uint32_t mask) {
  if (mask == 0) return kRestricted | kPrefix;
  const int top = 31 - std::countl_zero(mask);
  const uint32_t below = mask & ~(1u << top);
  const bool below_is_prefix = (below & (below + 1)) == 0;  // bits 0..i-1
  const bool all_prefix = (mask & (mask + 1)) == 0;
  unsigned f = 0;
  if (below_is_prefix) f |= kRestricted;
  if (all_prefix) f |= kPrefix;
  return f;
}

void append(Partial& into, const Partial& sub) {
  const auto offset = static_cast<int32_t>(into.nodes.size());
  for (const auto& node : sub.nodes) {
    SummaryNode copy = node;
    copy.parent = node.parent < 0 ? 0 : node.parent + offset;
    into.nodes.push_back(std::move(copy));
  }
  into.flags &= sub.flags;
}

Buckets generate(const CanonicalTree& t, int32_t v) {
  Buckets out(static_cast<std::size_t>(t.count[v]) + 1);
  out[1].push_back(Partial{{make_cover_node(t, v, {v}, -1)}});
  const int32_t d = t.degree[v];
  if (d == 0) return out;

  std::vector<Buckets> kids;
  kids.reserve(static_cast<std::size_t>(d));
  for (int32_t i = 0; i < d; ++i) kids.push_back(generate(t, t.child(v, i)));

  std::vector<int32_t> rest;
  for (uint32_t mask = 0; mask < (1u << d); ++mask) {
    if (std::popcount(mask) == 1) continue;
    Partial base;
    SummaryNode root;
    root.kind = NodeKind::singleton;
    root.anchor = v;
    base.nodes.push_back(root);
    rest.clear();
    std::vector<int32_t> group;
    for (int32_t i = 0; i < d; ++i) {
      if (mask & (1u << i))
        group.push_back(t.child(v, i));
      else
        rest.push_back(i);
    }
    if (!group.empty()) base.nodes.push_back(make_cover_node(t, v, group, 0));
    base.flags = shape_flags(mask);

    // Every child outside the group gets its own summary tree of >= 1 nodes.
    auto expand = [&](auto&& self, std::size_t idx, const Partial& acc) -> void {
      if (idx == rest.size()) {
        out[acc.nodes.size()].push_back(acc);
        return;
      }
      const Buckets& sub = kids[static_cast<std::size_t>(rest[idx])];
      for (std::size_t k = 1; k < sub.size(); ++k) {
        for (const auto& p : sub[k]) {
          Partial next = acc;
          append(next, p);
          self(self, idx + 1, next);
        }
      }
    };
    expand(expand, 0, base);
  }
  return out;
}

void check_cap(const CanonicalTree& t, std::size_t cap) {
  if (t.size_n() > cap || t.size_n() > 30)
    throw EnumerationLimit("enumeration needs n <= " + std::to_string(cap) + ", got " +
                           std::to_string(t.size_n()));
}

SummaryTree finish(const CanonicalTree& t, const Partial& p) {
  SummaryTree s;
  s.nodes = p.nodes;
  assign_weights(t, s);
  return s;
}

}  // namespace

std::size_t enumerate_all(const CanonicalTree& t, int k,
                          const std::function<void(const SummaryTree&)>& visit, std::size_t cap) {
  check_cap(t, cap);
  if (k < 1 || static_cast<std::size_t>(k) > t.size_n()) return 0;
  auto buckets = generate(t, 0);
  for (const auto& p : buckets[static_cast<std::size_t>(k)]) visit(finish(t, p));
  return buckets[static_cast<std::size_t>(k)].size();
}

std::vector<BruteForceResult> brute_force_all(const CanonicalTree& t, std::size_t cap) {
  check_cap(t, cap);
  auto buckets = generate(t, 0);
  std::vector<BruteForceResult> results;
  for (std::size_t k = 1; k < buckets.size(); ++k) {
    BruteForceResult r;
    r.k = static_cast<int>(k);
    r.trees = buckets[k].size();
    bool any = false, any_restricted = false, any_prefix = false;
    for (const auto& p : buckets[k]) {
      SummaryTree s = finish(t, p);
      const double h = s.entropy_bits;
      if (!any || h > r.best) {
        r.best = h;
        r.witness = s;
        any = true;
      }
      if ((p.flags & kRestricted) && (!any_restricted || h > r.restricted_best)) {
        r.restricted_best = h;
        r.restricted_witness = s;
        any_restricted = true;
      }
      if ((p.flags & kPrefix) && (!any_prefix || h > r.prefix_best)) {
        r.prefix_best = h;
        r.prefix_witness = std::move(s);
        any_prefix = true;
      }
    }
    results.push_back(std::move(r));
  }
  return results;
}

BruteForceResult brute_force_opt(const CanonicalTree& t, int k, std::size_t cap) {
  check_cap(t, cap);
  if (k < 1 || static_cast<std::size_t>(k) > t.size_n())
    throw std::out_of_range("k = " + std::to_string(k) + " outside 1.." +
                            std::to_string(t.size_n()));
  return brute_force_all(t, cap)[static_cast<std::size_t>(k) - 1];
}

}  // namespace summtree
