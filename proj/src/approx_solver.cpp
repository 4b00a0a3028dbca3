#include "summtree/approx_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "summtree/entropy.hpp"

namespace summtree {

int ZeroPath::l_prime() const {
  return static_cast<int>(std::count_if(placeholder.begin(), placeholder.end(),
                                        [](int32_t p) { return p >= 0; }));
}

int64_t compute_w0(int K, double epsilon, double c) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("epsilon must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("W0 constant must be positive");
  const double x = c * K / epsilon;
  const double w = std::ceil(x * std::log2(2.0 + x));
  if (!(w < 9.0e15)) throw std::invalid_argument("W0 too large; increase epsilon");
  return std::max<int64_t>(2 * static_cast<int64_t>(K), static_cast<int64_t>(w));
}

std::vector<double> rescale(std::span<const double> weights, double total, int64_t w0) {
  if (!(total > 0.0)) throw std::invalid_argument("rescale: total must be positive");
  const double factor = static_cast<double>(w0) / total;
  std::vector<double> out(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] * factor;
  return out;
}

RoundedTree discrepancy_round(const CanonicalTree& t, std::span<const double> scaled, int64_t w0) {
  const std::size_t n = t.size_n();
  if (scaled.size() != n) throw std::invalid_argument("discrepancy_round: weight count mismatch");
  RoundedTree rt;
  rt.w0 = w0;
  rt.scaled.assign(scaled.begin(), scaled.end());
  rt.rounded.assign(n, 0);

  // Integer parts are kept; only the running sum of fractional parts is
  // rounded, which equals rounding the full prefix sums but avoids losing the
  // fractions to the magnitude of the integer parts.
  double frac_sum = 0.0;
  int64_t emitted = 0;
  int64_t total = 0;
  for (int32_t v : t.preorder) {
    const double w = scaled[v];
    if (!(w >= 0.0)) throw std::invalid_argument("discrepancy_round: negative weight");
    const double whole = std::floor(w);
    frac_sum += w - whole;
    const auto target = static_cast<int64_t>(std::floor(frac_sum + 0.5));
    const int64_t bump = std::clamp<int64_t>(target - emitted, 0, 1);
    emitted += bump;
    rt.rounded[v] = static_cast<int64_t>(whole) + bump;
    total += rt.rounded[v];
  }
  if (total != w0)
    throw std::logic_error("discrepancy_round: rounded total " + std::to_string(total) +
                           " differs from W0 " + std::to_string(w0));

  rt.rounded_size = rt.rounded;
  for (auto v = static_cast<int32_t>(n) - 1; v > 0; --v) rt.rounded_size[t.parent[v]] += rt.rounded_size[v];
  return rt;
}

DpTreeView ReducedTree::view() const {
  DpTreeView v;
  v.weight = weight;
  v.size = size;
  v.count = count;
  v.first_child = first_child;
  v.degree = degree;
  v.level_begin = level_begin;
  v.chain_shift = chain_shift;
  v.total = total;
  return v;
}

ReducedTree reduce_tree(const CanonicalTree& t, const RoundedTree& rt) {
  const auto n = static_cast<int32_t>(t.size_n());
  const auto& rs = rt.rounded_size;
  if (rs[0] <= 0) throw std::invalid_argument("reduce_tree: every rounded weight is zero");

  ReducedTree red;
  red.total = static_cast<double>(rt.w0);

  std::vector<int32_t> positive_child(static_cast<std::size_t>(n), -1);
  std::vector<int32_t> positive_children(static_cast<std::size_t>(n), 0);
  std::vector<int32_t> placeholder_of(static_cast<std::size_t>(n), -1);
  for (int32_t v = 0; v < n; ++v) {
    if (rt.rounded[v] > 0) ++red.positive_nodes;
    if (rs[v] <= 0) continue;
    std::vector<int32_t> zero;
    for (int32_t i = 0; i < t.degree[v]; ++i) {
      const int32_t c = t.child(v, i);
      if (rs[c] > 0) {
        ++positive_children[v];
        positive_child[v] = c;
      } else {
        zero.push_back(c);
      }
    }
    if (!zero.empty()) {
      placeholder_of[v] = static_cast<int32_t>(red.placeholder_roots.size());
      red.placeholder_roots.push_back(std::move(zero));
      red.placeholder_parent.push_back(v);
    }
    if (rt.rounded[v] == 0 && positive_children[v] >= 2) ++red.zero_branching_nodes;
  }
  auto on_path = [&](int32_t v) { return rs[v] > 0 && rt.rounded[v] == 0 && positive_children[v] == 1; };

  // Compact node ids in discovery order: kept non-path nodes, one chain node
  // per maximal path, and placeholders of kept non-path nodes.
  enum class Kind : uint8_t { regular, chain, placeholder };
  struct Proto {
    Kind kind;
    int32_t ref;     // canonical label, path index or placeholder index
    int32_t parent;  // proto index, -1 for the root
    int64_t size;
  };
  std::vector<Proto> protos;
  std::vector<int32_t> proto_of(static_cast<std::size_t>(n), -1);

  // Breadth-first over canonical labels keeps parents before children, and
  // the canonical child order as the tie order for equal rounded sizes.
  for (int32_t v = 0; v < n; ++v) {
    if (rs[v] <= 0) continue;
    const int32_t p = t.parent[v];
    if (on_path(v)) {
      if (p >= 0 && on_path(p)) continue;  // interior of a path already recorded
      ZeroPath path;
      int32_t cur = v;
      while (on_path(cur)) {
        path.nodes.push_back(cur);
        path.placeholder.push_back(placeholder_of[cur]);
        cur = positive_child[cur];
      }
      path.bottom = cur;
      const int32_t parent_proto = p >= 0 ? proto_of[p] : -1;
      const auto id = static_cast<int32_t>(protos.size());
      protos.push_back({Kind::chain, static_cast<int32_t>(red.paths.size()), parent_proto, rs[v]});
      for (int32_t x : path.nodes) proto_of[x] = id;
      red.paths.push_back(std::move(path));
      continue;
    }
    const int32_t parent_proto = p >= 0 ? proto_of[p] : -1;
    const auto id = static_cast<int32_t>(protos.size());
    protos.push_back({Kind::regular, v, parent_proto, rs[v]});
    proto_of[v] = id;
    if (placeholder_of[v] >= 0) protos.push_back({Kind::placeholder, placeholder_of[v], id, 0});
  }
  // Chain bottoms hang below their chain node: proto_of of the last path node
  // is the chain id, which the loop above already used as parent_proto.

  // Children sorted nondecreasing by rounded size: two stable counting
  // passes, by size then by parent.
  const auto m = static_cast<int32_t>(protos.size());
  std::vector<int32_t> by_size(static_cast<std::size_t>(m));
  {
    std::vector<int64_t> bucket(static_cast<std::size_t>(rt.w0) + 2, 0);
    for (const auto& pr : protos) ++bucket[static_cast<std::size_t>(pr.size) + 1];
    for (std::size_t i = 1; i < bucket.size(); ++i) bucket[i] += bucket[i - 1];
    for (int32_t i = 0; i < m; ++i)
      by_size[static_cast<std::size_t>(bucket[static_cast<std::size_t>(protos[i].size)]++)] = i;
  }
  std::vector<int32_t> child_begin(static_cast<std::size_t>(m) + 1, 0);
  std::vector<int32_t> sorted_children(static_cast<std::size_t>(m), 0);
  {
    for (const auto& pr : protos)
      if (pr.parent >= 0) ++child_begin[static_cast<std::size_t>(pr.parent) + 1];
    for (int32_t i = 0; i < m; ++i) child_begin[i + 1] += child_begin[i];
    std::vector<int32_t> fill(child_begin.begin(), child_begin.end() - 1);
    for (int32_t i : by_size)
      if (protos[i].parent >= 0) sorted_children[static_cast<std::size_t>(fill[protos[i].parent]++)] = i;
  }

  // Relabel breadth-first from the root (proto 0).
  std::vector<int32_t> order{0};
  order.reserve(static_cast<std::size_t>(m));
  std::vector<int32_t> label_of(static_cast<std::size_t>(m), -1);
  std::vector<int32_t> depth_of_label;
  red.first_child.assign(static_cast<std::size_t>(m), 0);
  red.degree.assign(static_cast<std::size_t>(m), 0);
  depth_of_label.push_back(0);
  label_of[0] = 0;
  for (std::size_t q = 0; q < order.size(); ++q) {
    const int32_t pr = order[q];
    red.first_child[q] = static_cast<int32_t>(order.size());
    red.degree[q] = child_begin[pr + 1] - child_begin[pr];
    for (int32_t i = child_begin[pr]; i < child_begin[pr + 1]; ++i) {
      const int32_t c = sorted_children[static_cast<std::size_t>(i)];
      label_of[c] = static_cast<int32_t>(order.size());
      order.push_back(c);
      depth_of_label.push_back(depth_of_label[q] + 1);
    }
  }
  if (order.size() != static_cast<std::size_t>(m)) throw std::logic_error("reduce_tree: disconnected");

  red.weight.assign(static_cast<std::size_t>(m), 0.0);
  red.size.assign(static_cast<std::size_t>(m), 0.0);
  red.count.assign(static_cast<std::size_t>(m), 1);
  red.chain_shift.assign(static_cast<std::size_t>(m), 0);
  red.origin.assign(static_cast<std::size_t>(m), -1);
  red.placeholder.assign(static_cast<std::size_t>(m), -1);
  red.path.assign(static_cast<std::size_t>(m), -1);
  for (int32_t label = 0; label < m; ++label) {
    const Proto& pr = protos[order[label]];
    red.size[label] = static_cast<double>(pr.size);
    switch (pr.kind) {
      case Kind::regular:
        red.weight[label] = static_cast<double>(rt.rounded[pr.ref]);
        red.origin[label] = pr.ref;
        break;
      case Kind::chain: {
        const ZeroPath& path = red.paths[pr.ref];
        red.path[label] = pr.ref;
        red.origin[label] = path.nodes.front();
        red.chain_shift[label] = path.l() + path.l_prime();
        break;
      }
      case Kind::placeholder:
        red.placeholder[label] = pr.ref;
        break;
    }
  }
  for (int32_t label = m - 1; label >= 0; --label) {
    int64_t c = 1;
    for (int32_t i = 0; i < red.degree[label]; ++i) c += red.count[red.first_child[label] + i];
    if (red.chain_shift[label] > 0) c = red.chain_shift[label] + red.count[red.first_child[label]];
    red.count[label] = c;
  }
  red.tprime_nodes = red.count[0];

  const int32_t max_depth = depth_of_label.back();
  red.level_begin.assign(static_cast<std::size_t>(max_depth) + 2, m);
  for (int32_t label = m - 1; label >= 0; --label) red.level_begin[depth_of_label[label]] = label;
  return red;
}

std::vector<NodeRecord> tprime_records(const CanonicalTree& t, const RoundedTree& rt,
                                       const ReducedTree& red) {
  std::vector<NodeRecord> out;
  const auto n = static_cast<int32_t>(t.size_n());
  for (int32_t v = 0; v < n; ++v) {
    if (rt.rounded_size[v] <= 0) continue;
    NodeRecord r{t.ids[v], std::nullopt, static_cast<double>(rt.rounded[v])};
    if (t.parent[v] >= 0) r.parent = t.ids[t.parent[v]];
    out.push_back(std::move(r));
  }
  for (std::size_t p = 0; p < red.placeholder_roots.size(); ++p) {
    const std::string& parent = t.ids[red.placeholder_parent[p]];
    out.push_back({"~zero:" + parent, parent, 0.0});
  }
  return out;
}

namespace {

std::vector<int32_t> original_roots(const ReducedTree& red, int32_t compact) {
  if (red.placeholder[compact] >= 0) return red.placeholder_roots[red.placeholder[compact]];
  return {red.origin[compact]};
}

// Converts a compact draft into a summary node of the original tree.
SummaryNode resolve(const CanonicalTree& t, const ReducedTree& red, const SummaryNode& d,
                    int32_t parent) {
  if (red.placeholder[d.anchor] >= 0) {
    const int32_t p = red.placeholder[d.anchor];
    return make_cover_node(t, red.placeholder_parent[p], red.placeholder_roots[p], parent);
  }
  switch (d.kind) {
    case NodeKind::singleton: {
      SummaryNode s;
      s.kind = NodeKind::singleton;
      s.anchor = red.origin[d.anchor];
      s.parent = parent;
      return s;
    }
    case NodeKind::subtree:
      return make_cover_node(t, -1, {red.origin[d.anchor]}, parent);
    case NodeKind::group: {
      std::vector<int32_t> roots;
      for (int32_t r : d.roots) {
        auto add = original_roots(red, r);
        roots.insert(roots.end(), add.begin(), add.end());
      }
      return make_cover_node(t, red.origin[d.anchor], std::move(roots), parent);
    }
  }
  throw std::logic_error("unknown node kind");
}

void expand_chain(const CanonicalTree& t, const ReducedTree& red, const DPTables& tables,
                  int32_t chain, int budget, int32_t parent, std::vector<DraftNode>& drafts) {
  const ZeroPath& path = red.paths[red.path[chain]];
  auto push = [&](SummaryNode node) {
    DraftNode d;
    d.node = std::move(node);
    d.resolved = true;
    drafts.push_back(std::move(d));
    return static_cast<int32_t>(drafts.size()) - 1;
  };
  int rem = budget;
  int32_t cur = parent;
  for (int i = 0; i < path.l() && rem > 0; ++i) {
    const int32_t v = path.nodes[i];
    if (rem == 1) {
      push(make_cover_node(t, -1, {v}, cur));
      rem = 0;
      break;
    }
    SummaryNode single;
    single.kind = NodeKind::singleton;
    single.anchor = v;
    single.parent = cur;
    const int32_t at = push(single);
    --rem;
    if (const int32_t p = path.placeholder[i]; p >= 0) {
      std::vector<int32_t> roots = red.placeholder_roots[p];
      if (rem == 1) {
        const int32_t below = i + 1 < path.l() ? path.nodes[i + 1] : path.bottom;
        roots.push_back(below);
        push(make_cover_node(t, v, std::move(roots), at));
        rem = 0;
        break;
      }
      push(make_cover_node(t, v, std::move(roots), at));
      --rem;
    }
    cur = at;
  }
  if (rem > 0) reconstruct_into(red.view(), tables, red.first_child[chain], rem, cur, drafts);
}

SummaryTree map_back(const CanonicalTree& t, const ReducedTree& red, const DPTables& tables, int k) {
  std::vector<DraftNode> drafts;
  reconstruct_into(red.view(), tables, 0, k, -1, drafts);
  std::vector<int32_t> final_index;
  SummaryTree s;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const int32_t parent = drafts[i].node.parent < 0 ? -1 : final_index[drafts[i].node.parent];
    if (drafts[i].chain_budget > 0) {
      final_index.push_back(-1);
      const int32_t chain = drafts[i].node.anchor;
      const int budget = drafts[i].chain_budget;
      // Expansion appends resolved drafts whose parents are earlier drafts.
      expand_chain(t, red, tables, chain, budget, drafts[i].node.parent, drafts);
      continue;
    }
    SummaryNode node = drafts[i].resolved ? drafts[i].node : resolve(t, red, drafts[i].node, parent);
    node.parent = parent;
    final_index.push_back(static_cast<int32_t>(s.nodes.size()));
    s.nodes.push_back(std::move(node));
  }
  return s;
}

// Adds nodes one at a time until the tree has k nodes, splitting the first
// splittable node; splitting never lowers the entropy.
void refine(const CanonicalTree& t, SummaryTree& s, int k) {
  while (static_cast<int>(s.nodes.size()) < k) {
    bool split = false;
    for (std::size_t i = 0; i < s.nodes.size() && !split; ++i) {
      SummaryNode& node = s.nodes[i];
      if (node.kind == NodeKind::subtree) {
        const int32_t v = node.anchor;
        std::vector<int32_t> kids;
        for (int32_t c = 0; c < t.degree[v]; ++c) kids.push_back(t.child(v, c));
        node.kind = NodeKind::singleton;
        node.roots.clear();
        s.nodes.push_back(make_cover_node(t, v, std::move(kids), static_cast<int32_t>(i)));
        split = true;
      } else if (node.kind == NodeKind::group) {
        const int32_t last = node.roots.back();
        std::vector<int32_t> keep(node.roots.begin(), node.roots.end() - 1);
        const int32_t parent = node.parent;
        node = make_cover_node(t, node.anchor, std::move(keep), parent);
        s.nodes.push_back(make_cover_node(t, -1, {last}, parent));
        split = true;
      }
    }
    if (!split) throw std::logic_error("refine: no node left to split");
  }
}

}  // namespace

ApproxResult solve_approx(const CanonicalTree& t, int K, double epsilon, double c,
                          Execution execution) {
  ApproxResult res;
  res.w0 = compute_w0(K, epsilon, c);
  res.rounded = discrepancy_round(t, rescale(t.weight, t.total_weight, res.w0), res.w0);
  res.reduced = reduce_tree(t, res.rounded);
  res.tables = run_dp(res.reduced.view(), K, ClassSet::prefix_and_near_prefix, execution);

  std::vector<double> rounded_weights(res.rounded.rounded.begin(), res.rounded.rounded.end());
  const int kmax = static_cast<int>(std::min<int64_t>(K, static_cast<int64_t>(t.size_n())));
  const int reachable = res.tables.cap(0);
  for (int k = 1; k <= kmax; ++k) {
    SummaryTree s = map_back(t, res.reduced, res.tables, std::min(k, reachable));
    if (k > reachable) refine(t, s, k);
    assign_weights(t, s);
    double h = 0.0;
    for (const auto& node : s.nodes) {
      double w = 0.0;
      if (node.kind == NodeKind::singleton)
        w = rounded_weights[node.anchor];
      else
        for (int32_t r : node.roots) w += static_cast<double>(res.rounded.rounded_size[r]);
      h += plogp(w, static_cast<double>(res.w0));
    }
    res.rounded_entropy.push_back(h);
    res.trees.push_back(std::move(s));
  }
  return res;
}

}  // namespace summtree
