#include "summtree/tree_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace summtree {

const char* to_string(TreeError::Kind kind) {
  switch (kind) {
    case TreeError::Kind::empty: return "empty";
    case TreeError::Kind::parse: return "parse";
    case TreeError::Kind::duplicate_id: return "duplicate_id";
    case TreeError::Kind::missing_parent: return "missing_parent";
    case TreeError::Kind::multiple_roots: return "multiple_roots";
    case TreeError::Kind::cycle: return "cycle";
    case TreeError::Kind::invalid_weight: return "invalid_weight";
    case TreeError::Kind::zero_total: return "zero_total";
  }
  return "unknown";
}

InputTree build_tree(const std::vector<NodeRecord>& records) {
  using Kind = TreeError::Kind;
  if (records.empty()) throw TreeError(Kind::empty, "tree has no nodes");
  if (records.size() > static_cast<std::size_t>(INT32_MAX))
    throw TreeError(Kind::parse, "too many nodes");

  const auto n = static_cast<int32_t>(records.size());
  InputTree t;
  t.ids.reserve(records.size());
  t.weights.reserve(records.size());
  std::unordered_map<std::string, int32_t> index;
  index.reserve(records.size());

  for (int32_t i = 0; i < n; ++i) {
    const auto& r = records[i];
    if (!index.emplace(r.id, i).second)
      throw TreeError(Kind::duplicate_id, "duplicate id '" + r.id + "'");
    if (!std::isfinite(r.weight) || r.weight < 0.0)
      throw TreeError(Kind::invalid_weight, "weight of '" + r.id + "' must be finite and >= 0");
    t.ids.push_back(r.id);
    t.weights.push_back(r.weight);
  }

  t.parent.assign(records.size(), -1);
  int32_t root = -1;
  for (int32_t i = 0; i < n; ++i) {
    const auto& p = records[i].parent;
    if (!p) {
      if (root >= 0)
        throw TreeError(Kind::multiple_roots,
                        "multiple roots: '" + t.ids[root] + "' and '" + t.ids[i] + "'");
      root = i;
      continue;
    }
    auto it = index.find(*p);
    if (it == index.end())
      throw TreeError(Kind::missing_parent,
                      "parent '" + *p + "' of '" + t.ids[i] + "' does not exist");
    if (it->second == i) throw TreeError(Kind::cycle, "node '" + t.ids[i] + "' is its own parent");
    t.parent[i] = it->second;
  }
  // Every node has a parent, so following parents must eventually repeat.
  if (root < 0) throw TreeError(Kind::cycle, "no root: parent relation contains a cycle");

  // Nodes unreachable from the root lie on a cycle.
  std::vector<int32_t> head(records.size(), -1), next(records.size(), -1);
  for (int32_t i = n - 1; i >= 0; --i) {
    if (t.parent[i] < 0) continue;
    next[i] = head[t.parent[i]];
    head[t.parent[i]] = i;
  }
  std::vector<char> reached(records.size(), 0);
  std::vector<int32_t> stack{root};
  while (!stack.empty()) {
    int32_t v = stack.back();
    stack.pop_back();
    reached[v] = 1;
    for (int32_t c = head[v]; c >= 0; c = next[c]) stack.push_back(c);
  }
  for (int32_t i = 0; i < n; ++i)
    if (!reached[i]) throw TreeError(Kind::cycle, "cycle through '" + t.ids[i] + "'");

  t.root = root;
  // Summation in input order keeps the total reproducible.
  t.total_weight = std::accumulate(t.weights.begin(), t.weights.end(), 0.0);
  if (!(t.total_weight > 0.0))
    throw TreeError(Kind::zero_total, "total weight is zero; entropy is undefined");
  return t;
}

CanonicalTree canonicalize(const InputTree& in) {
  const auto n = static_cast<int32_t>(in.size());

  std::vector<int32_t> head(in.size(), -1), next(in.size(), -1);
  for (int32_t i = n - 1; i >= 0; --i) {
    int32_t p = in.parent[i];
    if (p < 0) continue;
    next[i] = head[p];
    head[p] = i;
  }

  // Plain breadth-first order to get subtree sizes bottom-up.
  std::vector<int32_t> order;
  order.reserve(in.size());
  order.push_back(in.root);
  for (std::size_t q = 0; q < order.size(); ++q)
    for (int32_t c = head[order[q]]; c >= 0; c = next[c]) order.push_back(c);
  std::vector<double> size(in.weights);
  std::vector<int64_t> count(in.size(), 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int32_t p = in.parent[*it];
    if (p < 0) continue;
    size[p] += size[*it];
    count[p] += count[*it];
  }

  // Canonical relabeling: BFS with each child list sorted by (size, id).
  CanonicalTree t;
  t.ids.resize(in.size());
  t.parent.assign(in.size(), -1);
  t.weight.resize(in.size());
  t.size.resize(in.size());
  t.count.resize(in.size());
  t.first_child.assign(in.size(), 0);
  t.degree.assign(in.size(), 0);
  t.depth.assign(in.size(), 0);
  // Solvers normalize by the root size so that the root pseudo-entropy is exact.
  t.total_weight = size[in.root];

  std::vector<int32_t> original(in.size());  // label -> input index
  original[0] = in.root;
  int32_t assigned = 1;
  std::vector<int32_t> kids;
  for (int32_t label = 0; label < n; ++label) {
    int32_t u = original[label];
    kids.clear();
    for (int32_t c = head[u]; c >= 0; c = next[c]) kids.push_back(c);
    std::sort(kids.begin(), kids.end(), [&](int32_t a, int32_t b) {
      if (size[a] != size[b]) return size[a] < size[b];
      return in.ids[a] < in.ids[b];
    });
    t.first_child[label] = assigned;
    t.degree[label] = static_cast<int32_t>(kids.size());
    for (int32_t c : kids) {
      original[assigned] = c;
      t.parent[assigned] = label;
      t.depth[assigned] = t.depth[label] + 1;
      ++assigned;
    }
  }
  for (int32_t label = 0; label < n; ++label) {
    int32_t u = original[label];
    t.ids[label] = in.ids[u];
    t.weight[label] = in.weights[u];
    t.size[label] = size[u];
    t.count[label] = count[u];
  }

  int32_t max_depth = n > 0 ? t.depth[n - 1] : 0;
  t.level_begin.assign(static_cast<std::size_t>(max_depth) + 2, n);
  for (int32_t label = n - 1; label >= 0; --label) t.level_begin[t.depth[label]] = label;

  t.preorder.reserve(in.size());
  t.pre_index.assign(in.size(), 0);
  std::vector<int32_t> stack{0};
  while (!stack.empty()) {
    int32_t v = stack.back();
    stack.pop_back();
    t.pre_index[v] = static_cast<int32_t>(t.preorder.size());
    t.preorder.push_back(v);
    for (int32_t i = t.degree[v] - 1; i >= 0; --i) stack.push_back(t.first_child[v] + i);
  }
  return t;
}

std::vector<NodeRecord> to_records(const CanonicalTree& t) {
  std::vector<NodeRecord> out;
  out.reserve(t.size_n());
  for (std::size_t v = 0; v < t.size_n(); ++v) {
    NodeRecord r{t.ids[v], std::nullopt, t.weight[v]};
    if (t.parent[v] >= 0) r.parent = t.ids[t.parent[v]];
    out.push_back(std::move(r));
  }
  return out;
}

CanonicalTree reweight(const CanonicalTree& tree, std::span<const double> weights) {
  auto records = to_records(tree);
  for (std::size_t v = 0; v < records.size(); ++v) records[v].weight = weights[v];
  return canonicalize(build_tree(records));
}

}  // namespace summtree
