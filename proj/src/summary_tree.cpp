#include "summtree/summary_tree.hpp"

#include <algorithm>
#include <cmath>

#include "summtree/entropy.hpp"

namespace summtree {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::singleton: return "singleton";
    case NodeKind::subtree: return "subtree";
    case NodeKind::group: return "group";
  }
  return "unknown";
}

SummaryNode make_cover_node(const CanonicalTree& t, int32_t anchor, std::vector<int32_t> roots,
                            int32_t parent) {
  SummaryNode node;
  node.parent = parent;
  if (roots.size() == 1) {
    node.anchor = roots.front();
    node.kind = t.is_leaf(node.anchor) ? NodeKind::singleton : NodeKind::subtree;
    if (node.kind == NodeKind::subtree) node.roots = std::move(roots);
  } else {
    node.kind = NodeKind::group;
    node.anchor = anchor;
    std::sort(roots.begin(), roots.end());
    node.roots = std::move(roots);
  }
  return node;
}

std::vector<int32_t> members(const CanonicalTree& t, const SummaryNode& node) {
  if (node.kind == NodeKind::singleton) return {node.anchor};
  std::vector<int32_t> out;
  for (int32_t r : node.roots) {
    auto sub = t.subtree(r);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void assign_weights(const CanonicalTree& t, SummaryTree& s) {
  std::vector<double> w;
  w.reserve(s.nodes.size());
  for (auto& node : s.nodes) {
    if (node.kind == NodeKind::singleton) {
      node.weight = t.weight[node.anchor];
    } else {
      node.weight = 0.0;
      for (int32_t r : node.roots) node.weight += t.size[r];
    }
    w.push_back(node.weight);
  }
  double h = 0.0;
  for (double x : w) h += plogp(x, t.total_weight);
  s.entropy_bits = h;
}

double recompute_entropy(const CanonicalTree& t, const SummaryTree& s,
                         const std::vector<double>& weights) {
  std::vector<double> node_weights;
  node_weights.reserve(s.nodes.size());
  for (const auto& node : s.nodes) {
    double sum = 0.0;
    for (int32_t m : members(t, node)) sum += weights[m];
    node_weights.push_back(sum);
  }
  return entropy(node_weights).value;
}

double recompute_entropy(const CanonicalTree& t, const SummaryTree& s) {
  return recompute_entropy(t, s, t.weight);
}

std::optional<std::string> check_summary(const CanonicalTree& t, const SummaryTree& s) {
  const auto n = static_cast<int32_t>(t.size_n());
  if (s.nodes.empty()) return "summary tree has no nodes";
  if (s.nodes.size() > static_cast<std::size_t>(n)) return "more summary nodes than tree nodes";

  std::vector<int32_t> owner(static_cast<std::size_t>(n), -1);
  std::vector<int32_t> singleton_of(static_cast<std::size_t>(n), -1);
  std::vector<int32_t> groups_under(s.nodes.size(), 0);
  double total = 0.0;

  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& node = s.nodes[i];
    const std::string at = "node " + std::to_string(i) + ": ";
    if (node.anchor < 0 || node.anchor >= n) return at + "anchor out of range";
    if (i == 0 && node.parent != -1) return at + "root summary node has a parent";
    if (i > 0 && (node.parent < 0 || node.parent >= static_cast<int32_t>(i)))
      return at + "parent must precede the node";

    switch (node.kind) {
      case NodeKind::singleton:
        if (!node.roots.empty()) return at + "singleton with subtree roots";
        singleton_of[node.anchor] = static_cast<int32_t>(i);
        break;
      case NodeKind::subtree:
        if (node.roots.size() != 1 || node.roots.front() != node.anchor)
          return at + "subtree node must cover exactly its anchor's subtree";
        if (t.is_leaf(node.anchor)) return at + "subtree node over a leaf";
        break;
      case NodeKind::group:
        if (node.roots.size() < 2) return at + "group node needs at least two children";
        for (std::size_t r = 0; r < node.roots.size(); ++r) {
          if (node.roots[r] < 0 || node.roots[r] >= n || t.parent[node.roots[r]] != node.anchor)
            return at + "group member root is not a child of the anchor";
          if (r > 0 && node.roots[r] <= node.roots[r - 1]) return at + "group roots not sorted";
        }
        break;
    }

    double w = 0.0;
    for (int32_t m : members(t, node)) {
      if (owner[m] >= 0) return at + "node " + t.ids[m] + " is covered twice";
      owner[m] = static_cast<int32_t>(i);
      w += t.weight[m];
    }
    if (std::abs(w - node.weight) > 1e-9 * std::max(1.0, t.total_weight))
      return at + "weight does not match its members";
    total += node.weight;
  }
  for (int32_t v = 0; v < n; ++v)
    if (owner[v] < 0) return "node " + t.ids[v] + " is not covered";
  if (owner[0] != 0) return "nodes[0] does not contain the tree root";
  if (s.nodes[0].kind == NodeKind::group) return "root summary node cannot be a group";

  for (std::size_t i = 1; i < s.nodes.size(); ++i) {
    const auto& node = s.nodes[i];
    const std::string at = "node " + std::to_string(i) + ": ";
    int32_t attach = node.kind == NodeKind::group ? node.anchor : t.parent[node.anchor];
    if (attach < 0) return at + "only the root node may contain the tree root";
    if (singleton_of[attach] != node.parent)
      return at + "parent is not the singleton of the original parent";
    if (node.kind == NodeKind::group && ++groups_under[node.parent] > 1)
      return at + "second group child under one node";
  }

  if (std::abs(total - t.total_weight) > 1e-9 * t.total_weight)
    return "node weights do not sum to the total weight";
  return std::nullopt;
}

std::vector<int32_t> child_positions(const CanonicalTree& t, const SummaryNode& group) {
  std::vector<int32_t> pos;
  for (int32_t r : group.roots) pos.push_back(r - t.first_child[group.anchor] + 1);
  std::sort(pos.begin(), pos.end());
  return pos;
}

bool is_prefix(const CanonicalTree& t, const SummaryNode& group) {
  auto pos = child_positions(t, group);
  for (std::size_t i = 0; i < pos.size(); ++i)
    if (pos[i] != static_cast<int32_t>(i) + 1) return false;
  return true;
}

bool is_prefix_or_near_prefix(const CanonicalTree& t, const SummaryNode& group) {
  auto pos = child_positions(t, group);
  if (pos.empty()) return true;
  // All but the last element must be 1..i; the last is then either i+1 or a
  // non-prefix element j >= i+2.
  for (std::size_t i = 0; i + 1 < pos.size(); ++i)
    if (pos[i] != static_cast<int32_t>(i) + 1) return false;
  return true;
}

StructureKey structure_key(const CanonicalTree& t, const SummaryTree& s) {
  StructureKey key;
  key.reserve(s.nodes.size());
  for (const auto& node : s.nodes) key.emplace_back(node.kind, members(t, node));
  std::sort(key.begin(), key.end());
  return key;
}

const SummaryNode* root_group(const SummaryTree& s) {
  for (const auto& node : s.nodes)
    if (node.parent == 0 && node.kind == NodeKind::group) return &node;
  return nullptr;
}

}  // namespace summtree
