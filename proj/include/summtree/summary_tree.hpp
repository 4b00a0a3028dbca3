#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "summtree/tree_model.hpp"

namespace summtree {

enum class NodeKind { singleton, subtree, group };

const char* to_string(NodeKind kind);

/// One node of a summary tree, stated in canonical labels.
///
/// singleton: the single node `anchor`; `roots` is empty.
/// subtree:   the whole subtree of `anchor`; `roots == {anchor}`.
/// group:     whole subtrees of two or more children of `anchor`, listed in
///            `roots` in canonical child order.
struct SummaryNode {
  NodeKind kind = NodeKind::singleton;
  int32_t anchor = 0;
  std::vector<int32_t> roots;
  double weight = 0.0;
  int32_t parent = -1;  // index into SummaryTree::nodes; parents precede children
};

struct SummaryTree {
  std::vector<SummaryNode> nodes;  // nodes[0] contains the tree root
  double entropy_bits = 0.0;

  std::size_t k() const { return nodes.size(); }
};

/// Node of the right kind covering the whole subtrees in `roots` (one root
/// gives a subtree node, or a singleton for a leaf).
SummaryNode make_cover_node(const CanonicalTree& t, int32_t anchor, std::vector<int32_t> roots,
                            int32_t parent);

/// Sorted canonical labels represented by `node`.
std::vector<int32_t> members(const CanonicalTree& t, const SummaryNode& node);

/// Sets every node weight from `t` (via subtree sizes) and the entropy.
void assign_weights(const CanonicalTree& t, SummaryTree& s);

/// Entropy recomputed from scratch by summing the weights of each node's
/// members in `weights` (indexed by canonical label).
double recompute_entropy(const CanonicalTree& t, const SummaryTree& s,
                         const std::vector<double>& weights);
double recompute_entropy(const CanonicalTree& t, const SummaryTree& s);

/// Returns a description of the first violated summary-tree invariant, or
/// nothing if `s` is a valid summary tree of `t`.
std::optional<std::string> check_summary(const CanonicalTree& t, const SummaryTree& s);

/// 1-based positions, in v's sorted child list, of the children in a group.
std::vector<int32_t> child_positions(const CanonicalTree& t, const SummaryNode& group);

/// True if a group's children form a prefix or a near-prefix of the sorted
/// child list of its anchor.
bool is_prefix_or_near_prefix(const CanonicalTree& t, const SummaryNode& group);
bool is_prefix(const CanonicalTree& t, const SummaryNode& group);

/// Order-independent description: sorted (kind, sorted members) pairs.
using StructureKey = std::vector<std::pair<NodeKind, std::vector<int32_t>>>;
StructureKey structure_key(const CanonicalTree& t, const SummaryTree& s);

/// The group child of the node covering the root, if any.
const SummaryNode* root_group(const SummaryTree& s);

}  // namespace summtree
