#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "summtree/summary_tree.hpp"
#include "summtree/tree_model.hpp"

namespace summtree {

enum class Execution {
  serial,    // reference driver: one node at a time in reverse label order
  parallel,  // OpenMP over the nodes of each depth level, deepest level first
};

enum class ClassSet {
  prefix_only,             // greedy
  prefix_and_near_prefix,  // exact
};

/// Work accounting for one DP run.
struct CostCounter {
  // Sum over prefix-class sweep steps of min(n_{v_1}+...+n_{v_l}, K) * min(n_{v_{l+1}}, K).
  uint64_t pair_cost = 0;
  // Inner max-plus evaluations over every class at every node.
  uint64_t maxplus_ops = 0;
  // Candidate other-classes swept.
  uint64_t classes = 0;

  CostCounter& operator+=(const CostCounter& o) {
    pair_cost += o.pair_cost;
    maxplus_ops += o.maxplus_ops;
    classes += o.classes;
    return *this;
  }
};

/// Structure-of-arrays view of a tree in canonical labeling (BFS order,
/// children consecutive and sorted nondecreasing by size).
///
/// A node with chain_shift[v] > 0 stands for a compressed chain of
/// chain_shift[v] zero-weight nodes above its single child.
struct DpTreeView {
  std::span<const double> weight;
  std::span<const double> size;
  std::span<const int64_t> count;
  std::span<const int32_t> first_child;
  std::span<const int32_t> degree;
  std::span<const int32_t> level_begin;
  std::span<const int32_t> chain_shift;  // empty: no chains
  double total = 1.0;

  std::size_t n() const { return weight.size(); }
  bool is_chain(int32_t v) const { return !chain_shift.empty() && chain_shift[v] > 0; }

  static DpTreeView of(const CanonicalTree& t);
};

inline constexpr int32_t kChoiceCollapse = -1;
inline constexpr int32_t kChoiceChain = -2;
inline constexpr int32_t kPrefixClass = 0;

/// Optimal pseudo-entropies F(v, k) for 1 <= k <= min(K, n_v), with the
/// winning other-class of every k >= 2 entry (0 = prefix, j >= 3 = near-prefix
/// with non-prefix child j, 1-based).
struct DPTables {
  int K = 1;
  ClassSet classes = ClassSet::prefix_and_near_prefix;
  std::vector<int64_t> offset;  // n + 1 entries
  std::vector<double> value;
  std::vector<int32_t> choice;
  CostCounter cost;

  int cap(int32_t v) const { return static_cast<int>(offset[v + 1] - offset[v]); }
  double F(int32_t v, int k) const { return value[static_cast<std::size_t>(offset[v] + k - 1)]; }
  int32_t choice_at(int32_t v, int k) const {
    return choice[static_cast<std::size_t>(offset[v] + k - 1)];
  }
  std::span<const double> row(int32_t v) const {
    return std::span<const double>(value).subspan(static_cast<std::size_t>(offset[v]),
                                                  static_cast<std::size_t>(cap(v)));
  }
};

DPTables run_dp(const DpTreeView& tree, int K, ClassSet classes, Execution execution);

/// One sweep step: extends the forest table over the children swept so far
/// (`forest`, entry h-1 = h nodes) by one more child subtree with DP row
/// `child`. Entry 0 of the result is `group_value`, the forest in which the
/// new child joins the group node. Result length min(K-1, |forest|+|child|).
std::vector<double> maxplus_step(std::span<const double> forest, std::span<const double> child,
                                 double group_value, int K);

/// Forest table G(1..) of a single other-class at node v, from the child rows
/// already in `tables`. cls = 0 is the prefix class; cls = j is the
/// near-prefix class with non-prefix child j (1-based), valid for
/// max(3, d_v - K + 3) <= j <= d_v; other values throw std::out_of_range.
std::vector<double> sweep_class(const DpTreeView& tree, const DPTables& tables, int32_t v,
                                int32_t cls);

/// Smallest near-prefix class index swept at a node of the given degree; the
/// largest is the degree itself.
inline int32_t near_prefix_lo(int32_t degree, int K) {
  return degree - K + 3 > 3 ? degree - K + 3 : 3;
}

/// Summary node produced by reconstruction, in view labels. A positive
/// `chain_budget` marks an unexpanded chain node that must receive that many
/// summary nodes; the caller expands it.
struct DraftNode {
  SummaryNode node;
  int32_t chain_budget = 0;
  bool resolved = false;  // anchor and roots already refer to the original tree
};

/// Appends an optimal `budget`-node summary of the subtree of `root` to `out`,
/// attached under out[parent] (or as the root when parent == -1).
void reconstruct_into(const DpTreeView& tree, const DPTables& tables, int32_t root, int budget,
                      int32_t parent, std::vector<DraftNode>& out);

}  // namespace summtree
