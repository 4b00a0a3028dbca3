#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "summtree/dp_kernel.hpp"
#include "summtree/summary_tree.hpp"
#include "summtree/tree_model.hpp"

namespace summtree {

inline constexpr double kDefaultW0Constant = 2.0;

/// Integer rescaling target: max(2K, ceil((cK/eps) lg(2 + cK/eps))).
/// Throws std::invalid_argument for K < 1, eps <= 0 or c <= 0.
int64_t compute_w0(int K, double epsilon, double c = kDefaultW0Constant);

/// weights * (w0 / total).
std::vector<double> rescale(std::span<const double> weights, double total, int64_t w0);

/// Integer weights w' with w'_v in {floor(w_v), floor(w_v) + 1}, every
/// subtree sum within 1 of the real subtree sum, and total exactly w0.
struct RoundedTree {
  int64_t w0 = 0;
  std::vector<double> scaled;         // by canonical label
  std::vector<int64_t> rounded;       // w'
  std::vector<int64_t> rounded_size;  // subtree sums of w'
};

/// Rounds the prefix sums of the scaled weights, taken in depth-first order,
/// half-up; each subtree is a contiguous run of that order.
RoundedTree discrepancy_round(const CanonicalTree& tree, std::span<const double> scaled, int64_t w0);

/// Maximal descending run of zero-weight nodes that each have exactly one
/// positive-size child (and possibly one zero-size placeholder leaf).
struct ZeroPath {
  std::vector<int32_t> nodes;        // canonical labels, top first
  std::vector<int32_t> placeholder;  // per path node: placeholder index or -1
  int32_t bottom = -1;               // positive-size child of the last node

  int l() const { return static_cast<int>(nodes.size()); }
  int l_prime() const;
};

/// Reduced tree T' in compact form. Zero-size children of every kept node are
/// merged into one zero-weight placeholder leaf, and every ZeroPath is a
/// single chain node (chain_shift = l + l') above its bottom node. Arrays are
/// indexed by compact label, in the canonical BFS layout DpTreeView expects.
struct ReducedTree {
  std::vector<double> weight;
  std::vector<double> size;
  std::vector<int64_t> count;  // nodes of T' below, chains expanded
  std::vector<int32_t> first_child;
  std::vector<int32_t> degree;
  std::vector<int32_t> level_begin;
  std::vector<int32_t> chain_shift;
  double total = 0.0;

  std::vector<int32_t> origin;       // canonical label; path top for chains; -1 for placeholders
  std::vector<int32_t> placeholder;  // placeholder index or -1
  std::vector<int32_t> path;         // path index or -1

  std::vector<std::vector<int32_t>> placeholder_roots;  // removed children, canonical labels
  std::vector<int32_t> placeholder_parent;              // canonical label
  std::vector<ZeroPath> paths;

  int64_t tprime_nodes = 0;          // |T'| with every path expanded
  int64_t positive_nodes = 0;        // nodes with w' > 0
  int64_t zero_branching_nodes = 0;  // w' = 0 with >= 2 positive-size children

  std::size_t compact_nodes() const { return weight.size(); }
  DpTreeView view() const;
};

ReducedTree reduce_tree(const CanonicalTree& tree, const RoundedTree& rounded);

/// T' with every path and placeholder materialized, as input records with
/// the rounded weights. Placeholders get ids "~zero:<parent id>".
std::vector<NodeRecord> tprime_records(const CanonicalTree& tree, const RoundedTree& rounded,
                                       const ReducedTree& reduced);

struct ApproxResult {
  int64_t w0 = 0;
  RoundedTree rounded;
  ReducedTree reduced;
  DPTables tables;                      // on the compact reduced tree
  std::vector<SummaryTree> trees;       // k = 1..min(K, n); entropy under the original weights
  std::vector<double> rounded_entropy;  // the same trees under the rounded weights
};

ApproxResult solve_approx(const CanonicalTree& tree, int K, double epsilon,
                          double c = kDefaultW0Constant, Execution execution = Execution::parallel);

}  // namespace summtree
