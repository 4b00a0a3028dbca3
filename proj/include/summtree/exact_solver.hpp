#pragma once

#include <cstdint>
#include <vector>

#include "summtree/dp_kernel.hpp"
#include "summtree/summary_tree.hpp"
#include "summtree/tree_model.hpp"

namespace summtree {

/// Maximum pseudo-entropy k-node summary trees of every subtree, for all
/// k <= min(K, n_v), over prefix and near-prefix other-sets. At the root the
/// pseudo-entropy is the entropy, so F(0, k) is the optimal entropy in bits.
DPTables solve_exact(const CanonicalTree& tree, int K, Execution execution = Execution::parallel);

/// Optimal entropy of a k-node summary tree of the whole tree.
double optimal_entropy(const DPTables& tables, int k);

/// Rebuilds an optimal k-node summary tree from the tables; throws
/// std::out_of_range unless 1 <= k <= min(K, n).
SummaryTree reconstruct(const CanonicalTree& tree, const DPTables& tables, int k);

/// Forest table of the prefix class at v (entry m-1: best m-node forest).
std::vector<double> sweep_prefix_class(const CanonicalTree& tree, const DPTables& tables, int32_t v);

/// Forest table of the near-prefix class with non-prefix child j (1-based).
std::vector<double> sweep_near_prefix_class(const CanonicalTree& tree, const DPTables& tables,
                                            int32_t v, int32_t j);

}  // namespace summtree
