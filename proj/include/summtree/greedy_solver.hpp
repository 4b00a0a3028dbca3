#pragma once

#include "summtree/dp_kernel.hpp"
#include "summtree/tree_model.hpp"

namespace summtree {

// Same DP as solve_exact with every other-set restricted to a prefix of the
// sorted children. Reconstruct with summtree::reconstruct.
DPTables solve_greedy(const CanonicalTree& tree, int K, Execution execution = Execution::parallel);

}  // namespace summtree
