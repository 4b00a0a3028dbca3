#include "summtree/greedy_solver.hpp"

namespace summtree {

DPTables solve_greedy(const CanonicalTree& tree, int K, Execution execution) {
  // Children v_1..v_{d-K+1} seed the group; only the remaining K-1 are swept.
  return run_dp(DpTreeView::of(tree), K, ClassSet::prefix_only, execution);
}

}  // namespace summtree
