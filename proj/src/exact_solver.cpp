#include "summtree/exact_solver.hpp"

#include <stdexcept>
#include <string>

namespace summtree {

DPTables solve_exact(const CanonicalTree& tree, int K, Execution execution) {
  return run_dp(DpTreeView::of(tree), K, ClassSet::prefix_and_near_prefix, execution);
}

double optimal_entropy(const DPTables& tables, int k) {
  if (k < 1 || k > tables.cap(0))
    throw std::out_of_range("k = " + std::to_string(k) + " outside 1.." +
                            std::to_string(tables.cap(0)));
  return tables.F(0, k);
}

SummaryTree reconstruct(const CanonicalTree& tree, const DPTables& tables, int k) {
  std::vector<DraftNode> drafts;
  reconstruct_into(DpTreeView::of(tree), tables, 0, k, -1, drafts);
  SummaryTree s;
  s.nodes.reserve(drafts.size());
  for (auto& d : drafts) s.nodes.push_back(std::move(d.node));
  assign_weights(tree, s);
  return s;
}

std::vector<double> sweep_prefix_class(const CanonicalTree& tree, const DPTables& tables, int32_t v) {
  return sweep_class(DpTreeView::of(tree), tables, v, kPrefixClass);
}

std::vector<double> sweep_near_prefix_class(const CanonicalTree& tree, const DPTables& tables,
                                            int32_t v, int32_t j) {
  if (j < 1) throw std::out_of_range("near-prefix index must be positive");
  return sweep_class(DpTreeView::of(tree), tables, v, j);
}

}  // namespace summtree
