#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "summtree/summary_tree.hpp"
#include "summtree/tree_model.hpp"

namespace summtree {

inline constexpr std::size_t kDefaultEnumerationCap = 12;

class EnumerationLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Calls `visit` once for every k-node summary tree of `tree`, with arbitrary
/// other-sets. A one-child other-set is the same partition as representing
/// that child's subtree by one node, so only the latter is produced.
/// Returns the number of trees visited. Throws EnumerationLimit if n > cap.
std::size_t enumerate_all(const CanonicalTree& tree, int k,
                          const std::function<void(const SummaryTree&)>& visit,
                          std::size_t cap = kDefaultEnumerationCap);

struct BruteForceResult {
  int k = 0;
  std::size_t trees = 0;
  double best = 0.0;             // over all summary trees
  SummaryTree witness;
  double restricted_best = 0.0;  // every other-set a prefix or near-prefix
  SummaryTree restricted_witness;
  double prefix_best = 0.0;      // every other-set a prefix
  SummaryTree prefix_witness;
};

BruteForceResult brute_force_opt(const CanonicalTree& tree, int k,
                                 std::size_t cap = kDefaultEnumerationCap);

/// brute_force_opt for k = 1..n from a single enumeration.
std::vector<BruteForceResult> brute_force_all(const CanonicalTree& tree,
                                              std::size_t cap = kDefaultEnumerationCap);

}  // namespace summtree
