#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "summtree/tree_model.hpp"

namespace summtree {

enum class TreeShape {
  uniform,  // node i attaches to a uniformly random earlier node
  fixed,    // node i attaches to node (i - 1) / degree
  path,
  star,
};

enum class WeightKind {
  unit,     // all weights 1
  integer,  // uniform integers in [0, max_weight]
  real,     // uniform reals in [0, max_weight)
};

struct RandomTreeOptions {
  int64_t nodes = 10;
  TreeShape shape = TreeShape::uniform;
  int32_t degree = 2;
  WeightKind weights = WeightKind::unit;
  double max_weight = 1.0;
  uint64_t seed = 1;
};

TreeShape parse_tree_shape(const std::string& name);
WeightKind parse_weight_kind(const std::string& name);

/// Deterministic in the options. Ids are "n<i>" with node 0 the root. Weight
/// draws that sum to zero are repeated with the next stream values until the
/// total is positive.
std::vector<NodeRecord> random_tree(const RandomTreeOptions& options);

}  // namespace summtree
