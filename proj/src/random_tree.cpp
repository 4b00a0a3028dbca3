#include "summtree/random_tree.hpp"

#include <random>
#include <stdexcept>

namespace summtree {

TreeShape parse_tree_shape(const std::string& name) {
  if (name == "uniform") return TreeShape::uniform;
  if (name == "fixed") return TreeShape::fixed;
  if (name == "path") return TreeShape::path;
  if (name == "star") return TreeShape::star;
  throw std::invalid_argument("unknown tree shape '" + name + "'");
}

WeightKind parse_weight_kind(const std::string& name) {
  if (name == "unit") return WeightKind::unit;
  if (name == "int" || name == "integer") return WeightKind::integer;
  if (name == "real") return WeightKind::real;
  throw std::invalid_argument("unknown weight kind '" + name + "'");
}

std::vector<NodeRecord> random_tree(const RandomTreeOptions& opt) {
  if (opt.nodes < 1) throw std::invalid_argument("random tree needs at least one node");
  if (opt.shape == TreeShape::fixed && opt.degree < 1)
    throw std::invalid_argument("fixed-degree tree needs degree >= 1");
  if (opt.weights != WeightKind::unit && !(opt.max_weight > 0.0))
    throw std::invalid_argument("max weight must be positive");
  if (opt.weights == WeightKind::integer && opt.max_weight < 1.0)
    throw std::invalid_argument("integer weights need max weight >= 1");

  std::mt19937_64 rng(opt.seed);
  const auto n = static_cast<std::size_t>(opt.nodes);
  std::vector<NodeRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = "n" + std::to_string(i);
    if (i == 0) continue;
    std::size_t p = 0;
    switch (opt.shape) {
      case TreeShape::uniform: p = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng); break;
      case TreeShape::fixed: p = (i - 1) / static_cast<std::size_t>(opt.degree); break;
      case TreeShape::path: p = i - 1; break;
      case TreeShape::star: p = 0; break;
    }
    out[i].parent = out[p].id;
  }

  double total = 0.0;
  do {
    total = 0.0;
    for (auto& r : out) {
      switch (opt.weights) {
        case WeightKind::unit: r.weight = 1.0; break;
        case WeightKind::integer:
          r.weight = static_cast<double>(std::uniform_int_distribution<int64_t>(
              0, static_cast<int64_t>(opt.max_weight))(rng));
          break;
        case WeightKind::real: r.weight = std::uniform_real_distribution<double>(0.0, opt.max_weight)(rng); break;
      }
      total += r.weight;
    }
  } while (!(total > 0.0));
  return out;
}

}  // namespace summtree
