#include "summtree/entropy.hpp"

#include <stdexcept>
#include <string>

namespace summtree {

EntropyBits entropy(std::span<const double> weights, double total) {
  if (!(total > 0.0)) throw std::invalid_argument("entropy: total must be positive");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("entropy: weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - total) > kWeightSumTolerance * total)
    throw std::invalid_argument("entropy: weights sum to " + std::to_string(sum) +
                                ", expected " + std::to_string(total));
  double h = 0.0;
  for (double w : weights) h += plogp(w, total);
  return {h};
}

EntropyBits entropy(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return entropy(weights, sum);
}

PseudoEntropy node_pseudo_entropy(double weight, double reference) {
  if (!(reference > 0.0)) throw std::invalid_argument("pseudo-entropy: reference must be positive");
  if (!(weight >= 0.0)) throw std::invalid_argument("pseudo-entropy: weight must be nonnegative");
  if (weight > reference)
    throw std::invalid_argument("pseudo-entropy: weight exceeds the reference total");
  return {plogp(weight, reference), reference};
}

EntropyBits pseudo_to_entropy(PseudoEntropy p, double reference, double subtree_weight) {
  if (!(subtree_weight > 0.0))
    throw std::invalid_argument("pseudo_to_entropy: subtree weight must be positive");
  if (!(reference > 0.0) || subtree_weight > reference * (1.0 + kWeightSumTolerance))
    throw std::invalid_argument("pseudo_to_entropy: need 0 < subtree weight <= reference");
  if (subtree_weight == reference) return {p.value};
  double ratio = reference / subtree_weight;
  return {ratio * p.value - std::log2(ratio)};
}

}  // namespace summtree
