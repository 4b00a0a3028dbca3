#pragma once

#include <cmath>
#include <span>

namespace summtree {

/// Shannon entropy in bits.
struct EntropyBits {
  double value = 0.0;
};

/// Entropy-like sum normalized by a global reference total instead of the
/// total of the parts it covers. Values with the same reference add up.
struct PseudoEntropy {
  double value = 0.0;
  double reference = 1.0;

  PseudoEntropy& operator+=(const PseudoEntropy& other) {
    value += other.value;
    return *this;
  }
};

/// Relative tolerance accepted between the weights and the stated total.
inline constexpr double kWeightSumTolerance = 1e-9;

/// -(w / total) lg(w / total) with 0 lg 0 = 0. No argument checks; this is the
/// term evaluated in every DP cell.
inline double plogp(double weight, double total) {
  if (weight <= 0.0) return 0.0;
  double p = weight / total;
  return -p * std::log2(p);
}

/// Entropy of the distribution weights / total. Throws std::invalid_argument
/// if total <= 0, a weight is negative, or the weights do not sum to total.
EntropyBits entropy(std::span<const double> weights, double total);

/// Entropy of the distribution weights / sum(weights).
EntropyBits entropy(std::span<const double> weights);

/// Pseudo-entropy contribution of a single node of the given weight.
/// Throws std::invalid_argument unless 0 <= weight <= reference.
PseudoEntropy node_pseudo_entropy(double weight, double reference);

/// Converts the pseudo-entropy of a summary of a subtree with total
/// subtree_weight into that summary's own entropy.
EntropyBits pseudo_to_entropy(PseudoEntropy p, double reference, double subtree_weight);

}  // namespace summtree
