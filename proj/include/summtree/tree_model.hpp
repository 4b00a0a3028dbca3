#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace summtree {

/// Raised for malformed input trees. `kind()` identifies the failed check.
class TreeError : public std::runtime_error {
 public:
  enum class Kind {
    empty,
    parse,
    duplicate_id,
    missing_parent,
    multiple_roots,
    cycle,
    invalid_weight,
    zero_total,
  };

  TreeError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(TreeError::Kind kind);

struct NodeRecord {
  std::string id;
  std::optional<std::string> parent;
  double weight = 0.0;
};

/// A validated node-weighted rooted tree, nodes kept in input order.
struct InputTree {
  std::vector<std::string> ids;
  std::vector<int32_t> parent;  // -1 for the root
  std::vector<double> weights;
  int32_t root = 0;
  double total_weight = 0.0;

  std::size_t size() const { return ids.size(); }
};

InputTree build_tree(const std::vector<NodeRecord>& records);

/// Canonical form used by every solver.
///
/// Nodes are relabeled 0..n-1 in breadth-first order with the children of
/// each node sorted nondecreasing by subtree size (ties by external id), so
/// the root is label 0, each depth level occupies a contiguous label range and
/// the children of v are the consecutive labels
/// [first_child[v], first_child[v] + degree[v]). Reported labels are 1-based
/// (label + 1).
struct CanonicalTree {
  std::vector<std::string> ids;
  std::vector<int32_t> parent;  // -1 for the root
  std::vector<double> weight;
  std::vector<double> size;     // sum of weights in the subtree
  std::vector<int64_t> count;   // number of nodes in the subtree
  std::vector<int32_t> first_child;
  std::vector<int32_t> degree;
  std::vector<int32_t> depth;
  std::vector<int32_t> level_begin;  // depth d spans [level_begin[d], level_begin[d+1])
  // Depth-first order (children in canonical order). The subtree of v is
  // preorder[pre_index[v] .. pre_index[v] + count[v]).
  std::vector<int32_t> preorder;
  std::vector<int32_t> pre_index;
  double total_weight = 0.0;

  std::size_t size_n() const { return ids.size(); }

  std::span<const int32_t> subtree(int32_t v) const {
    return std::span<const int32_t>(preorder).subspan(
        static_cast<std::size_t>(pre_index[v]), static_cast<std::size_t>(count[v]));
  }

  int32_t child(int32_t v, int32_t i) const { return first_child[v] + i; }
  bool is_leaf(int32_t v) const { return degree[v] == 0; }
};

CanonicalTree canonicalize(const InputTree& tree);

/// Records that rebuild `tree`; canonicalize(build_tree(to_records(t))) == t.
std::vector<NodeRecord> to_records(const CanonicalTree& tree);

/// Canonical tree over the same shape and ids but different weights.
CanonicalTree reweight(const CanonicalTree& tree, std::span<const double> weights);

}  // namespace summtree
