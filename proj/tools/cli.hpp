#pragma once

#include <iosfwd>
#include <string>

#include "summtree/summary_tree.hpp"
#include "summtree/tree_model.hpp"

namespace summtree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;      // usage, parse or validation error
inline constexpr int kExitInvariant = 2;  // an internal consistency check failed

/// Runs the command line tool. Diagnostics go to `err` as a single line
/// `error <category> <reason>: <message>`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Graphviz rendering of one summary tree; nodes in summary order.
std::string emit_dot(const CanonicalTree& tree, const SummaryTree& summary);

}  // namespace summtree::cli
