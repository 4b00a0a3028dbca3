#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "summtree/tree_model.hpp"

namespace summtree {

enum class TreeFormat { csv, json };

TreeFormat parse_tree_format(const std::string& name);

// CSV: header `id,parent,weight`, empty parent on the root row. Fields may be
// double-quoted ("" escapes a quote).
std::vector<NodeRecord> read_csv(std::istream& in);
void write_csv(std::ostream& out, const std::vector<NodeRecord>& records);

// JSON: nested {"id": ..., "weight": ..., "children": [...]}. Ids may be
// strings or integers.
std::vector<NodeRecord> read_json(std::istream& in);
void write_json(std::ostream& out, const std::vector<NodeRecord>& records);

std::vector<NodeRecord> read_records(std::istream& in, TreeFormat format);
std::vector<NodeRecord> read_records_file(const std::string& path, TreeFormat format);

}  // namespace summtree
