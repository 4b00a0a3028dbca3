#include "summtree/tree_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

namespace summtree {

namespace {

using Kind = TreeError::Kind;

[[noreturn]] void parse_error(const std::string& msg) { throw TreeError(Kind::parse, msg); }

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) parse_error("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_weight(const std::string& text, std::size_t line_no) {
  std::string s = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    parse_error("line " + std::to_string(line_no) + ": bad weight '" + s + "'");
  return value;
}

bool needs_quotes(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos || s != trim(s);
}

std::string quote(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string json_id(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  parse_error("node id must be a string or integer");
}

}  // namespace

TreeFormat parse_tree_format(const std::string& name) {
  if (name == "csv") return TreeFormat::csv;
  if (name == "json") return TreeFormat::json;
  parse_error("unknown format '" + name + "'");
}

std::vector<NodeRecord> read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<NodeRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line, line_no);
    if (!header_seen) {
      if (fields.size() != 3 || trim(fields[0]) != "id" || trim(fields[1]) != "parent" ||
          trim(fields[2]) != "weight")
        parse_error("line " + std::to_string(line_no) + ": expected header 'id,parent,weight'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3)
      parse_error("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                  std::to_string(fields.size()));
    NodeRecord r;
    r.id = trim(fields[0]);
    if (r.id.empty()) parse_error("line " + std::to_string(line_no) + ": empty id");
    std::string parent = trim(fields[1]);
    if (!parent.empty()) r.parent = std::move(parent);
    r.weight = parse_weight(fields[2], line_no);
    records.push_back(std::move(r));
  }
  if (!header_seen) parse_error("missing header 'id,parent,weight'");
  return records;
}

void write_csv(std::ostream& out, const std::vector<NodeRecord>& records) {
  out << "id,parent,weight\n";
  char buf[32];
  for (const auto& r : records) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, r.weight);
    out << quote(r.id) << ',' << (r.parent ? quote(*r.parent) : std::string()) << ','
        << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  }
}

std::vector<NodeRecord> read_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
  std::vector<NodeRecord> records;
  // Explicit stack; input trees can be far deeper than the call stack allows.
  std::vector<std::pair<const nlohmann::json*, std::optional<std::string>>> stack;
  stack.emplace_back(&doc, std::nullopt);
  while (!stack.empty()) {
    auto [node, parent] = stack.back();
    stack.pop_back();
    if (!node->is_object()) parse_error("tree node must be a JSON object");
    auto id = node->find("id");
    if (id == node->end()) parse_error("tree node without \"id\"");
    NodeRecord r;
    r.id = json_id(*id);
    r.parent = parent;
    auto w = node->find("weight");
    if (w == node->end() || !w->is_number())
      parse_error("node '" + r.id + "' needs a numeric \"weight\"");
    r.weight = w->get<double>();
    auto kids = node->find("children");
    if (kids != node->end()) {
      if (!kids->is_array()) parse_error("\"children\" of '" + r.id + "' must be an array");
      for (auto it = kids->rbegin(); it != kids->rend(); ++it) stack.emplace_back(&*it, r.id);
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_json(std::ostream& out, const std::vector<NodeRecord>& records) {
  if (records.empty()) parse_error("cannot write an empty tree");
  std::unordered_map<std::string, std::vector<std::size_t>> children;
  std::size_t root = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].parent)
      children[*records[i].parent].push_back(i);
    else
      root = i;
  }
  if (root == records.size()) throw TreeError(Kind::cycle, "no root");

  // Emit by hand with an explicit stack so deep trees do not recurse.
  struct Frame {
    std::size_t node;
    std::size_t next_child;
  };
  std::vector<Frame> stack{{root, 0}};
  auto open = [&](std::size_t i) {
    out << "{\"id\":" << nlohmann::json(records[i].id).dump()
        << ",\"weight\":" << nlohmann::json(records[i].weight).dump() << ",\"children\":[";
  };
  open(root);
  while (!stack.empty()) {
    auto& f = stack.back();
    auto it = children.find(records[f.node].id);
    std::size_t nkids = it == children.end() ? 0 : it->second.size();
    if (f.next_child < nkids) {
      if (f.next_child > 0) out << ',';
      std::size_t c = it->second[f.next_child++];
      open(c);
      stack.push_back({c, 0});
    } else {
      out << "]}";
      stack.pop_back();
    }
  }
  out << '\n';
}

std::vector<NodeRecord> read_records(std::istream& in, TreeFormat format) {
  return format == TreeFormat::csv ? read_csv(in) : read_json(in);
}

std::vector<NodeRecord> read_records_file(const std::string& path, TreeFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open '" + path + "'");
  return read_records(in, format);
}

}  // namespace summtree
