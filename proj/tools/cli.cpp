#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "summtree/approx_solver.hpp"
#include "summtree/exact_solver.hpp"
#include "summtree/greedy_solver.hpp"
#include "summtree/random_tree.hpp"
#include "summtree/tree_io.hpp"

namespace summtree::cli {
namespace {

using nlohmann::ordered_json;

// Carries an exit code and a one-line reason out of the driver.
struct Failure {
  int code;
  std::string category;
  std::string reason;
  std::string message;
};

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string display_label(const CanonicalTree& t, const SummaryNode& node) {
  if (node.kind == NodeKind::group) return "other (" + std::to_string(node.roots.size()) + ")";
  return t.ids[node.anchor];
}

TreeFormat format_for(const std::string& flag, const std::string& path) {
  if (!flag.empty()) return parse_tree_format(flag);
  auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".json") return TreeFormat::json;
  return TreeFormat::csv;
}

ordered_json summary_json(const CanonicalTree& t, const SummaryTree& s, int k) {
  ordered_json nodes = ordered_json::array();
  for (const auto& node : s.nodes) {
    ordered_json members = ordered_json::array();
    for (int32_t m : summtree::members(t, node)) members.push_back(m + 1);
    ordered_json j;
    j["label"] = display_label(t, node);
    j["kind"] = to_string(node.kind);
    j["anchor"] = node.anchor + 1;
    j["members"] = std::move(members);
    j["weight"] = node.weight;
    j["parent"] = node.parent < 0 ? ordered_json(nullptr) : ordered_json(node.parent);
    nodes.push_back(std::move(j));
  }
  ordered_json r;
  r["k"] = k;
  r["entropy_bits"] = s.entropy_bits;
  r["nodes"] = std::move(nodes);
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{kExitInput, "io", "open", "cannot write '" + path + "'"};
  f << text;
  if (!f) throw Failure{kExitInput, "io", "write", "failed writing '" + path + "'"};
}

// Rechecks every produced tree independently of the solver that built it.
void verify(const CanonicalTree& t, const std::vector<SummaryTree>& trees) {
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto& s = trees[i];
    const std::string k = std::to_string(i + 1);
    if (s.k() != i + 1)
      throw Failure{kExitInvariant, "invariant", "size",
                    "k=" + k + " tree has " + std::to_string(s.k()) + " nodes"};
    if (auto err = check_summary(t, s)) throw Failure{kExitInvariant, "invariant", "structure", "k=" + k + ": " + *err};
    double h = recompute_entropy(t, s);
    if (std::abs(h - s.entropy_bits) > 1e-9)
      throw Failure{kExitInvariant, "invariant", "entropy",
                    "k=" + k + " reported " + format_double(s.entropy_bits) + " recomputed " +
                        format_double(h)};
    if (h > std::log2(static_cast<double>(i + 1)) + 1e-9)
      throw Failure{kExitInvariant, "invariant", "bound", "k=" + k + " entropy exceeds lg k"};
  }
}

struct SolveOptions {
  std::string input;
  std::string format;
  int K = 0;
  std::string algorithm;
  std::optional<double> epsilon;
  double w0_constant = kDefaultW0Constant;
  std::string output;
  std::string dot_prefix;
  bool stats = false;
};

int solve(const SolveOptions& o, std::ostream& out) {
  if (o.input.empty()) throw Failure{kExitInput, "usage", "missing_flag", "--input is required"};
  if (o.algorithm.empty())
    throw Failure{kExitInput, "usage", "missing_flag", "--algorithm is required"};
  if (o.K < 1) throw Failure{kExitInput, "usage", "missing_flag", "-K must be given and >= 1"};
  if (o.algorithm == "approx" && !o.epsilon)
    throw Failure{kExitInput, "usage", "missing_flag", "--epsilon is required for approx"};
  if (o.algorithm != "approx" && o.epsilon)
    throw Failure{kExitInput, "usage", "bad_flag", "--epsilon only applies to approx"};

  const CanonicalTree t =
      canonicalize(build_tree(read_records_file(o.input, format_for(o.format, o.input))));
  const int n = static_cast<int>(t.size_n());
  const int kmax = std::min(o.K, n);

  std::vector<SummaryTree> trees;
  CostCounter cost;
  std::optional<ApproxResult> approx;

  const auto start = std::chrono::steady_clock::now();
  if (o.algorithm == "approx") {
    approx = solve_approx(t, o.K, *o.epsilon, o.w0_constant);
    trees = approx->trees;
    cost = approx->tables.cost;
  } else {
    DPTables tables = o.algorithm == "exact" ? solve_exact(t, o.K) : solve_greedy(t, o.K);
    for (int k = 1; k <= kmax; ++k) trees.push_back(reconstruct(t, tables, k));
    cost = tables.cost;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  verify(t, trees);

  ordered_json doc;
  ordered_json id_map = ordered_json::array();
  for (int v = 0; v < n; ++v) id_map.push_back({{"label", v + 1}, {"id", t.ids[v]}});
  doc["input_id_map"] = std::move(id_map);
  doc["W"] = t.total_weight;
  doc["K"] = o.K;
  doc["algorithm"] = o.algorithm;
  if (approx) {
    doc["epsilon"] = *o.epsilon;
    doc["w0_constant"] = o.w0_constant;
    doc["W0"] = approx->w0;
  }
  ordered_json results = ordered_json::array();
  for (int k = 1; k <= kmax; ++k) {
    ordered_json r = summary_json(t, trees[k - 1], k);
    if (approx) r["rounded_entropy_bits"] = approx->rounded_entropy[k - 1];
    results.push_back(std::move(r));
  }
  doc["results"] = std::move(results);

  const std::string text = doc.dump(2) + "\n";
  if (o.output.empty())
    out << text;
  else
    write_text(o.output, text);

  if (!o.dot_prefix.empty())
    for (int k = 1; k <= kmax; ++k)
      write_text(o.dot_prefix + "." + std::to_string(k) + ".dot", emit_dot(t, trees[k - 1]));

  if (o.stats) {
    ordered_json st;
    st["n"] = n;
    st["K"] = o.K;
    st["algorithm"] = o.algorithm;
    st["wall_seconds"] = seconds;
    st["pair_cost"] = cost.pair_cost;
    st["pair_cost_ratio"] =
        static_cast<double>(cost.pair_cost) / (2.0 * o.K * static_cast<double>(n));
    st["maxplus_ops"] = cost.maxplus_ops;
    if (approx) {
      st["W0"] = approx->w0;
      st["reduced_nodes"] = approx->reduced.compact_nodes();
    }
    out << st.dump() << "\n";
  }
  return kExitOk;
}

struct GenOptions {
  RandomTreeOptions tree;
  std::string shape = "uniform";
  std::string weights = "unit";
};

int generate(const GenOptions& g, uint64_t seed, const std::string& output,
             const std::string& format, std::ostream& out) {
  RandomTreeOptions opt = g.tree;
  opt.shape = parse_tree_shape(g.shape);
  opt.weights = parse_weight_kind(g.weights);
  opt.seed = seed;
  const auto records = random_tree(opt);
  const TreeFormat fmt = format_for(format, output);
  std::ostringstream text;
  if (fmt == TreeFormat::json)
    write_json(text, records);
  else
    write_csv(text, records);
  if (output.empty())
    out << text.str();
  else
    write_text(output, text.str());
  return kExitOk;
}

}  // namespace

std::string emit_dot(const CanonicalTree& t, const SummaryTree& s) {
  std::ostringstream out;
  out << "digraph summary {\n  node [shape=box];\n";
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    std::string label = display_label(t, s.nodes[i]);
    std::string escaped;
    for (char c : label) {
      if (c == '"' || c == '\\') escaped += '\\';
      escaped += c;
    }
    out << "  n" << i << " [label=\"" << escaped << "\\n" << format_double(s.nodes[i].weight)
        << "\"];\n";
  }
  for (std::size_t i = 0; i < s.nodes.size(); ++i)
    if (s.nodes[i].parent >= 0) out << "  n" << s.nodes[i].parent << " -> n" << i << ";\n";
  out << "}\n";
  return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum-entropy summary trees of node-weighted rooted trees"};
  app.set_help_all_flag("--help-all");

  SolveOptions so;
  uint64_t seed = 1;
  app.add_option("--input", so.input, "Input tree file");
  app.add_option("--format", so.format, "Input (or gen output) format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-K", so.K, "Largest summary size");
  app.add_option("--algorithm", so.algorithm, "exact, greedy or approx")
      ->check(CLI::IsMember({"exact", "greedy", "approx"}));
  app.add_option("--epsilon", so.epsilon, "Additive error for approx");
  app.add_option("--w0-constant", so.w0_constant, "Constant c in the W0 formula")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", so.output, "Output file (stdout if omitted)");
  app.add_option("--dot", so.dot_prefix, "Write PREFIX.k.dot for every k");
  app.add_flag("--stats", so.stats, "Print run statistics as JSON");
  app.add_option("--seed", seed, "Random seed for gen");

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "Write a random tree");
  gen->fallthrough();
  gen->add_option("--nodes", go.tree.nodes, "Number of nodes")->required();
  gen->add_option("--shape", go.shape, "uniform, fixed, path or star");
  gen->add_option("--degree", go.tree.degree, "Children per node for fixed");
  gen->add_option("--weights", go.weights, "unit, integer or real");
  gen->add_option("--max-weight", go.tree.max_weight, "Largest weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error usage " << e.get_name() << ": " << one_line(e.what()) << "\n";
    return kExitInput;
  }

  try {
    if (*gen) return generate(go, seed, so.output, so.format, out);
    return solve(so, out);
  } catch (const Failure& f) {
    err << "error " << f.category << " " << f.reason << ": " << one_line(f.message) << "\n";
    return f.code;
  } catch (const TreeError& e) {
    err << "error input " << to_string(e.kind()) << ": " << one_line(e.what()) << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error usage invalid_argument: " << one_line(e.what()) << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error invariant internal: " << one_line(e.what()) << "\n";
    return kExitInvariant;
  }
}

}  // namespace summtree::cli
