#include <doctest.h>

#include <stdexcept>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "summtree/entropy.hpp"
#include "summtree/approx_solver.hpp"
#include "summtree/exact_solver.hpp"
#include "summtree/tree_io.hpp"
#include <unistd.h>
#include "test_util.hpp"

using namespace summtree;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "summtree");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("summtree_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("gen then exact writes K trees that round-trip") {
  TempDir dir;
  auto g = run({"gen", "--nodes", "30", "--weights", "real", "--seed", "4", "--output", dir / "t.csv"});
  REQUIRE(g.code == 0);
  auto r = run({"--input", dir / "t.csv", "--format", "csv", "-K", "8", "--algorithm", "exact",
                "--output", dir / "out.json"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(slurp(dir.path / "out.json"));
  CHECK(doc["K"] == 8);
  CHECK(doc["algorithm"] == "exact");
  CHECK(doc["input_id_map"].size() == 30);
  REQUIRE(doc["results"].size() == 8);

  std::vector<double> w(31, 0.0);
  auto t = canonicalize(build_tree(read_records_file(dir / "t.csv", TreeFormat::csv)));
  for (std::size_t v = 0; v < t.size_n(); ++v) w[v + 1] = t.weight[v];
  for (const auto& res : doc["results"]) {
    std::vector<double> node_w;
    for (const auto& node : res["nodes"]) {
      double s = 0;
      for (int m : node["members"]) s += w[m];
      node_w.push_back(s);
      CHECK(node["weight"].get<double>() == doctest::Approx(s).epsilon(1e-12));
    }
    CHECK(res["nodes"].size() == res["k"].get<std::size_t>());
    CHECK(entropy(node_w).value == doctest::Approx(res["entropy_bits"].get<double>()).epsilon(1e-12));
  }
}

TEST_CASE("outputs are byte-identical across runs") {
  TempDir dir;
  REQUIRE(run({"gen", "--nodes", "200", "--shape", "fixed", "--degree", "3", "--weights", "integer",
               "--max-weight", "9", "--seed", "7", "--format", "json", "--output", dir / "t.json"})
              .code == 0);
  for (const char* algo : {"exact", "greedy", "approx"}) {
    std::vector<std::string> base{"--input", dir / "t.json", "-K", "6", "--algorithm", algo};
    if (std::string(algo) == "approx") {
      base.push_back("--epsilon");
      base.push_back("0.2");
    }
    auto a = run(base);
    auto b = run(base);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("approx output carries W0 and rounded entropies") {
  TempDir dir;
  REQUIRE(run({"gen", "--nodes", "50", "--weights", "real", "--output", dir / "t.csv"}).code == 0);
  auto r = run({"--input", dir / "t.csv", "-K", "4", "--algorithm", "approx", "--epsilon", "0.5"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["W0"] == compute_w0(4, 0.5));
  CHECK(doc["epsilon"] == 0.5);
  for (const auto& res : doc["results"]) {
    CHECK(res.contains("rounded_entropy_bits"));
    CHECK(res["nodes"].size() == res["k"].get<std::size_t>());
  }
}

TEST_CASE("usage and input errors exit 1 with a one-line reason") {
  TempDir dir;
  REQUIRE(run({"gen", "--nodes", "5", "--output", dir / "t.csv"}).code == 0);
  auto no_k = run({"--input", dir / "t.csv", "--algorithm", "approx", "--epsilon", "0.1"});
  CHECK(no_k.code == cli::kExitInput);
  CHECK(no_k.err.rfind("error usage ", 0) == 0);
  CHECK(std::count(no_k.err.begin(), no_k.err.end(), '\n') == 1);

  CHECK(run({"--input", dir / "t.csv", "-K", "3", "--algorithm", "approx"}).code == cli::kExitInput);
  CHECK(run({"--input", dir / "t.csv", "-K", "3", "--algorithm", "magic"}).code == cli::kExitInput);
  CHECK(run({"--input", dir / "t.csv", "-K", "x", "--algorithm", "exact"}).code == cli::kExitInput);
  CHECK(run({"--bogus"}).code == cli::kExitInput);

  auto missing = run({"--input", dir / "none.csv", "-K", "3", "--algorithm", "exact"});
  CHECK(missing.code == cli::kExitInput);
  CHECK(missing.err.rfind("error input parse:", 0) == 0);

  std::ofstream(dir / "cyc.csv") << "id,parent,weight\nr,,1\na,b,1\nb,a,1\n";
  auto cyc = run({"--input", dir / "cyc.csv", "-K", "2", "--algorithm", "greedy"});
  CHECK(cyc.code == cli::kExitInput);
  CHECK(cyc.err.rfind("error input cycle:", 0) == 0);

  std::ofstream(dir / "zero.csv") << "id,parent,weight\nr,,0\na,r,0\n";
  CHECK(run({"--input", dir / "zero.csv", "-K", "2", "--algorithm", "exact"}).err.rfind(
            "error input zero_total:", 0) == 0);
}

TEST_CASE("stats line") {
  TempDir dir;
  REQUIRE(run({"gen", "--nodes", "100", "--output", dir / "t.csv"}).code == 0);
  auto r = run({"--input", dir / "t.csv", "-K", "8", "--algorithm", "greedy", "--stats", "--output",
                dir / "o.json"});
  REQUIRE(r.code == 0);
  auto st = nlohmann::json::parse(r.out);
  CHECK(st["n"] == 100);
  CHECK(st["K"] == 8);
  CHECK(st["wall_seconds"].get<double>() >= 0.0);
  CHECK(st["pair_cost"].get<uint64_t>() <= 2u * 8u * 100u);
  CHECK(st["pair_cost_ratio"].get<double>() ==
        doctest::Approx(st["pair_cost"].get<double>() / 1600.0));
}

TEST_CASE("dot output") {
  auto p4 = testutil::path_tree(4);
  auto tab = solve_exact(p4, 4);
  auto one = cli::emit_dot(p4, reconstruct(p4, tab, 1));
  CHECK(std::count(one.begin(), one.end(), '[') == 2);  // node default + 1 node
  CHECK(one.find("->") == std::string::npos);
  auto two = cli::emit_dot(p4, reconstruct(p4, tab, 2));
  CHECK(two.find("n1 [") != std::string::npos);
  CHECK(two.find("n2 [") == std::string::npos);
  CHECK(two.find("n0 -> n1;") != std::string::npos);

  auto star = testutil::make_tree({{"r", "", 5}, {"a", "r", 1}, {"b", "r", 1}, {"c", "r", 1}});
  SummaryTree s;
  s.nodes.push_back(make_cover_node(star, 0, {0}, -1));
  s.nodes[0].kind = NodeKind::singleton;
  s.nodes[0].roots.clear();
  s.nodes.push_back(make_cover_node(star, 0, {1, 2, 3}, 0));
  assign_weights(star, s);
  REQUIRE(!check_summary(star, s));
  auto dot = cli::emit_dot(star, s);
  CHECK(dot.find("label=\"other (3)\\n3\"") != std::string::npos);
  CHECK(dot.find("label=\"r\\n5\"") != std::string::npos);

  TempDir dir;
  REQUIRE(run({"gen", "--nodes", "12", "--output", dir / "t.csv"}).code == 0);
  REQUIRE(run({"--input", dir / "t.csv", "-K", "3", "--algorithm", "exact", "--output",
               dir / "o.json", "--dot", dir / "sum"})
              .code == 0);
  for (int k = 1; k <= 3; ++k) CHECK(fs::exists(dir.path / ("sum." + std::to_string(k) + ".dot")));
  CHECK(!fs::exists(dir.path / "sum.4.dot"));
}
