// Serial vs OpenMP timings of the exact and greedy DP drivers.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include <omp.h>

#include "summtree/exact_solver.hpp"
#include "summtree/greedy_solver.hpp"
#include "summtree/random_tree.hpp"

using namespace summtree;

namespace {

template <class F>
double median_seconds(int reps, F&& f) {
  std::vector<double> t;
  for (int r = 0; r < reps; ++r) {
    auto a = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - a).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"summtree solver benchmark"};
  std::vector<int64_t> sizes{10000, 100000, 1000000};
  int K = 16;
  int reps = 3;
  std::string shape = "uniform";
  uint64_t seed = 1;
  app.add_option("--sizes", sizes, "Tree sizes");
  app.add_option("-K", K, "Largest summary size");
  app.add_option("--reps", reps, "Repetitions (median reported)");
  app.add_option("--shape", shape, "uniform, fixed, path or star");
  app.add_option("--seed", seed, "Random seed");
  CLI11_PARSE(app, argc, argv);

  std::printf("threads=%d K=%d shape=%s\n", omp_get_max_threads(), K, shape.c_str());
  std::printf("%10s %8s %12s %12s %8s %10s\n", "n", "solver", "serial_s", "parallel_s", "speedup",
              "pair/2Kn");
  for (int64_t n : sizes) {
    RandomTreeOptions opt;
    opt.nodes = n;
    opt.shape = parse_tree_shape(shape);
    opt.degree = 4;
    opt.weights = WeightKind::real;
    opt.seed = seed;
    const CanonicalTree t = canonicalize(build_tree(random_tree(opt)));

    for (const char* name : {"exact", "greedy"}) {
      auto solve = [&](Execution e) {
        return name[0] == 'e' ? solve_exact(t, K, e) : solve_greedy(t, K, e);
      };
      DPTables ref = solve(Execution::serial);
      double ser = median_seconds(reps, [&] { solve(Execution::serial); });
      double par = median_seconds(reps, [&] { solve(Execution::parallel); });
      double ratio = static_cast<double>(ref.cost.pair_cost) / (2.0 * K * static_cast<double>(n));
      std::printf("%10lld %8s %12.4f %12.4f %8.2f %10.3f\n", static_cast<long long>(n), name, ser,
                  par, ser / par, ratio);
    }
  }
  return 0;
}
