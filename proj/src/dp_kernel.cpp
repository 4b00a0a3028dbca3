#include "summtree/dp_kernel.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "summtree/entropy.hpp"

namespace summtree {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

// Levels narrower than this run on the calling thread.
constexpr int32_t kParallelLevelMin = 256;

struct SweepTrace {
  std::vector<int32_t> seed;      // roots forced into the group before the sweep
  int32_t initial = -1;           // prefix class without forced roots: first child
  std::vector<int32_t> swept;     // children swept, in order
  std::vector<std::vector<int32_t>> argmax;  // per step: forest size -> h
};

struct Scratch {
  std::vector<double> g, next, best;
  std::vector<int32_t> best_class;

  explicit Scratch(int K)
      : g(static_cast<std::size_t>(K) + 1), next(static_cast<std::size_t>(K) + 1),
        best(static_cast<std::size_t>(K) + 1), best_class(static_cast<std::size_t>(K) + 1) {}
};

// Forest sweep of one class at v. On return s.g[1..len] holds G(1..len).
int sweep(const DpTreeView& t, const DPTables& tab, int32_t v, int32_t cls, Scratch& s,
          CostCounter& cost, SweepTrace* trace) {
  const int K = tab.K;
  const int forest_cap = K - 1;
  const int32_t d = t.degree[v];
  const int32_t fc = t.first_child[v];
  const int32_t a = std::max(1, d - K + 2);
  const auto K64 = static_cast<int64_t>(K);

  double group = 0.0;
  int64_t counted = 0;
  for (int32_t i = 1; i < a; ++i) {
    group += t.size[fc + i - 1];
    counted += t.count[fc + i - 1];
    if (trace) trace->seed.push_back(fc + i - 1);
  }

  int len = 0;
  int32_t next = a;
  if (cls == kPrefixClass && a == 1) {
    auto row = tab.row(fc);
    len = std::min(forest_cap, static_cast<int>(row.size()));
    std::copy_n(row.begin(), len, s.g.begin() + 1);
    group = t.size[fc];
    counted = t.count[fc];
    next = 2;
    if (trace) trace->initial = fc;
  } else {
    if (cls != kPrefixClass) {
      group += t.size[fc + cls - 1];
      if (trace) trace->seed.push_back(fc + cls - 1);
    }
    s.g[1] = plogp(group, t.total);
    len = 1;
  }

  for (int32_t i = next; i <= d; ++i) {
    if (i == cls) continue;
    const int32_t c = fc + i - 1;
    const auto row = tab.row(c);
    const int rc = static_cast<int>(row.size());
    if (cls == kPrefixClass)
      cost.pair_cost += static_cast<uint64_t>(std::min(counted, K64) * std::min(t.count[c], K64));
    counted += t.count[c];
    group += t.size[c];

    const int new_len = std::min(forest_cap, len + rc);
    s.next[1] = plogp(group, t.total);
    std::vector<int32_t>* arg = nullptr;
    if (trace) {
      trace->swept.push_back(c);
      arg = &trace->argmax.emplace_back(static_cast<std::size_t>(new_len) + 1, 0);
    }
    for (int k = 2; k <= new_len; ++k) {
      const int lo = std::max(1, k - rc);
      const int hi = std::min(k - 1, len);
      double best = kMinusInf;
      int best_h = lo;
      for (int h = lo; h <= hi; ++h) {
        const double val = s.g[h] + row[k - h - 1];
        if (val > best) {
          best = val;
          best_h = h;
        }
      }
      cost.maxplus_ops += static_cast<uint64_t>(hi - lo + 1);
      s.next[k] = best;
      if (arg) (*arg)[k] = best_h;
    }
    std::swap(s.g, s.next);
    len = new_len;
  }
  ++cost.classes;
  return len;
}

void check_class(const DpTreeView& t, int K, ClassSet classes, int32_t v, int32_t cls) {
  if (cls == kPrefixClass) return;
  const int32_t d = t.degree[v];
  if (classes == ClassSet::prefix_only || cls < near_prefix_lo(d, K) || cls > d)
    throw std::out_of_range("near-prefix class " + std::to_string(cls) +
                            " outside the admissible range for degree " + std::to_string(d));
}

void process_node(const DpTreeView& t, DPTables& tab, int32_t v, Scratch& s, CostCounter& cost) {
  const int K = tab.K;
  const auto base = static_cast<std::size_t>(tab.offset[v]);
  const int cap = tab.cap(v);
  tab.value[base] = plogp(t.size[v], t.total);
  tab.choice[base] = kChoiceCollapse;
  if (cap == 1) return;

  if (t.is_chain(v)) {
    // Zero-weight chain nodes add nodes but no pseudo-entropy.
    const auto child = tab.row(t.first_child[v]);
    const int shift = t.chain_shift[v];
    for (int m = 2; m <= cap; ++m) {
      tab.value[base + m - 1] = child[std::max(1, m - shift) - 1];
      tab.choice[base + m - 1] = kChoiceChain;
    }
    return;
  }

  const int forest_cap = cap - 1;
  std::fill_n(s.best.begin() + 1, forest_cap, kMinusInf);
  auto take = [&](int32_t cls, int len) {
    const int upto = std::min(len, forest_cap);
    for (int m = 1; m <= upto; ++m) {
      if (s.g[m] > s.best[m]) {
        s.best[m] = s.g[m];
        s.best_class[m] = cls;
      }
    }
  };

  take(kPrefixClass, sweep(t, tab, v, kPrefixClass, s, cost, nullptr));
  if (tab.classes == ClassSet::prefix_and_near_prefix) {
    const int32_t d = t.degree[v];
    for (int32_t j = near_prefix_lo(d, K); j <= d; ++j) take(j, sweep(t, tab, v, j, s, cost, nullptr));
  }

  const double own = plogp(t.weight[v], t.total);
  for (int m = 1; m <= forest_cap; ++m) {
    tab.value[base + m] = own + s.best[m];
    tab.choice[base + m] = s.best_class[m];
  }
}

}  // namespace

DpTreeView DpTreeView::of(const CanonicalTree& t) {
  DpTreeView view;
  view.weight = t.weight;
  view.size = t.size;
  view.count = t.count;
  view.first_child = t.first_child;
  view.degree = t.degree;
  view.level_begin = t.level_begin;
  view.total = t.total_weight;
  return view;
}

DPTables run_dp(const DpTreeView& t, int K, ClassSet classes, Execution execution) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  const auto n = static_cast<int32_t>(t.n());
  DPTables tab;
  tab.K = K;
  tab.classes = classes;
  tab.offset.resize(static_cast<std::size_t>(n) + 1);
  tab.offset[0] = 0;
  for (int32_t v = 0; v < n; ++v)
    tab.offset[v + 1] = tab.offset[v] + std::min<int64_t>(K, t.count[v]);
  tab.value.assign(static_cast<std::size_t>(tab.offset[n]), 0.0);
  tab.choice.assign(static_cast<std::size_t>(tab.offset[n]), kChoiceCollapse);

  if (execution == Execution::serial) {
    Scratch s(K);
    for (int32_t v = n - 1; v >= 0; --v) process_node(t, tab, v, s, tab.cost);
    return tab;
  }

  // Children carry larger labels and sit one level deeper, so finishing the
  // levels bottom-up satisfies every dependency; nodes in a level are independent.
  const auto levels = static_cast<int32_t>(t.level_begin.size()) - 1;
  Scratch serial_scratch(K);
  for (int32_t level = levels - 1; level >= 0; --level) {
    const int32_t lo = t.level_begin[level];
    const int32_t hi = t.level_begin[level + 1];
    if (hi - lo < kParallelLevelMin) {
      for (int32_t v = hi - 1; v >= lo; --v) process_node(t, tab, v, serial_scratch, tab.cost);
      continue;
    }
#pragma omp parallel
    {
      Scratch s(K);
      CostCounter local;
#pragma omp for schedule(dynamic, 64) nowait
      for (int32_t v = lo; v < hi; ++v) process_node(t, tab, v, s, local);
#pragma omp critical(summtree_cost_merge)
      tab.cost += local;
    }
  }
  return tab;
}

std::vector<double> maxplus_step(std::span<const double> forest, std::span<const double> child,
                                 double group_value, int K) {
  const int len = static_cast<int>(forest.size());
  const int rc = static_cast<int>(child.size());
  const int new_len = std::min(K - 1, len + rc);
  if (new_len < 1) return {};
  std::vector<double> out(static_cast<std::size_t>(new_len), kMinusInf);
  out[0] = group_value;
  for (int k = 2; k <= new_len; ++k) {
    const int lo = std::max(1, k - rc);
    const int hi = std::min(k - 1, len);
    for (int h = lo; h <= hi; ++h) out[k - 1] = std::max(out[k - 1], forest[h - 1] + child[k - h - 1]);
  }
  return out;
}

std::vector<double> sweep_class(const DpTreeView& t, const DPTables& tab, int32_t v, int32_t cls) {
  check_class(t, tab.K, ClassSet::prefix_and_near_prefix, v, cls);
  if (t.degree[v] == 0 || tab.K < 2 || t.is_chain(v)) return {};
  Scratch s(tab.K);
  CostCounter cost;
  const int len = sweep(t, tab, v, cls, s, cost, nullptr);
  return {s.g.begin() + 1, s.g.begin() + 1 + len};
}

namespace {

void emit_forest(const DpTreeView& t, const DPTables& tab, int32_t v, int m, int32_t parent,
                 std::vector<DraftNode>& out);

void emit_subtree(const DpTreeView& t, const DPTables& tab, int32_t x, int budget, int32_t parent,
                  std::vector<DraftNode>& out) {
  DraftNode draft;
  draft.node.parent = parent;
  draft.node.anchor = x;
  if (budget == 1) {
    draft.node.kind = t.degree[x] == 0 ? NodeKind::singleton : NodeKind::subtree;
    if (draft.node.kind == NodeKind::subtree) draft.node.roots = {x};
    out.push_back(std::move(draft));
    return;
  }
  if (t.is_chain(x)) {
    draft.chain_budget = budget;
    out.push_back(std::move(draft));
    return;
  }
  draft.node.kind = NodeKind::singleton;
  out.push_back(std::move(draft));
  emit_forest(t, tab, x, budget - 1, static_cast<int32_t>(out.size()) - 1, out);
}

void emit_forest(const DpTreeView& t, const DPTables& tab, int32_t v, int m, int32_t parent,
                 std::vector<DraftNode>& out) {
  const int32_t cls = tab.choice_at(v, m + 1);
  Scratch s(tab.K);
  CostCounter cost;
  SweepTrace trace;
  sweep(t, tab, v, cls, s, cost, &trace);

  // Walk the sweep backwards, splitting the node budget between the forest
  // over earlier children and the current child.
  std::vector<int32_t> group_roots;
  std::vector<std::pair<int32_t, int>> parts;  // (child, budget)
  int rem = m;
  for (auto step = static_cast<int32_t>(trace.swept.size()) - 1; step >= 0 && rem > 0; --step) {
    if (rem == 1) {
      group_roots.assign(trace.swept.begin(), trace.swept.begin() + step + 1);
      rem = 0;
      break;
    }
    const int h = trace.argmax[step][rem];
    parts.emplace_back(trace.swept[step], rem - h);
    rem = h;
  }
  if (rem > 0) {
    if (trace.initial >= 0) {
      parts.emplace_back(trace.initial, rem);
      rem = 0;
    }
  } else {
    if (trace.initial >= 0) group_roots.push_back(trace.initial);
  }
  if (rem > 0 || !group_roots.empty()) {
    group_roots.insert(group_roots.end(), trace.seed.begin(), trace.seed.end());
  }
  if (!group_roots.empty()) {
    std::sort(group_roots.begin(), group_roots.end());
    DraftNode draft;
    draft.node.parent = parent;
    if (group_roots.size() == 1) {
      const int32_t r = group_roots.front();
      draft.node.anchor = r;
      draft.node.kind = t.degree[r] == 0 ? NodeKind::singleton : NodeKind::subtree;
      if (draft.node.kind == NodeKind::subtree) draft.node.roots = {r};
    } else {
      draft.node.kind = NodeKind::group;
      draft.node.anchor = v;
      draft.node.roots = std::move(group_roots);
    }
    out.push_back(std::move(draft));
  }
  std::sort(parts.begin(), parts.end());
  for (const auto& [child, budget] : parts) emit_subtree(t, tab, child, budget, parent, out);
}

}  // namespace

void reconstruct_into(const DpTreeView& t, const DPTables& tab, int32_t root, int budget,
                      int32_t parent, std::vector<DraftNode>& out) {
  if (budget < 1 || budget > tab.cap(root))
    throw std::out_of_range("summary size " + std::to_string(budget) + " outside 1.." +
                            std::to_string(tab.cap(root)));
  emit_subtree(t, tab, root, budget, parent, out);
}

}  // namespace summtree
