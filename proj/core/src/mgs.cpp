#include "lexgraph/mgs.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <optional>
#include <queue>

#include <nlohmann/json.hpp>

#include "lexgraph/errors.hpp"
#include "lexgraph/grounding.hpp"

namespace lexgraph {

std::string_view branch_rule_name(BranchRule r) {
  return r == BranchRule::max_degree ? "max-degree" : "lexicographic";
}

BranchRule parse_branch_rule(std::string_view name) {
  if (name == "max-degree") return BranchRule::max_degree;
  if (name == "lexicographic") return BranchRule::lexicographic;
  throw PreconditionError("unknown branch rule '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (!(time_limit_seconds > 0)) throw PreconditionError("time limit must be positive");
  if (enumeration_cap == 0) throw PreconditionError("enumeration cap must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

struct TimeExpired {};

class Deadline {
 public:
  explicit Deadline(double seconds)
      : start_(Clock::now()),
        end_(start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}

  void tick() {
    ++nodes_;
    if (Clock::now() >= end_) throw TimeExpired{};
  }
  bool expired() const { return Clock::now() >= end_; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  std::uint64_t nodes() const { return nodes_; }

 private:
  Clock::time_point start_;
  Clock::time_point end_;
  std::uint64_t nodes_ = 0;
};

enum class RuleSet {
  /// Preserves every minimum solution: LOOP, IN0, OUT0.
  safe,
  /// Adds IN1/OUT1 contractions; preserves the optimum value only.
  contracting,
};

// Reduces `g` in place, starting from `seeds` (all alive vertices when
// empty). Forced vertices are appended as original ids. Contractions are
// recorded in `merged` (original ids) when non-null.
void reduce(WorkGraph& g, RuleSet rules, VertexSet& forced, std::map<VertexId, VertexId>* merged,
            const std::vector<int>& seeds = {}) {
  std::deque<int> queue;
  std::vector<char> queued(g.slot_count(), 0);
  for (int v : seeds.empty() ? g.alive_vertices() : seeds) {
    if (g.alive(v) && !queued[v]) {
      queue.push_back(v);
      queued[v] = 1;
    }
  }
  auto push = [&](int v) {
    if (g.alive(v) && !queued[v]) {
      queued[v] = 1;
      queue.push_back(v);
    }
  };
  std::vector<int> touched;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    queued[v] = 0;
    if (!g.alive(v)) continue;

    touched.clear();
    for (int w : g.out(v)) touched.push_back(w);
    for (int u : g.in(v)) touched.push_back(u);

    if (g.has_self_loop(v)) {
      // LOOP
      forced.push_back(g.origin(v));
      g.remove_vertex(v);
    } else if (g.in(v).empty() || g.out(v).empty()) {
      // IN0 / OUT0
      g.remove_vertex(v);
    } else if (rules == RuleSet::contracting && g.in(v).size() == 1) {
      // IN1: every cycle through v enters via its only definer u.
      int u = g.in(v).front();
      std::vector<int> succ(g.out(v).begin(), g.out(v).end());
      g.remove_vertex(v);
      for (int w : succ) g.add_arc(u, w);
      if (merged) (*merged)[g.origin(v)] = g.origin(u);
    } else if (rules == RuleSet::contracting && g.out(v).size() == 1) {
      // OUT1: every cycle through v leaves via its only successor w.
      int w = g.out(v).front();
      std::vector<int> pred(g.in(v).begin(), g.in(v).end());
      g.remove_vertex(v);
      for (int u : pred) g.add_arc(u, w);
      if (merged) (*merged)[g.origin(v)] = g.origin(w);
    } else {
      continue;
    }
    for (int x : touched) push(x);
  }
}

// Deletes vertices outside cyclic SCCs and arcs between SCCs. Neither lies
// on any cycle, so all solutions are preserved.
void strip_acyclic_parts(WorkGraph& g) {
  auto comps = work_sccs(g);
  std::vector<int> comp_of(g.slot_count(), -1);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (int v : comps[c]) comp_of[v] = static_cast<int>(c);
  for (const auto& comp : comps) {
    if (comp.size() == 1 && !g.has_self_loop(comp.front())) g.remove_vertex(comp.front());
  }
  std::vector<std::pair<int, int>> cross;
  for (int v : g.alive_vertices())
    for (int w : g.out(v))
      if (comp_of[w] != comp_of[v]) cross.emplace_back(v, w);
  for (auto [u, w] : cross) g.remove_arc(u, w);
}

// Shortest cycle through s by BFS over alive vertices; empty if none.
std::vector<int> shortest_cycle_through(const WorkGraph& g, int s, std::vector<int>& parent) {
  std::deque<int> queue;
  std::vector<int> visited;
  parent[s] = s;
  visited.push_back(s);
  queue.push_back(s);
  std::vector<int> cycle;
  while (!queue.empty() && cycle.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : g.out(v)) {
      if (w == s) {
        for (int x = v; x != s; x = parent[x]) cycle.push_back(x);
        cycle.push_back(s);
        break;
      }
      if (parent[w] < 0) {
        parent[w] = v;
        visited.push_back(w);
        queue.push_back(w);
      }
    }
  }
  for (int v : visited) parent[v] = -1;
  return cycle;
}

// Greedy packing of vertex-disjoint cycles: 2-cycles first, then shortest
// cycles found by BFS from low-degree vertices.
std::size_t packing_bound(WorkGraph g) {
  std::size_t count = 0;
  VertexSet forced;
  reduce(g, RuleSet::safe, forced, nullptr);
  count += forced.size();
  for (int v : g.alive_vertices()) {
    if (!g.alive(v)) continue;
    auto succ = g.out(v);
    auto partner = std::find_if(succ.begin(), succ.end(), [&](int w) { return w != v && g.has_arc(w, v); });
    if (partner == succ.end()) continue;
    int w = *partner;
    g.remove_vertex(v);
    g.remove_vertex(w);
    ++count;
  }
  std::vector<int> parent(g.slot_count(), -1);
  for (;;) {
    forced.clear();
    reduce(g, RuleSet::safe, forced, nullptr);
    count += forced.size();
    if (g.empty()) break;
    int start = -1;
    std::size_t best_degree = 0;
    for (int v : g.alive_vertices()) {
      auto degree = g.in(v).size() + g.out(v).size();
      if (start < 0 || degree < best_degree) {
        start = v;
        best_degree = degree;
      }
    }
    auto cycle = shortest_cycle_through(g, start, parent);
    if (cycle.empty()) {
      g.remove_vertex(start);
      continue;
    }
    for (int v : cycle) g.remove_vertex(v);
    ++count;
  }
  return count;
}

int pick_max_degree(const WorkGraph& g) {
  int best = -1;
  std::size_t best_degree = 0;
  for (int v : g.alive_vertices()) {
    auto degree = g.in(v).size() + g.out(v).size();
    if (best < 0 || degree > best_degree) {
      best = v;
      best_degree = degree;
    }
  }
  return best;
}

void append(VertexSet& to, const VertexSet& from) { to.insert(to.end(), from.begin(), from.end()); }

// Contract with IN1/OUT1, split into SCCs, then branch on a
// Lin-Jou style: contract with IN1/OUT1, split into SCCs, then branch on a
// vertex: include it (delete), or exclude it (bypass so that it can never
// be chosen; the bypass is the exclude-branch contraction).
class BranchAndBound {
 public:
  explicit BranchAndBound(Deadline& deadline) : deadline_(deadline) {}

  std::optional<VertexSet> solve(WorkGraph g, std::size_t limit) {
    deadline_.tick();
    VertexSet forced;
    reduce(g, RuleSet::contracting, forced, nullptr);
    if (forced.size() >= limit) return std::nullopt;
    std::size_t budget = limit - forced.size();
    if (g.empty()) return forced;

    auto comps = work_sccs(g);
    std::vector<std::vector<int>> cyclic;
    for (auto& c : comps)
      if (c.size() > 1 || g.has_self_loop(c.front())) cyclic.push_back(std::move(c));
    if (cyclic.empty()) return forced;

    if (cyclic.size() > 1) {
      std::vector<WorkGraph> parts;
      std::vector<std::size_t> bounds;
      std::size_t bound_sum = 0;
      for (const auto& c : cyclic) {
        parts.push_back(g.induced(c));
        bounds.push_back(std::max<std::size_t>(1, packing_bound(parts.back())));
        bound_sum += bounds.back();
      }
      if (bound_sum >= budget) return std::nullopt;
      VertexSet result = forced;
      std::size_t used = 0;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        bound_sum -= bounds[i];
        auto sub = solve(std::move(parts[i]), budget - used - bound_sum);
        if (!sub) return std::nullopt;
        used += sub->size();
        append(result, *sub);
      }
      return result;
    }

    if (cyclic.front().size() != g.alive_count()) g = g.induced(cyclic.front());
    if (packing_bound(g) >= budget) return std::nullopt;

    int v = pick_max_degree(g);
    std::optional<VertexSet> best;
    std::size_t best_limit = budget;

    WorkGraph without = g;
    without.remove_vertex(v);
    if (auto sub = solve(std::move(without), best_limit - 1)) {
      sub->push_back(g.origin(v));
      best_limit = sub->size();
      best = std::move(sub);
    }
    if (best_limit > 0) {
      g.bypass(v);
      if (auto sub = solve(std::move(g), best_limit)) best = std::move(sub);
    }
    if (!best) return std::nullopt;
    append(forced, *best);
    return forced;
  }

 private:
  Deadline& deadline_;
};

// Enumerates minimum solutions of exact size k in lexicographic order,
// branching include-first on the smallest remaining vertex. Only
// solution-preserving reductions are used.
class Enumerator {
 public:
  Enumerator(Deadline& deadline, std::size_t cap) : deadline_(deadline), cap_(cap) {}

  void run(WorkGraph g, std::size_t k, VertexSet chosen) {
    if (done()) return;
    deadline_.tick();
    VertexSet forced;
    reduce(g, RuleSet::safe, forced, nullptr);
    strip_acyclic_parts(g);
    reduce(g, RuleSet::safe, forced, nullptr);
    if (forced.size() > k) return;
    k -= forced.size();
    append(chosen, forced);
    if (g.empty()) {
      if (k == 0) {
        std::sort(chosen.begin(), chosen.end());
        solutions_.push_back(std::move(chosen));
      }
      return;
    }
    if (k == 0 || packing_bound(g) > k) return;

    int v = g.alive_vertices().front();
    WorkGraph without = g;
    without.remove_vertex(v);
    VertexSet with_v = chosen;
    with_v.push_back(g.origin(v));
    run(std::move(without), k - 1, std::move(with_v));
    if (done()) return;
    g.bypass(v);
    run(std::move(g), k, std::move(chosen));
  }

  std::vector<VertexSet>& solutions() { return solutions_; }

 private:
  bool done() const { return solutions_.size() >= cap_; }

  Deadline& deadline_;
  std::size_t cap_;
  std::vector<VertexSet> solutions_;
};

GroundingSet finish(VertexSet words, bool optimal, std::size_t lower_bound, const Deadline& deadline) {
  std::sort(words.begin(), words.end());
  GroundingSet s;
  s.words = std::move(words);
  s.optimal = optimal;
  s.lower_bound = optimal ? s.words.size() : std::min(lower_bound, s.words.size());
  s.wall_seconds = deadline.elapsed();
  s.nodes = deadline.nodes();
  return s;
}

GroundingSet greedy_on(WorkGraph g) {
  VertexSet chosen;
  reduce(g, RuleSet::contracting, chosen, nullptr);
  // Lazy max-heap on out-degree, ties to the smallest vertex.
  using Item = std::pair<std::size_t, int>;
  auto cmp = [](const Item& a, const Item& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
  for (int v : g.alive_vertices()) heap.emplace(g.out(v).size(), v);
  while (!g.empty()) {
    auto [degree, v] = heap.top();
    heap.pop();
    if (!g.alive(v)) continue;
    if (degree != g.out(v).size()) {
      heap.emplace(g.out(v).size(), v);
      continue;
    }
    std::vector<int> neighbours(g.in(v).begin(), g.in(v).end());
    neighbours.insert(neighbours.end(), g.out(v).begin(), g.out(v).end());
    chosen.push_back(g.origin(v));
    g.remove_vertex(v);
    std::erase(neighbours, v);
    if (neighbours.empty()) continue;
    // Contractions may raise out-degrees anywhere nearby; stale heap entries
    // are refreshed lazily above.
    VertexSet forced;
    reduce(g, RuleSet::contracting, forced, nullptr, neighbours);
    append(chosen, forced);
    for (int u : neighbours)
      if (g.alive(u)) heap.emplace(g.out(u).size(), u);
  }
  GroundingSet s;
  std::sort(chosen.begin(), chosen.end());
  s.words = std::move(chosen);
  return s;
}

}  // namespace

ReducedInstance reduce_instance(const DefGraph& g) {
  ReducedInstance r;
  r.residual = WorkGraph(g);
  reduce(r.residual, RuleSet::contracting, r.forced_in, &r.merged_into);
  std::sort(r.forced_in.begin(), r.forced_in.end());
  return r;
}

std::size_t cycle_packing_bound(const DefGraph& g) { return packing_bound(WorkGraph(g)); }

GroundingSet greedy_grounding_set(const DefGraph& g) {
  auto start = Clock::now();
  auto s = greedy_on(WorkGraph(g));
  s.optimal = false;
  s.lower_bound = 0;
  s.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return s;
}

GroundingSet solve_mgs(const DefGraph& g, const SolverConfig& cfg) {
  cfg.validate();
  Deadline deadline(cfg.time_limit_seconds);

  WorkGraph root(g);
  VertexSet forced;
  reduce(root, RuleSet::contracting, forced, nullptr);

  // Independent components, each with a greedy incumbent and a packing bound.
  std::vector<WorkGraph> parts;
  for (auto& c : work_sccs(root))
    if (c.size() > 1 || root.has_self_loop(c.front())) parts.push_back(root.induced(c));

  std::vector<VertexSet> incumbent(parts.size());
  std::vector<std::size_t> bound(parts.size());
  std::vector<char> exact(parts.size(), 0);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    incumbent[i] = greedy_on(parts[i]).words;
    bound[i] = std::max<std::size_t>(1, packing_bound(parts[i]));
    if (bound[i] >= incumbent[i].size()) exact[i] = 1;
  }

  bool timed_out = false;
  BranchAndBound bnb(deadline);
  for (std::size_t i = 0; i < parts.size() && !timed_out; ++i) {
    if (exact[i]) continue;
    try {
      if (auto better = bnb.solve(parts[i], incumbent[i].size())) incumbent[i] = std::move(*better);
      exact[i] = 1;
      bound[i] = incumbent[i].size();
    } catch (const TimeExpired&) {
      timed_out = true;
    }
  }

  VertexSet words = forced;
  std::size_t lower = forced.size();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    append(words, incumbent[i]);
    lower += bound[i];
  }
  if (timed_out) return finish(std::move(words), false, lower, deadline);

  if (cfg.branch_rule == BranchRule::lexicographic && !words.empty()) {
    // Canonical choice among optima: the lexicographically smallest one.
    Enumerator first(deadline, 1);
    try {
      first.run(WorkGraph(g), words.size(), {});
      if (!first.solutions().empty()) words = std::move(first.solutions().front());
    } catch (const TimeExpired&) {
      // keep the branch-and-bound optimum
    }
  }
  auto result = finish(std::move(words), true, 0, deadline);
  if (!is_grounding_set(g, result.words)) throw InvariantViolation("solver returned a set that does not ground the graph");
  return result;
}

std::vector<GroundingSet> enumerate_mgs(const DefGraph& g, const SolverConfig& cfg) {
  auto optimum = solve_mgs(g, cfg);
  return enumerate_mgs(g, cfg, optimum);
}

std::vector<GroundingSet> enumerate_mgs(const DefGraph& g, const SolverConfig& cfg, const GroundingSet& optimum) {
  cfg.validate();
  if (!optimum.optimal) throw PreconditionError("enumeration needs a proven optimum");
  Deadline deadline(cfg.time_limit_seconds);
  Enumerator e(deadline, cfg.enumeration_cap);
  try {
    e.run(WorkGraph(g), optimum.size(), {});
  } catch (const TimeExpired&) {
    // return what was found
  }
  std::vector<GroundingSet> result;
  for (auto& words : e.solutions()) {
    if (!is_grounding_set(g, words)) throw InvariantViolation("enumerated set does not ground the graph");
    GroundingSet s;
    s.words = std::move(words);
    s.optimal = true;
    s.lower_bound = s.words.size();
    s.wall_seconds = deadline.elapsed();
    s.nodes = deadline.nodes();
    result.push_back(std::move(s));
  }
  return result;
}

Straddle straddle_report(const Decomposition& d, const GroundingSet& s) {
  Straddle r;
  for (auto v : s.words) {
    if (v < 0 || static_cast<std::size_t>(v) >= d.label.size())
      throw PreconditionError("grounding set and decomposition come from different graphs");
    switch (d.label[v]) {
      case Label::core: ++r.in_core; break;
      case Label::satellite: ++r.in_satellite; break;
      case Label::outside: ++r.outside_kernel; break;
    }
  }
  if (s.optimal && r.outside_kernel != 0)
    throw InvariantViolation("minimum grounding set contains a word outside the kernel");
  return r;
}

std::string solver_record_json(const DefGraph& g, const GroundingSet& s) {
  nlohmann::json j = {{"size", s.size()},
                      {"optimal", s.optimal},
                      {"lower_bound", s.lower_bound},
                      {"wall_seconds", s.wall_seconds},
                      {"nodes", s.nodes},
                      {"words", g.words(s.words)}};
  return j.dump();
}

}  // namespace lexgraph
