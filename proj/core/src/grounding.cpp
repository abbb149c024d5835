#include "lexgraph/grounding.hpp"

#include <deque>

#include "lexgraph/errors.hpp"

namespace lexgraph {

namespace {

std::vector<char> membership(const DefGraph& g, const VertexSet& words) {
  std::vector<char> member(g.vertex_count(), 0);
  for (auto v : words) {
    if (v < 0 || static_cast<std::size_t>(v) >= g.vertex_count())
      throw PreconditionError("grounding candidate contains a non-vertex");
    member[v] = 1;
  }
  return member;
}

}  // namespace

bool learnable_from(const DefGraph& g, const VertexSet& known_words) {
  const auto n = g.vertex_count();
  auto known = membership(g, known_words);
  std::vector<std::size_t> unknown_definers(n);
  std::deque<VertexId> frontier;
  std::size_t known_count = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (known[v]) {
      ++known_count;
      frontier.push_back(static_cast<VertexId>(v));
    }
    unknown_definers[v] = g.in(static_cast<VertexId>(v)).size();
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!known[v] && unknown_definers[v] == 0) {
      known[v] = 1;
      ++known_count;
      frontier.push_back(static_cast<VertexId>(v));
    }
  }
  while (!frontier.empty()) {
    auto u = frontier.front();
    frontier.pop_front();
    for (auto v : g.out(u)) {
      if (known[v]) continue;
      if (--unknown_definers[v] == 0) {
        known[v] = 1;
        ++known_count;
        frontier.push_back(v);
      }
    }
  }
  return known_count == n;
}

bool acyclic_without(const DefGraph& g, const VertexSet& removed_words) {
  const auto n = g.vertex_count();
  auto removed = membership(g, removed_words);
  // 0 = unvisited, 1 = on the DFS path, 2 = done
  std::vector<char> color(n, 0);
  std::vector<std::pair<VertexId, std::size_t>> dfs;
  for (std::size_t root = 0; root < n; ++root) {
    if (removed[root] || color[root]) continue;
    dfs.emplace_back(static_cast<VertexId>(root), 0);
    color[root] = 1;
    while (!dfs.empty()) {
      auto& [v, pos] = dfs.back();
      auto succ = g.out(v);
      if (pos < succ.size()) {
        auto w = succ[pos++];
        if (removed[w]) continue;
        if (color[w] == 1) return false;
        if (color[w] == 0) {
          color[w] = 1;
          dfs.emplace_back(w, 0);
        }
        continue;
      }
      color[v] = 2;
      dfs.pop_back();
    }
  }
  return true;
}

bool is_grounding_set(const DefGraph& g, const VertexSet& words) {
  bool by_closure = learnable_from(g, words);
  bool by_acyclicity = acyclic_without(g, words);
  if (by_closure != by_acyclicity)
    throw InvariantViolation("learnability closure and acyclicity disagree on a grounding-set candidate");
  return by_closure;
}

}  // namespace lexgraph
