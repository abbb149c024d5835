#include "lexgraph/work_graph.hpp"

#include <algorithm>

namespace lexgraph {

namespace {

bool sorted_insert(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) return false;
  v.insert(it, x);
  return true;
}

void sorted_erase(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

}  // namespace

WorkGraph::WorkGraph(const DefGraph& g) {
  const auto n = g.vertex_count();
  origin_.resize(n);
  out_.resize(n);
  in_.resize(n);
  alive_.assign(n, 1);
  alive_count_ = n;
  for (std::size_t v = 0; v < n; ++v) {
    origin_[v] = static_cast<VertexId>(v);
    auto succ = g.out(static_cast<VertexId>(v));
    auto pred = g.in(static_cast<VertexId>(v));
    out_[v].assign(succ.begin(), succ.end());
    in_[v].assign(pred.begin(), pred.end());
  }
}

bool WorkGraph::has_arc(int u, int v) const {
  const auto& succ = out_[u];
  return std::binary_search(succ.begin(), succ.end(), v);
}

std::size_t WorkGraph::arc_count() const {
  std::size_t total = 0;
  for (std::size_t v = 0; v < out_.size(); ++v)
    if (alive_[v]) total += out_[v].size();
  return total;
}

bool WorkGraph::add_arc(int u, int v) {
  if (!sorted_insert(out_[u], v)) return false;
  sorted_insert(in_[v], u);
  return true;
}

void WorkGraph::remove_arc(int u, int v) {
  sorted_erase(out_[u], v);
  sorted_erase(in_[v], u);
}

void WorkGraph::remove_vertex(int v) {
  if (!alive_[v]) return;
  for (int w : out_[v])
    if (w != v) sorted_erase(in_[w], v);
  for (int u : in_[v])
    if (u != v) sorted_erase(out_[u], v);
  out_[v].clear();
  in_[v].clear();
  alive_[v] = 0;
  --alive_count_;
}

void WorkGraph::bypass(int v) {
  std::vector<int> preds(in_[v].begin(), in_[v].end());
  std::vector<int> succs(out_[v].begin(), out_[v].end());
  remove_vertex(v);
  for (int u : preds) {
    if (u == v) continue;
    for (int w : succs)
      if (w != v) add_arc(u, w);
  }
}

std::vector<int> WorkGraph::alive_vertices() const {
  std::vector<int> result;
  result.reserve(alive_count_);
  for (std::size_t v = 0; v < alive_.size(); ++v)
    if (alive_[v]) result.push_back(static_cast<int>(v));
  return result;
}

WorkGraph WorkGraph::induced(std::span<const int> members) const {
  WorkGraph sub;
  const auto k = members.size();
  std::vector<int> local(origin_.size(), -1);
  for (std::size_t i = 0; i < k; ++i) local[members[i]] = static_cast<int>(i);
  sub.origin_.resize(k);
  sub.out_.resize(k);
  sub.in_.resize(k);
  sub.alive_.assign(k, 1);
  sub.alive_count_ = k;
  for (std::size_t i = 0; i < k; ++i) {
    int v = members[i];
    sub.origin_[i] = origin_[v];
    for (int w : out_[v])
      if (local[w] >= 0) sub.out_[i].push_back(local[w]);
    for (int u : in_[v])
      if (local[u] >= 0) sub.in_[i].push_back(local[u]);
  }
  return sub;
}

DefGraph WorkGraph::to_def_graph(const DefGraph& names) const {
  auto keep = alive_vertices();
  std::vector<std::string> labels;
  std::vector<int> local(origin_.size(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    local[keep[i]] = static_cast<int>(i);
    labels.push_back(names.name(origin_[keep[i]]));
  }
  std::vector<std::pair<VertexId, VertexId>> arcs;
  for (int v : keep)
    for (int w : out_[v]) arcs.emplace_back(local[v], local[w]);
  return DefGraph::from_arcs(std::move(labels), arcs);
}

std::vector<std::vector<int>> work_sccs(const WorkGraph& g) {
  const auto n = g.slot_count();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int counter = 0;
  std::vector<std::pair<int, std::size_t>> dfs;
  for (std::size_t root = 0; root < n; ++root) {
    if (!g.alive(static_cast<int>(root)) || index[root] >= 0) continue;
    dfs.emplace_back(static_cast<int>(root), 0);
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<int>(root));
    on_stack[root] = 1;
    while (!dfs.empty()) {
      auto& [v, pos] = dfs.back();
      auto succ = g.out(v);
      if (pos < succ.size()) {
        int w = succ[pos++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          dfs.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      int finished = v;
      dfs.pop_back();
      if (!dfs.empty()) low[dfs.back().first] = std::min(low[dfs.back().first], low[finished]);
    }
  }
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

}  // namespace lexgraph
