#include "lexgraph/digraph.hpp"

#include <algorithm>
#include <deque>

#include "lexgraph/errors.hpp"

namespace lexgraph {

namespace {

void sort_unique(std::vector<VertexId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string padded_name(std::size_t i, std::size_t n) {
  auto digits = std::to_string(n > 0 ? n - 1 : 0).size();
  auto number = std::to_string(i);
  return "v" + std::string(digits - number.size(), '0') + number;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

DefGraph DefGraph::from_arcs(std::vector<std::string> names, std::span<const std::pair<VertexId, VertexId>> arcs) {
  if (!std::is_sorted(names.begin(), names.end()) ||
      std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw PreconditionError("vertex names must be strictly increasing");
  }
  DefGraph g;
  const auto n = names.size();
  g.names_ = std::move(names);
  g.out_.resize(n);
  g.in_.resize(n);
  for (auto [u, v] : arcs) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
      throw PreconditionError("arc endpoint out of range");
    g.out_[u].push_back(v);
    g.in_[v].push_back(u);
  }
  for (std::size_t v = 0; v < n; ++v) {
    sort_unique(g.out_[v]);
    sort_unique(g.in_[v]);
    g.arc_count_ += g.out_[v].size();
  }
  return g;
}

DefGraph DefGraph::from_arcs(std::size_t n, std::span<const std::pair<VertexId, VertexId>> arcs) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(padded_name(i, n));
  return from_arcs(std::move(names), arcs);
}

std::optional<VertexId> DefGraph::find(const std::string& word) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), word);
  if (it == names_.end() || *it != word) return std::nullopt;
  return static_cast<VertexId>(it - names_.begin());
}

VertexId DefGraph::id(const std::string& word) const {
  if (auto v = find(word)) return *v;
  throw PreconditionError("word '" + word + "' is not a vertex");
}

bool DefGraph::has_arc(VertexId u, VertexId v) const {
  const auto& succ = out_[static_cast<std::size_t>(u)];
  return std::binary_search(succ.begin(), succ.end(), v);
}

std::vector<std::pair<VertexId, VertexId>> DefGraph::arcs() const {
  std::vector<std::pair<VertexId, VertexId>> result;
  result.reserve(arc_count_);
  for (std::size_t u = 0; u < out_.size(); ++u)
    for (auto v : out_[u]) result.emplace_back(static_cast<VertexId>(u), v);
  return result;
}

DefGraph DefGraph::induced(const VertexSet& keep) const {
  std::vector<VertexId> local(names_.size(), -1);
  std::vector<std::string> names;
  names.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    local[keep[i]] = static_cast<VertexId>(i);
    names.push_back(names_[keep[i]]);
  }
  std::vector<std::pair<VertexId, VertexId>> arcs;
  for (auto u : keep)
    for (auto v : out_[u])
      if (local[v] >= 0) arcs.emplace_back(local[u], local[v]);
  return from_arcs(std::move(names), arcs);
}

std::vector<std::string> DefGraph::words(const VertexSet& set) const {
  std::vector<std::string> result;
  result.reserve(set.size());
  for (auto v : set) result.push_back(name(v));
  return result;
}

VertexSet DefGraph::ids(const std::vector<std::string>& words) const {
  VertexSet result;
  result.reserve(words.size());
  for (const auto& w : words) result.push_back(id(w));
  sort_unique(result);
  return result;
}

DefGraph build_graph(const Lexicon& lex) {
  if (!lex.closed) throw PreconditionError("build_graph requires a closed lexicon");
  std::vector<std::string> names;
  names.reserve(lex.size());
  for (const auto& [head, entry] : lex.entries) names.push_back(head);

  auto index_of = [&](const std::string& w) {
    auto it = std::lower_bound(names.begin(), names.end(), w);
    return static_cast<VertexId>(it - names.begin());
  };
  std::vector<std::pair<VertexId, VertexId>> arcs;
  VertexId v = 0;
  for (const auto& [head, entry] : lex.entries) {
    for (const auto& definer : entry.definition) arcs.emplace_back(index_of(definer), v);
    ++v;
  }
  return DefGraph::from_arcs(std::move(names), arcs);
}

SccPartition compute_sccs(const DefGraph& g) {
  const auto n = g.vertex_count();
  std::vector<std::int32_t> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<VertexId> stack;
  std::vector<VertexSet> comps;
  std::int32_t counter = 0;

  // Explicit DFS stack of (vertex, next out-arc position).
  std::vector<std::pair<VertexId, std::size_t>> dfs;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    dfs.emplace_back(static_cast<VertexId>(root), 0);
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<VertexId>(root));
    on_stack[root] = 1;
    while (!dfs.empty()) {
      auto& [v, pos] = dfs.back();
      auto succ = g.out(v);
      if (pos < succ.size()) {
        VertexId w = succ[pos++];
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
        VertexSet comp;
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      VertexId finished = v;
      dfs.pop_back();
      if (!dfs.empty()) {
        VertexId parent = dfs.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }

  std::sort(comps.begin(), comps.end(), [](const VertexSet& a, const VertexSet& b) { return a.front() < b.front(); });
  SccPartition p;
  p.component_of.assign(n, -1);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (auto v : comps[c]) p.component_of[v] = static_cast<std::int32_t>(c);
  p.components = std::move(comps);
  return p;
}

bool is_cyclic_component(const DefGraph& g, const SccPartition& p, std::size_t component) {
  const auto& members = p.components[component];
  return members.size() > 1 || g.has_self_loop(members.front());
}

std::size_t Condensation::arc_count() const {
  std::size_t total = 0;
  for (const auto& succ : out) total += succ.size();
  return total;
}

Condensation condense(const DefGraph& g, const SccPartition& p) {
  const auto n = g.vertex_count();
  if (p.component_of.size() != n) throw PreconditionError("partition does not match graph size");
  std::size_t members = 0;
  for (std::size_t c = 0; c < p.components.size(); ++c) {
    for (auto v : p.components[c]) {
      if (v < 0 || static_cast<std::size_t>(v) >= n || p.component_of[v] != static_cast<std::int32_t>(c))
        throw PreconditionError("partition components and component_of disagree");
    }
    members += p.components[c].size();
  }
  if (members != n) throw PreconditionError("partition does not cover every vertex exactly once");

  Condensation c;
  c.node_count = p.components.size();
  c.out.resize(c.node_count);
  c.in.resize(c.node_count);
  for (std::size_t u = 0; u < n; ++u) {
    for (auto v : g.out(static_cast<VertexId>(u))) {
      auto cu = p.component_of[u], cv = p.component_of[v];
      if (cu != cv) c.out[cu].push_back(cv);
    }
  }
  for (std::size_t k = 0; k < c.node_count; ++k) {
    auto& succ = c.out[k];
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    for (auto t : succ) c.in[t].push_back(static_cast<std::int32_t>(k));
  }
  if (!topological_order(c)) throw PreconditionError("partition is not the SCC partition of the graph");
  return c;
}

std::optional<std::vector<std::int32_t>> topological_order(const Condensation& c) {
  std::vector<std::size_t> indeg(c.node_count, 0);
  for (const auto& succ : c.out)
    for (auto t : succ) ++indeg[t];
  std::deque<std::int32_t> ready;
  for (std::size_t k = 0; k < c.node_count; ++k)
    if (indeg[k] == 0) ready.push_back(static_cast<std::int32_t>(k));
  std::vector<std::int32_t> order;
  order.reserve(c.node_count);
  while (!ready.empty()) {
    auto k = ready.front();
    ready.pop_front();
    order.push_back(k);
    for (auto t : c.out[k])
      if (--indeg[t] == 0) ready.push_back(t);
  }
  if (order.size() != c.node_count) return std::nullopt;
  return order;
}

VertexSet vertices_reaching_cycle(const DefGraph& g) {
  auto p = compute_sccs(g);
  std::vector<char> mark(g.vertex_count(), 0);
  std::deque<VertexId> queue;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (!is_cyclic_component(g, p, c)) continue;
    for (auto v : p.components[c]) {
      mark[v] = 1;
      queue.push_back(v);
    }
  }
  // Walk arcs backwards: anything with a path into a cyclic component.
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (auto u : g.in(v)) {
      if (!mark[u]) {
        mark[u] = 1;
        queue.push_back(u);
      }
    }
  }
  VertexSet result;
  for (std::size_t v = 0; v < mark.size(); ++v)
    if (mark[v]) result.push_back(static_cast<VertexId>(v));
  return result;
}

void write_dot(std::ostream& out, const DefGraph& g, const std::map<VertexId, std::string>& colors,
               const std::string& graph_name) {
  out << "digraph " << dot_quote(graph_name) << " {\n";
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    out << "  " << dot_quote(g.name(static_cast<VertexId>(v)));
    if (auto it = colors.find(static_cast<VertexId>(v)); it != colors.end())
      out << " [style=filled, fillcolor=" << dot_quote(it->second) << "]";
    out << ";\n";
  }
  for (auto [u, v] : g.arcs()) out << "  " << dot_quote(g.name(u)) << " -> " << dot_quote(g.name(v)) << ";\n";
  out << "}\n";
}

}  // namespace lexgraph
