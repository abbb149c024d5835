#include "lexgraph/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <iomanip>

#include <nlohmann/json.hpp>

#include "lexgraph/errors.hpp"
#include "lexgraph/grounding.hpp"

namespace lexgraph {

std::string_view label_name(Label l) {
  switch (l) {
    case Label::outside: return "OUTSIDE";
    case Label::satellite: return "SATELLITE";
    case Label::core: return "CORE";
  }
  return "OUTSIDE";
}

Label parse_label(std::string_view name) {
  if (name == "OUTSIDE") return Label::outside;
  if (name == "SATELLITE") return Label::satellite;
  if (name == "CORE") return Label::core;
  throw PreconditionError("unknown label '" + std::string(name) + "'");
}

VertexSet extract_kernel(const DefGraph& g) {
  const auto n = g.vertex_count();
  std::vector<std::size_t> remaining_out(n);
  std::vector<char> removed(n, 0);
  std::deque<VertexId> sinks;
  for (std::size_t v = 0; v < n; ++v) {
    remaining_out[v] = g.out(static_cast<VertexId>(v)).size();
    if (remaining_out[v] == 0) sinks.push_back(static_cast<VertexId>(v));
  }
  while (!sinks.empty()) {
    auto v = sinks.front();
    sinks.pop_front();
    removed[v] = 1;
    for (auto u : g.in(v)) {
      if (u != v && --remaining_out[u] == 0) sinks.push_back(u);
    }
  }
  VertexSet kernel;
  for (std::size_t v = 0; v < n; ++v)
    if (!removed[v]) kernel.push_back(static_cast<VertexId>(v));
  return kernel;
}

VertexSet extract_kernel(const DefGraph& g, std::span<const VertexId> order) {
  const auto n = g.vertex_count();
  if (order.size() != n) throw PreconditionError("pruning order must list every vertex");
  std::vector<char> removed(n, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto v : order) {
      if (removed[v]) continue;
      auto succ = g.out(v);
      bool sink = std::none_of(succ.begin(), succ.end(), [&](VertexId w) { return !removed[w]; });
      if (sink) {
        removed[v] = 1;
        changed = true;
      }
    }
  }
  VertexSet kernel;
  for (std::size_t v = 0; v < n; ++v)
    if (!removed[v]) kernel.push_back(static_cast<VertexId>(v));
  return kernel;
}

CoreSplit split_core_satellites(const DefGraph& g, const VertexSet& kernel) {
  if (kernel != extract_kernel(g)) throw PreconditionError("kernel is not the sink-pruning fixed point of the graph");

  auto sub = g.induced(kernel);
  auto sccs = compute_sccs(sub);
  auto cond = condense(sub, sccs);

  CoreSplit split;
  std::vector<char> in_core(kernel.size(), 0);
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    if (!cond.in[c].empty()) continue;
    // A source singleton without a self-loop has no definers at all, which
    // only happens for words whose definition closed to the empty set.
    if (!is_cyclic_component(sub, sccs, c) && !sub.in(sccs.components[c].front()).empty())
      throw InvariantViolation("acyclic source component with definers inside the kernel");
    VertexSet members;
    for (auto local : sccs.components[c]) {
      in_core[local] = 1;
      members.push_back(kernel[local]);
    }
    split.core_components.push_back(std::move(members));
  }
  for (std::size_t i = 0; i < kernel.size(); ++i) (in_core[i] ? split.core : split.satellites).push_back(kernel[i]);
  split.core_is_single_scc = split.core_components.size() == 1;
  return split;
}

bool is_def_closed(const Lexicon& lex, const std::vector<std::string>& words) {
  std::set<std::string> members(words.begin(), words.end());
  for (const auto& w : members) {
    if (!lex.contains(w)) throw PreconditionError("word '" + w + "' is not a headword");
  }
  for (const auto& w : members) {
    for (const auto& d : lex.definition(w))
      if (!members.count(d)) return false;
  }
  return true;
}

bool is_def_closed(const DefGraph& g, const VertexSet& words) {
  std::vector<char> member(g.vertex_count(), 0);
  for (auto v : words) member[v] = 1;
  for (auto v : words)
    for (auto u : g.in(v))
      if (!member[u]) return false;
  return true;
}

int whole_percent(std::size_t part, std::size_t whole) {
  if (whole == 0) return 0;
  return static_cast<int>((200 * part + whole) / (2 * whole));
}

Decomposition decompose(const DefGraph& g) {
  Decomposition d;
  d.kernel = extract_kernel(g);
  auto split = split_core_satellites(g, d.kernel);
  d.core = std::move(split.core);
  d.satellites = std::move(split.satellites);
  d.core_components = std::move(split.core_components);
  d.core_is_single_scc = split.core_is_single_scc;
  d.label.assign(g.vertex_count(), Label::outside);
  for (auto v : d.core) d.label[v] = Label::core;
  for (auto v : d.satellites) d.label[v] = Label::satellite;
  return d;
}

StructureReport make_report(const DefGraph& g, const Decomposition& d) {
  StructureReport r;
  r.dictionary = g.vertex_count();
  r.kernel = d.kernel.size();
  r.satellites = d.satellites.size();
  r.core = d.core.size();
  r.core_is_single_scc = d.core_is_single_scc;
  r.kernel_is_grounding_set = is_grounding_set(g, d.kernel);
  for (const auto& c : d.core_components) r.largest_core_component = std::max(r.largest_core_component, c.size());
  if (r.kernel != r.satellites + r.core) throw InvariantViolation("kernel size differs from core + satellites");
  return r;
}

FullDecomposition decompose_full(const Lexicon& lex) {
  FullDecomposition full;
  full.graph = build_graph(lex);
  full.decomposition = decompose(full.graph);
  full.report = make_report(full.graph, full.decomposition);
  return full;
}

void write_report_table(std::ostream& out, const StructureReport& r, const std::string& title) {
  auto pct = [](int p) { return std::to_string(p) + "%"; };
  out << "Structure of " << title << "\n";
  out << std::left << std::setw(34) << "" << std::right << std::setw(12) << "Word count" << std::setw(8) << "%D"
      << std::setw(8) << "%K" << "\n";
  auto row = [&](const std::string& name, std::size_t count, const std::string& pd, const std::string& pk) {
    out << std::left << std::setw(34) << name << std::right << std::setw(12) << count << std::setw(8) << pd
        << std::setw(8) << pk << "\n";
  };
  row("Whole Dictionary (D)", r.dictionary, "", "");
  row("Kernel (K)", r.kernel, pct(r.kernel_pct_d()), "");
  row("Satellites (S) - small SCCs", r.satellites, pct(r.satellites_pct_d()), pct(r.satellites_pct_k()));
  row("Core (C)", r.core, pct(r.core_pct_d()), pct(r.core_pct_k()));
  if (r.mgs) row("MGS - Minimal Grounding Set", *r.mgs, pct(r.mgs_pct_d()), pct(r.mgs_pct_k()));
  out << "Core is a single SCC: " << (r.core_is_single_scc ? "yes" : "no") << "\n";
  out << "Kernel is a grounding set: " << (r.kernel_is_grounding_set ? "yes" : "no") << "\n";
}

std::string report_json(const StructureReport& r) {
  nlohmann::json j = {
      {"D", {{"count", r.dictionary}}},
      {"K", {{"count", r.kernel}, {"pct_D", r.kernel_pct_d()}}},
      {"S", {{"count", r.satellites}, {"pct_D", r.satellites_pct_d()}, {"pct_K", r.satellites_pct_k()}}},
      {"C", {{"count", r.core}, {"pct_D", r.core_pct_d()}, {"pct_K", r.core_pct_k()}}},
      {"core_is_single_scc", r.core_is_single_scc},
      {"kernel_is_grounding_set", r.kernel_is_grounding_set},
      {"largest_core_component", r.largest_core_component},
  };
  if (r.mgs) j["MGS"] = {{"count", *r.mgs}, {"pct_D", r.mgs_pct_d()}, {"pct_K", r.mgs_pct_k()}};
  return j.dump();
}

void write_labels(std::ostream& out, const DefGraph& g, const Decomposition& d) {
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    out << g.name(static_cast<VertexId>(v)) << '\t' << label_name(d.label[v]) << '\n';
}

}  // namespace lexgraph
