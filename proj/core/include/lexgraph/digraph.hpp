#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexgraph/lexicon.hpp"

namespace lexgraph {

using VertexId = std::int32_t;

/// Sorted, duplicate-free vertex ids. Because vertex ids follow the
/// lexicographic order of the words, sorted ids are sorted words.
using VertexSet = std::vector<VertexId>;

/// Definition graph: arc u -> v iff u occurs in the definition of v.
///
/// Vertices are numbered in lexicographic word order and adjacency lists are
/// sorted, so every traversal over a DefGraph is deterministic. Immutable
/// once built.
class DefGraph {
 public:
  DefGraph() = default;

  /// Builds a graph on `names` (must be strictly increasing) from (u, v) arcs.
  /// Parallel arcs are collapsed.
  static DefGraph from_arcs(std::vector<std::string> names, std::span<const std::pair<VertexId, VertexId>> arcs);

  /// Convenience for tests and generators: vertices named v0..v(n-1), zero
  /// padded so that name order equals id order.
  static DefGraph from_arcs(std::size_t n, std::span<const std::pair<VertexId, VertexId>> arcs);

  std::size_t vertex_count() const noexcept { return names_.size(); }
  std::size_t arc_count() const noexcept { return arc_count_; }

  const std::string& name(VertexId v) const { return names_[static_cast<std::size_t>(v)]; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<VertexId> find(const std::string& word) const;
  /// Like find(), but throws PreconditionError for unknown words.
  VertexId id(const std::string& word) const;

  /// Words defined using v.
  std::span<const VertexId> out(VertexId v) const { return out_[static_cast<std::size_t>(v)]; }
  /// Words used to define v.
  std::span<const VertexId> in(VertexId v) const { return in_[static_cast<std::size_t>(v)]; }
  bool has_arc(VertexId u, VertexId v) const;
  bool has_self_loop(VertexId v) const { return has_arc(v, v); }

  std::vector<std::pair<VertexId, VertexId>> arcs() const;

  /// Subgraph induced on `keep`, renumbered 0..keep.size()-1 in keep order.
  DefGraph induced(const VertexSet& keep) const;

  std::vector<std::string> words(const VertexSet& set) const;
  VertexSet ids(const std::vector<std::string>& words) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<VertexId>> out_;
  std::vector<std::vector<VertexId>> in_;
  std::size_t arc_count_ = 0;
};

/// One vertex per headword, one arc per (definer, defined) pair.
/// Throws PreconditionError if `lex` is not closed.
DefGraph build_graph(const Lexicon& lex);

struct SccPartition {
  /// Component index of each vertex.
  std::vector<std::int32_t> component_of;
  /// Components ordered by their smallest member; members sorted.
  std::vector<VertexSet> components;

  std::size_t size() const noexcept { return components.size(); }
};

/// Strongly connected components (iterative Tarjan).
SccPartition compute_sccs(const DefGraph& g);

/// True for a component with a directed cycle: more than one vertex, or a
/// single vertex with a self-loop.
bool is_cyclic_component(const DefGraph& g, const SccPartition& p, std::size_t component);

/// Acyclic quotient of a graph by its SCC partition.
struct Condensation {
  std::size_t node_count = 0;
  /// Sorted successor lists, indexed like SccPartition::components.
  std::vector<std::vector<std::int32_t>> out;
  std::vector<std::vector<std::int32_t>> in;

  std::size_t arc_count() const;
};

/// Throws PreconditionError if `p` was not computed from `g`.
Condensation condense(const DefGraph& g, const SccPartition& p);

/// Topological order of the condensation, or nullopt if it has a cycle.
std::optional<std::vector<std::int32_t>> topological_order(const Condensation& c);

/// Every vertex from which a directed cycle (self-loops included) can be
/// reached along out-arcs.
VertexSet vertices_reaching_cycle(const DefGraph& g);

/// Graphviz export. `colors` maps vertex -> fill colour; vertices without an
/// entry are left unfilled.
void write_dot(std::ostream& out, const DefGraph& g, const std::map<VertexId, std::string>& colors = {},
               const std::string& graph_name = "definitions");

}  // namespace lexgraph
