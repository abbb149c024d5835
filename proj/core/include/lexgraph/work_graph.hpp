#pragma once

#include <span>
#include <vector>

#include "lexgraph/digraph.hpp"

namespace lexgraph {

/// Mutable digraph used by the reduction and search routines.
///
/// Local vertex i stands for the original vertex `origin(i)`; origins are
/// strictly increasing so local order is word order. Deleted vertices keep
/// their slot and simply stop being alive.
class WorkGraph {
 public:
  WorkGraph() = default;
  explicit WorkGraph(const DefGraph& g);

  std::size_t slot_count() const noexcept { return origin_.size(); }
  std::size_t alive_count() const noexcept { return alive_count_; }
  bool empty() const noexcept { return alive_count_ == 0; }
  bool alive(int v) const { return alive_[v] != 0; }
  VertexId origin(int v) const { return origin_[v]; }

  std::span<const int> out(int v) const { return out_[v]; }
  std::span<const int> in(int v) const { return in_[v]; }
  bool has_arc(int u, int v) const;
  bool has_self_loop(int v) const { return has_arc(v, v); }
  std::size_t arc_count() const;

  /// Returns false if the arc already existed.
  bool add_arc(int u, int v);
  void remove_arc(int u, int v);
  void remove_vertex(int v);

  /// Deletes v after linking each in-neighbour to each out-neighbour, so
  /// that every cycle through v survives as a cycle avoiding v.
  void bypass(int v);

  std::vector<int> alive_vertices() const;

  /// Subgraph induced on the sorted local vertices `members`, compacted.
  WorkGraph induced(std::span<const int> members) const;

  /// Original-id view of the alive part, named after `names`.
  DefGraph to_def_graph(const DefGraph& names) const;

 private:
  std::vector<VertexId> origin_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<char> alive_;
  std::size_t alive_count_ = 0;
};

/// Strongly connected components of the alive part; each sorted, ordered by
/// smallest member.
std::vector<std::vector<int>> work_sccs(const WorkGraph& g);

}  // namespace lexgraph
