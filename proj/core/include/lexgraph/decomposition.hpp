#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexgraph/digraph.hpp"
#include "lexgraph/lexicon.hpp"

namespace lexgraph {

enum class Label { outside, satellite, core };

std::string_view label_name(Label l);
Label parse_label(std::string_view name);

/// Per-word structural role. Labels are overlay data: OUTSIDE words keep
/// their arcs in the graph.
struct Decomposition {
  std::vector<Label> label;
  VertexSet kernel;
  VertexSet core;
  VertexSet satellites;
  /// Source components of the kernel's condensation, each sorted.
  std::vector<VertexSet> core_components;
  bool core_is_single_scc = false;
};

/// Fixed point of repeatedly deleting vertices with no remaining out-arcs.
VertexSet extract_kernel(const DefGraph& g);

/// Same fixed point, but deletions are attempted by sweeping `order` (a
/// permutation of all vertices) until nothing changes. Exists so the result
/// can be checked for order independence.
VertexSet extract_kernel(const DefGraph& g, std::span<const VertexId> order);

struct CoreSplit {
  VertexSet core;
  VertexSet satellites;
  std::vector<VertexSet> core_components;
  bool core_is_single_scc = false;
};

/// Core = union of kernel SCCs receiving no arc from another kernel SCC.
/// Throws PreconditionError unless `kernel` == extract_kernel(g).
CoreSplit split_core_satellites(const DefGraph& g, const VertexSet& kernel);

/// Every word of `words` is defined using only words of `words`.
/// Throws PreconditionError for words that are not headwords.
bool is_def_closed(const Lexicon& lex, const std::vector<std::string>& words);
/// Graph form: every in-neighbour of a member is a member.
bool is_def_closed(const DefGraph& g, const VertexSet& words);

/// Round-half-up percentage of part/whole; 0 when whole is 0.
int whole_percent(std::size_t part, std::size_t whole);

struct StructureReport {
  std::size_t dictionary = 0;
  std::size_t kernel = 0;
  std::size_t satellites = 0;
  std::size_t core = 0;
  std::optional<std::size_t> mgs;
  bool core_is_single_scc = false;
  bool kernel_is_grounding_set = false;
  std::size_t largest_core_component = 0;

  int kernel_pct_d() const { return whole_percent(kernel, dictionary); }
  int satellites_pct_d() const { return whole_percent(satellites, dictionary); }
  int satellites_pct_k() const { return whole_percent(satellites, kernel); }
  int core_pct_d() const { return whole_percent(core, dictionary); }
  int core_pct_k() const { return whole_percent(core, kernel); }
  int mgs_pct_d() const { return mgs ? whole_percent(*mgs, dictionary) : 0; }
  int mgs_pct_k() const { return mgs ? whole_percent(*mgs, kernel) : 0; }
};

Decomposition decompose(const DefGraph& g);
StructureReport make_report(const DefGraph& g, const Decomposition& d);

struct FullDecomposition {
  DefGraph graph;
  Decomposition decomposition;
  StructureReport report;
};

/// build_graph + extract_kernel + split_core_satellites.
FullDecomposition decompose_full(const Lexicon& lex);

/// Plain-text table with the D / K / S / C (/ MGS) rows.
void write_report_table(std::ostream& out, const StructureReport& r, const std::string& title = "dictionary");
std::string report_json(const StructureReport& r);

/// TSV lines `word<TAB>LABEL`, in vertex order.
void write_labels(std::ostream& out, const DefGraph& g, const Decomposition& d);

}  // namespace lexgraph
