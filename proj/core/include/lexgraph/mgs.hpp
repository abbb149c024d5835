#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lexgraph/decomposition.hpp"
#include "lexgraph/digraph.hpp"
#include "lexgraph/work_graph.hpp"

namespace lexgraph {

enum class BranchRule {
  /// Branch on the vertex with the largest in+out degree; fastest.
  max_degree,
  /// After the optimum size is known, return the lexicographically smallest
  /// optimal set.
  lexicographic,
};

std::string_view branch_rule_name(BranchRule r);
BranchRule parse_branch_rule(std::string_view name);

struct SolverConfig {
  double time_limit_seconds = 60.0;
  std::size_t enumeration_cap = 1000;
  BranchRule branch_rule = BranchRule::lexicographic;

  /// Throws PreconditionError for non-positive limits.
  void validate() const;
};

/// A set of words whose removal leaves the definition graph acyclic.
struct GroundingSet {
  VertexSet words;
  /// `words.size()` is a proven minimum.
  bool optimal = false;
  /// Best proven lower bound on the minimum size.
  std::size_t lower_bound = 0;
  double wall_seconds = 0.0;
  std::uint64_t nodes = 0;

  std::size_t size() const noexcept { return words.size(); }
};

/// Output of the reduction rules.
struct ReducedInstance {
  WorkGraph residual;
  /// Vertices that belong to every minimum solution of the contracted graph.
  VertexSet forced_in;
  /// Contraction trace: deleted vertex -> vertex it was merged into.
  std::map<VertexId, VertexId> merged_into;
};

/// Applies LOOP, IN0/OUT0, IN1 and OUT1 to a fixpoint. A minimum feedback
/// vertex set of the residual plus `forced_in` is a minimum feedback vertex
/// set of `g`.
ReducedInstance reduce_instance(const DefGraph& g);

/// Exact minimum grounding set by reduction + branch-and-bound. When the
/// time limit expires the best set found so far is returned with
/// optimal=false and a proven lower bound.
GroundingSet solve_mgs(const DefGraph& g, const SolverConfig& cfg = {});

/// All minimum grounding sets (up to cfg.enumeration_cap), in lexicographic
/// order. Solves first; throws PreconditionError if optimality could not be
/// proven within the time limit.
std::vector<GroundingSet> enumerate_mgs(const DefGraph& g, const SolverConfig& cfg = {});

/// Same, reusing an already proven optimum.
std::vector<GroundingSet> enumerate_mgs(const DefGraph& g, const SolverConfig& cfg, const GroundingSet& optimum);

/// Scalable upper bound: reductions, then repeatedly take the residual
/// vertex with the largest out-degree.
GroundingSet greedy_grounding_set(const DefGraph& g);

/// Lower bound from greedily packing vertex-disjoint cycles.
std::size_t cycle_packing_bound(const DefGraph& g);

struct Straddle {
  std::size_t in_core = 0;
  std::size_t in_satellite = 0;
  std::size_t outside_kernel = 0;
};

/// Splits a grounding set by structural label. `outside_kernel` must be 0
/// for a minimal set; a non-zero count throws InvariantViolation when
/// `s.optimal` is set.
Straddle straddle_report(const Decomposition& d, const GroundingSet& s);

/// {"size", "optimal", "lower_bound", "wall_seconds", "nodes", "words"}
std::string solver_record_json(const DefGraph& g, const GroundingSet& s);

}  // namespace lexgraph
