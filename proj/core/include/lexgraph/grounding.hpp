#pragma once

#include "lexgraph/digraph.hpp"

namespace lexgraph {

/// Learnability closure: starting from `known`, a word becomes known once
/// every word of its definition is known. True iff every word ends up known.
bool learnable_from(const DefGraph& g, const VertexSet& known);

/// True iff the subgraph induced on V \ `removed` has no directed cycle.
bool acyclic_without(const DefGraph& g, const VertexSet& removed);

/// Grounding-set test. Both criteria above are evaluated and must agree;
/// disagreement throws InvariantViolation.
bool is_grounding_set(const DefGraph& g, const VertexSet& words);

}  // namespace lexgraph
