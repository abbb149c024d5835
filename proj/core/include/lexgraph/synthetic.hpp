#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lexgraph/decomposition.hpp"
#include "lexgraph/lexicon.hpp"
#include "lexgraph/mgs.hpp"
#include "lexgraph/norms.hpp"

namespace lexgraph {

struct SyntheticConfig {
  std::size_t words = 2000;
  /// Share of words in the planted strongly connected core.
  double core_fraction = 0.06;
  /// Share of words in satellites: small cycles fed by the core, plus
  /// acyclic bridge words leading into them.
  double satellite_fraction = 0.02;
  double mean_definition_length = 10.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// A closed lexicon with known structure. Word lists are sorted.
struct SyntheticDictionary {
  Lexicon lexicon;
  std::vector<std::string> core;
  std::vector<std::string> satellites;
  std::vector<std::string> outside;
};

/// Same config and seed give the same lexicon.
SyntheticDictionary generate_dictionary(const SyntheticConfig& cfg);

struct SyntheticNormsConfig {
  /// Share of words that receive norms at all.
  double coverage = 0.9;
  /// Mean shift per stratum step, in noise standard deviations.
  double effect = 1.0;
  /// Make concreteness a suppressor: correlated with imageability but with
  /// a negative partial effect on kernel membership.
  bool suppressor = true;
  std::uint64_t seed = 1;
};

/// +1 when the planted ordering puts the MGS highest, -1 when lowest
/// (age of acquisition: MGS words are learned earliest).
int planted_direction(NormVariable v);

/// Norms whose stratum means follow MGS > Core > Satellites > rest of the
/// dictionary (reversed for age of acquisition). Strata are disjoint: MGS
/// words are taken out of Core and Satellites.
NormsTable generate_norms(const DefGraph& g, const Decomposition& d, const GroundingSet& mgs,
                          const SyntheticNormsConfig& cfg);

}  // namespace lexgraph
