#include "lexgraph/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lexgraph/errors.hpp"

namespace lexgraph {

void SyntheticConfig::validate() const {
  if (words < 10) throw PreconditionError("synthetic dictionary needs at least 10 words");
  if (!(core_fraction > 0) || !(satellite_fraction >= 0) || core_fraction + satellite_fraction >= 1)
    throw PreconditionError("core and satellite fractions must be positive and sum to less than 1");
  if (!(mean_definition_length >= 1)) throw PreconditionError("mean definition length must be at least 1");
}

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

// Definition length: at least 1, Poisson around the mean.
std::size_t draw_length(Rng& rng, double mean) {
  std::poisson_distribution<std::size_t> poisson(std::max(mean - 1, 0.0));
  return 1 + poisson(rng);
}

// Adds up to `count` distinct entries of `pool` (other than `self`) to `bag`.
void add_random(Rng& rng, const std::vector<std::size_t>& pool, std::size_t count, std::size_t self,
                std::set<std::size_t>& bag) {
  if (pool.empty()) return;
  std::size_t tries = 0;
  const std::size_t target = bag.size() + count;
  while (bag.size() < target && tries++ < 8 * count + 16) {
    auto w = pool[pick(rng, pool.size())];
    if (w != self) bag.insert(w);
  }
}

}  // namespace

SyntheticDictionary generate_dictionary(const SyntheticConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t n = cfg.words;
  const std::size_t n_core = std::max<std::size_t>(3, static_cast<std::size_t>(std::llround(cfg.core_fraction * n)));
  std::size_t n_sat = static_cast<std::size_t>(std::llround(cfg.satellite_fraction * n));
  if (n_core + n_sat >= n) throw PreconditionError("core and satellites leave no room for other words");

  // Roles are assigned to a random permutation so they do not follow word order.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::size_t> core(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_core));
  std::vector<std::size_t> sat(perm.begin() + static_cast<std::ptrdiff_t>(n_core),
                               perm.begin() + static_cast<std::ptrdiff_t>(n_core + n_sat));
  std::vector<std::size_t> outside(perm.begin() + static_cast<std::ptrdiff_t>(n_core + n_sat), perm.end());

  std::vector<std::set<std::size_t>> defs(n);
  const double len = cfg.mean_definition_length;

  // Core: a ring keeps it strongly connected; extra definers are core words only.
  for (std::size_t i = 0; i < n_core; ++i) {
    auto w = core[i];
    defs[w].insert(core[(i + n_core - 1) % n_core]);
    auto extra = std::min(draw_length(rng, len), n_core - 1) - 1;
    add_random(rng, core, extra, w, defs[w]);
  }

  // Satellites: about four fifths in small cycles, the rest bridge words
  // defined by the core and used by a cycle word.
  std::size_t n_bridge = n_sat / 5;
  std::size_t n_cyclic = n_sat - n_bridge;
  if (n_cyclic == 1) {
    n_cyclic = 0;
    n_bridge = n_sat;
  }
  std::vector<std::vector<std::size_t>> cycles;
  for (std::size_t i = 0; i < n_cyclic;) {
    std::size_t size = 2 + pick(rng, 3);
    if (n_cyclic - i - size == 1 || i + size > n_cyclic) size = n_cyclic - i;
    cycles.emplace_back(sat.begin() + static_cast<std::ptrdiff_t>(i), sat.begin() + static_cast<std::ptrdiff_t>(i + size));
    i += size;
  }
  for (const auto& cyc : cycles) {
    for (std::size_t j = 0; j < cyc.size(); ++j) {
      auto w = cyc[j];
      defs[w].insert(cyc[(j + cyc.size() - 1) % cyc.size()]);
      add_random(rng, core, std::max<std::size_t>(1, draw_length(rng, len) - 1), w, defs[w]);
    }
  }
  for (std::size_t b = n_cyclic; b < n_sat; ++b) {
    auto w = sat[b];
    add_random(rng, core, draw_length(rng, len), w, defs[w]);
    if (!cycles.empty()) {
      const auto& cyc = cycles[pick(rng, cycles.size())];
      defs[cyc[pick(rng, cyc.size())]].insert(w);
    } else {
      // No cycle to feed: the bridge joins the core's definers instead.
      defs[core[pick(rng, n_core)]].insert(w);
    }
  }

  // Everything else is defined by kernel words and earlier outside words,
  // and is never used by the kernel, so it cannot reach a cycle.
  std::vector<std::size_t> kernel_pool(core);
  kernel_pool.insert(kernel_pool.end(), sat.begin(), sat.end());
  std::bernoulli_distribution from_kernel(0.7);
  for (std::size_t i = 0; i < outside.size(); ++i) {
    auto w = outside[i];
    auto k = draw_length(rng, len);
    std::size_t tries = 0;
    while (defs[w].size() < k && tries++ < 8 * k + 16) {
      if (i == 0 || from_kernel(rng))
        defs[w].insert(kernel_pool[pick(rng, kernel_pool.size())]);
      else
        defs[w].insert(outside[pick(rng, i)]);
    }
  }

  const auto digits = std::to_string(n - 1).size();
  auto name = [&](std::size_t i) {
    auto s = std::to_string(i);
    return "w" + std::string(digits - s.size(), '0') + s;
  };
  SyntheticDictionary out;
  out.lexicon.closed = true;
  for (std::size_t w = 0; w < n; ++w) {
    WordBag bag;
    for (auto d : defs[w]) bag.insert(name(d));
    out.lexicon.entries.emplace(name(w), LexiconEntry{name(w), 1, std::move(bag)});
  }
  auto names = [&](const std::vector<std::size_t>& ids) {
    std::vector<std::string> v;
    for (auto i : ids) v.push_back(name(i));
    std::sort(v.begin(), v.end());
    return v;
  };
  out.core = names(core);
  out.satellites = names(sat);
  out.outside = names(outside);
  return out;
}

int planted_direction(NormVariable v) { return v == NormVariable::aoa ? -1 : 1; }

NormsTable generate_norms(const DefGraph& g, const Decomposition& d, const GroundingSet& mgs,
                          const SyntheticNormsConfig& cfg) {
  if (!(cfg.coverage >= 0 && cfg.coverage <= 1)) throw PreconditionError("coverage must lie in [0, 1]");
  Rng rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution covered(cfg.coverage);
  std::bernoulli_distribution cell_missing(0.05);

  std::vector<char> in_mgs(g.vertex_count(), 0);
  for (auto v : mgs.words) in_mgs[v] = 1;

  NormsTable table;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    // Stratum score: 3 MGS, 2 Core, 1 Satellites, 0 outside the kernel.
    double s = in_mgs[v] ? 3 : d.label[v] == Label::core ? 2 : d.label[v] == Label::satellite ? 1 : 0;
    const double shift = cfg.effect * s;
    // Draw every cell even when it ends up missing, so coverage does not
    // change the values of the words that are kept.
    const bool keep = covered(rng);
    const double aoa = 9.0 - 1.5 * (shift + noise(rng));
    const double imag_z = shift + noise(rng);
    const double imag = 420 + 80 * imag_z;
    const double conc_z = cfg.suppressor ? 0.8 * imag_z - 0.4 * shift + 0.6 * noise(rng) : shift + noise(rng);
    const double conc = 400 + 80 * conc_z;
    const double fw = std::round(std::exp(2.5 + 0.8 * (shift + noise(rng))));
    const double fo = std::round(std::exp(1.5 + 0.8 * (shift + noise(rng))));
    std::array<double, 5> cells{aoa, conc, imag, fw, fo};
    NormValues values;
    for (std::size_t k = 0; k < 5; ++k) {
      const bool missing = cell_missing(rng);
      if (keep && !missing) values.values[k] = cells[k];
    }
    if (values.any()) table.rows.emplace(g.name(static_cast<VertexId>(v)), values);
  }
  return table;
}

}  // namespace lexgraph
