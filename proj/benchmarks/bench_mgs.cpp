#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "lexgraph/decomposition.hpp"
#include "lexgraph/mgs.hpp"
#include "lexgraph/synthetic.hpp"

namespace {

lexgraph::DefGraph random_graph(std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution arc(density);
  std::vector<std::pair<lexgraph::VertexId, lexgraph::VertexId>> arcs;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && arc(rng)) arcs.emplace_back(static_cast<lexgraph::VertexId>(u), static_cast<lexgraph::VertexId>(v));
  return lexgraph::DefGraph::from_arcs(n, arcs);
}

}  // namespace

static void BM_SolveMgsRandom(benchmark::State& state) {
  auto g = random_graph(static_cast<std::size_t>(state.range(0)), 0.3, 7);
  lexgraph::SolverConfig cfg;
  cfg.branch_rule = state.range(1) ? lexgraph::BranchRule::max_degree : lexgraph::BranchRule::lexicographic;
  for (auto _ : state) benchmark::DoNotOptimize(lexgraph::solve_mgs(g, cfg));
  state.SetLabel(std::string(lexgraph::branch_rule_name(cfg.branch_rule)));
}

static void BM_ReduceInstance(benchmark::State& state) {
  auto g = random_graph(static_cast<std::size_t>(state.range(0)), 2.0 / static_cast<double>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(lexgraph::reduce_instance(g));
}

static void BM_EnumerateMgs(benchmark::State& state) {
  auto g = random_graph(10, 0.25, 9);
  lexgraph::SolverConfig cfg;
  cfg.enumeration_cap = 100000;
  for (auto _ : state) benchmark::DoNotOptimize(lexgraph::enumerate_mgs(g, cfg));
}

static void BM_GreedyGroundingSet(benchmark::State& state) {
  lexgraph::SyntheticConfig cfg;
  cfg.words = static_cast<std::size_t>(state.range(0));
  cfg.seed = 3;
  auto g = lexgraph::build_graph(lexgraph::generate_dictionary(cfg).lexicon);
  for (auto _ : state) benchmark::DoNotOptimize(lexgraph::greedy_grounding_set(g));
}

BENCHMARK(BM_SolveMgsRandom)->Args({12, 0})->Args({12, 1})->Args({24, 0})->Args({24, 1})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ReduceInstance)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateMgs)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GreedyGroundingSet)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);
