#include <map>

#include <benchmark/benchmark.h>

#include "lexgraph/decomposition.hpp"
#include "lexgraph/digraph.hpp"
#include "lexgraph/synthetic.hpp"

namespace {

const lexgraph::Lexicon& synthetic(std::size_t words) {
  static std::map<std::size_t, lexgraph::Lexicon> cache;
  auto it = cache.find(words);
  if (it == cache.end()) {
    lexgraph::SyntheticConfig cfg;
    cfg.words = words;
    cfg.seed = 42;
    it = cache.emplace(words, lexgraph::generate_dictionary(cfg).lexicon).first;
  }
  return it->second;
}

}  // namespace

static void BM_BuildGraph(benchmark::State& state) {
  const auto& lex = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lexgraph::build_graph(lex));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

static void BM_Sccs(benchmark::State& state) {
  auto g = lexgraph::build_graph(synthetic(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(lexgraph::compute_sccs(g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.arc_count()));
}

static void BM_ExtractKernel(benchmark::State& state) {
  auto g = lexgraph::build_graph(synthetic(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(lexgraph::extract_kernel(g));
}

static void BM_DecomposeFull(benchmark::State& state) {
  const auto& lex = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lexgraph::decompose_full(lex));
}

BENCHMARK(BM_BuildGraph)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sccs)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractKernel)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecomposeFull)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);
