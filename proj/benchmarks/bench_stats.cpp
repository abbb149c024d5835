#include <random>

#include <benchmark/benchmark.h>

#include "lexgraph/stats.hpp"

static void BM_FUpperTail(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lexgraph::stats::f_upper_tail(x, 3, 40));
    x = x < 10 ? x + 0.01 : 0.1;
  }
}

static void BM_ForwardStepwise(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0, 1);
  std::vector<std::vector<double>> cols(5, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : cols) c[i] = noise(rng);
    y[i] = cols[0][i] - 0.5 * cols[3][i] + noise(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(lexgraph::stats::forward_stepwise(cols, y, 0.05));
}

BENCHMARK(BM_FUpperTail);
BENCHMARK(BM_ForwardStepwise)->Arg(1000)->Arg(20000)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
