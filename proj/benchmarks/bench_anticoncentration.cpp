#include <benchmark/benchmark.h>

#include "combilab/anticoncentration.hpp"

using namespace combilab;

static void BM_ExactLawW(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rng = substream(7, 0);
  const auto v = random_unit_vector(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(exact_law_W(v, n / 2));
}
BENCHMARK(BM_ExactLawW)->Arg(8)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_RoosBound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rng = substream(8, 0);
  const auto a = random_unit_vector(n, rng);
  const auto v = random_unit_vector(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(roos_bound(a, v, 0.3));
}
BENCHMARK(BM_RoosBound)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

static void BM_EsseenBound(benchmark::State& state) {
  auto rng = substream(9, 0);
  const auto law = random_atomic_law(rng);
  BoundParams params;
  for (auto _ : state) benchmark::DoNotOptimize(esseen_bound(law, 0.3, params));
}
BENCHMARK(BM_EsseenBound)->Unit(benchmark::kMillisecond);
