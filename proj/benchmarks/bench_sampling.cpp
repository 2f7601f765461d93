#include <benchmark/benchmark.h>

#include "combilab/combi_core.hpp"

using namespace combilab;

static void BM_SampleFixedWeight(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto rng = substream(1, i++);
    benchmark::DoNotOptimize(sample_fixed_weight(n, n / 2, rng));
  }
}
BENCHMARK(BM_SampleFixedWeight)->Arg(16)->Arg(64)->Arg(256)->Arg(1024);

static void BM_SampleRowRegular(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto rng = substream(2, i++);
    benchmark::DoNotOptimize(sample_row_regular(n, n, n / 2, rng));
  }
}
BENCHMARK(BM_SampleRowRegular)->Arg(16)->Arg(64)->Arg(256);
