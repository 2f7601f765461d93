#include <benchmark/benchmark.h>

#include "combilab/combi_core.hpp"
#include "combilab/spectral.hpp"

using namespace combilab;

static void BM_SmallestSingularValue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rng = substream(3, 0);
  const auto a = to_dense(sample_row_regular(n, n, n / 2, rng));
  for (auto _ : state) benchmark::DoNotOptimize(smallest_singular_value(a));
}
BENCHMARK(BM_SmallestSingularValue)->Arg(16)->Arg(64)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

static void BM_ExactSingularity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rng = substream(4, 0);
  const auto a = sample_row_regular(n, n, n / 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(is_singular_exact(a));
}
BENCHMARK(BM_ExactSingularity)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_RowSpanDistance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rng = substream(5, 0);
  const auto a = to_dense(sample_row_regular(n, n, n / 2, rng));
  for (auto _ : state) benchmark::DoNotOptimize(row_span_distance(a));
}
BENCHMARK(BM_RowSpanDistance)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);
