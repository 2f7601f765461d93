#include <benchmark/benchmark.h>

#include "combilab/clcd.hpp"
#include "combilab/combi_core.hpp"

using namespace combilab;

static void BM_ClcdSearch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rng = substream(6, 0);
  const auto v = random_unit_vector(n, rng);
  const auto dv = difference_vector(v);
  ClcdQuery q;
  q.cap = 1.0;
  q.slope = 0.1;
  q.horizon = 1e3;
  for (auto _ : state) benchmark::DoNotOptimize(clcd_search(dv.entries(), q));
}
BENCHMARK(BM_ClcdSearch)->Arg(4)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
