#include <benchmark/benchmark.h>

#include "spreadlab/analytics.hpp"
#include "spreadlab/deposition.hpp"

using namespace spreadlab;

static void BM_Sample(benchmark::State& state) {
  const auto mech = state.range(1) ? DepositionMechanism::non_uniform(0.7) : DepositionMechanism::uniform();
  const std::int64_t s = state.range(0);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample(mech, s, rng));
}
BENCHMARK(BM_Sample)->Args({5, 0})->Args({5, 1})->Args({200, 0})->Args({200, 1});

static void BM_GeneralParity(benchmark::State& state) {
  const auto mech = DepositionMechanism::non_uniform(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(general_parity(mech, state.range(0)).p_odd());
}
BENCHMARK(BM_GeneralParity)->Arg(8)->Arg(512);
