#include <benchmark/benchmark.h>

#include "spreadlab/estimators.hpp"

using namespace spreadlab;

namespace {

const SpreadEventSeries& sample_series() {
  static const SpreadEventSeries series = [] {
    SimConfig cfg;
    cfg.steps = 200'000;
    return to_event_series(run(cfg));
  }();
  return series;
}

}  // namespace

static void BM_Acf(benchmark::State& state) {
  const auto mids = sample_series().mids();
  for (auto _ : state) benchmark::DoNotOptimize(acf_abs_returns(mids, state.range(0)).decay_constant);
}
BENCHMARK(BM_Acf)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Relaxation(benchmark::State& state) {
  const auto& series = sample_series();
  for (auto _ : state) benchmark::DoNotOptimize(spread_relaxation(series, 1, 300).values.size());
}
BENCHMARK(BM_Relaxation)->Unit(benchmark::kMillisecond);

static void BM_ConditionalParity(benchmark::State& state) {
  const auto& series = sample_series();
  for (auto _ : state) benchmark::DoNotOptimize(conditional_parity_frequency(series).size());
}
BENCHMARK(BM_ConditionalParity);
