#include <benchmark/benchmark.h>

#include "spreadlab/parity_chain.hpp"

using namespace spreadlab;

static void BM_SampleSpreads(benchmark::State& state) {
  VirtualStock stock;
  stock.mean_spread = 4.0;
  stock.n_samples = 100'000;
  stock.marginal = state.range(0) ? SpreadMarginal::ShiftedPoisson : SpreadMarginal::Geometric;
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_spread_sequence(stock, rng).data());
  state.SetItemsProcessed(state.iterations() * stock.n_samples);
}
BENCHMARK(BM_SampleSpreads)->Arg(0)->Arg(1);

static void BM_OddFraction(benchmark::State& state) {
  VirtualStock stock;
  stock.mean_spread = 4.0;
  stock.n_samples = 100'000;
  stock.mechanism = DepositionMechanism::non_uniform(0.7);
  Rng rng(1);
  const auto spreads = sample_spread_sequence(stock, rng);
  for (auto _ : state) benchmark::DoNotOptimize(odd_fraction_after_transition(stock, spreads, rng).odd_fraction);
  state.SetItemsProcessed(state.iterations() * stock.n_samples);
}
BENCHMARK(BM_OddFraction);

static void BM_Sweep(benchmark::State& state) {
  SweepConfig cfg;
  cfg.n_samples = 100'000;
  cfg.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_parity_sweep(cfg).size());
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
