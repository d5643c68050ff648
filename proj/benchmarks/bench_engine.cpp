#include <benchmark/benchmark.h>

#include "spreadlab/engine.hpp"

using namespace spreadlab;

static void BM_SimulatorStep(benchmark::State& state) {
  SimConfig cfg;
  cfg.mechanism = state.range(0) ? DepositionMechanism::non_uniform(0.7) : DepositionMechanism::uniform();
  Simulator sim(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(sim.step());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatorStep)->Arg(0)->Arg(1);

static void BM_Run(benchmark::State& state) {
  SimConfig cfg;
  cfg.steps = state.range(0);
  cfg.warmup = cfg.steps / 100;
  for (auto _ : state) {
    auto traj = run(cfg);
    benchmark::DoNotOptimize(traj.events.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Run)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_MarketLimitPair(benchmark::State& state) {
  OrderBook book(1, 1000);
  for (std::int64_t p = 400; p <= 499; ++p) book.limit_order(Side::Buy, TickPrice(p));
  for (std::int64_t p = 502; p <= 601; ++p) book.limit_order(Side::Sell, TickPrice(p));
  for (auto _ : state) {
    book.market_order(Side::Buy);
    book.limit_order(Side::Sell, book.best_ask());
    benchmark::DoNotOptimize(book.spread());
  }
}
BENCHMARK(BM_MarketLimitPair);
