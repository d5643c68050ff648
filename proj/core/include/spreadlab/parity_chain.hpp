#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string_view>
#include <vector>

#include "spreadlab/deposition.hpp"
#include "spreadlab/rng.hpp"

namespace spreadlab {

enum class SpreadMarginal : std::uint8_t {
  Geometric,       // 1 + Geometric(p = 1 / mean) failures
  ShiftedPoisson,  // 1 + Poisson(mean - 1)
};

std::string_view to_string(SpreadMarginal m) noexcept;
SpreadMarginal parse_spread_marginal(std::string_view name);

struct VirtualStock {
  double mean_spread = 2.0;  // > 1
  std::int64_t n_samples = 1'000'000;
  DepositionMechanism mechanism = DepositionMechanism::uniform();
  SpreadMarginal marginal = SpreadMarginal::Geometric;

  void validate() const;
};

// i.i.d. spreads >= 1 with the stock's mean.
std::vector<std::int64_t> sample_spread_sequence(const VirtualStock& stock, Rng& rng);

struct ParityCellCount {
  std::int64_t visits = 0;
  std::int64_t odd = 0;  // transitions that ended on an odd spread
};

struct ParityChainResult {
  double odd_fraction = 0.0;
  double std_error = 0.0;  // binomial, over n_transitions
  std::int64_t n_transitions = 0;
  std::int64_t n_excluded = 0;  // spreads equal to 1
  std::map<std::int64_t, ParityCellCount> cells;  // keyed by pre-event spread
};

// One parity transition per sampled spread s >= 2; throws InsufficientSamples
// when fewer than 100 transitions remain.
ParityChainResult odd_fraction_after_transition(const VirtualStock& stock, Rng& rng);
ParityChainResult odd_fraction_after_transition(const VirtualStock& stock,
                                                const std::vector<std::int64_t>& spreads,
                                                Rng& rng);

struct SweepRow {
  double mean_spread = 0.0;
  DepositionMechanism mechanism = DepositionMechanism::uniform();
  ParityChainResult result;
};

struct SweepConfig {
  std::vector<double> means{1.5, 2.0, 3.0, 4.0, 6.0, 8.0};
  std::vector<DepositionMechanism> mechanisms{DepositionMechanism::uniform(),
                                              DepositionMechanism::non_uniform(0.7)};
  std::int64_t n_samples = 1'000'000;
  SpreadMarginal marginal = SpreadMarginal::Geometric;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// Rows in (mean, mechanism) order. Stock j uses replica_seed(seed, j), so the
// output does not depend on the thread count.
std::vector<SweepRow> run_parity_sweep(const SweepConfig& config);

// CSV: mean_spread,mechanism,alpha,odd_fraction,n_transitions
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace spreadlab
