#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spreadlab/parity_chain.hpp"

using namespace spreadlab;

namespace {

// Expected odd fraction for an i.i.d. geometric spread with the given mean,
// from the marginal and enumerated placement probabilities.
double oracle_geometric(double mean, bool uniform, double alpha) {
  const double p = 1.0 / mean;
  double num = 0.0, den = 0.0;
  for (std::int64_t s = 2; s < 4000; ++s) {
    const double w = p * std::pow(1.0 - p, double(s - 1));
    double odd = 0.0;
    for (std::int64_t i = 1; i < s; ++i) {
      const double g = s == 2 ? 1.0 : uniform ? 1.0 / double(s - 1) : i == 1 ? alpha : (1 - alpha) / double(s - 2);
      if ((s - i) % 2 == 1) odd += g;
    }
    num += w * odd;
    den += w;
  }
  return num / den;
}

}  // namespace

TEST_SUITE("parity_chain") {

TEST_CASE("marginal names") {
  CHECK(parse_spread_marginal("geometric") == SpreadMarginal::Geometric);
  CHECK(parse_spread_marginal("poisson") == SpreadMarginal::ShiftedPoisson);
  CHECK_THROWS_AS(parse_spread_marginal("normal"), ConfigError);
  CHECK(to_string(SpreadMarginal::Geometric) == "geometric");
}

TEST_CASE("stock validation") {
  VirtualStock v;
  v.mean_spread = 1.0;
  CHECK_THROWS_AS(v.validate(), DomainError);
  v.mean_spread = 2.0;
  v.n_samples = 0;
  CHECK_THROWS_AS(v.validate(), DomainError);
}

TEST_CASE("sampled spreads have the requested mean") {
  for (auto marginal : {SpreadMarginal::Geometric, SpreadMarginal::ShiftedPoisson}) {
    for (double mean : {1.5, 3.0, 8.0}) {
      VirtualStock v;
      v.mean_spread = mean;
      v.n_samples = 200'000;
      v.marginal = marginal;
      Rng rng(17);
      const auto s = sample_spread_sequence(v, rng);
      double sum = 0.0;
      std::int64_t lo = s.front();
      for (auto x : s) {
        sum += double(x);
        lo = std::min(lo, x);
      }
      CHECK(lo >= 1);
      CHECK(sum / double(s.size()) == doctest::Approx(mean).epsilon(0.02));
    }
  }
}

TEST_CASE("s = 2 always ends odd and s = 1 is excluded") {
  VirtualStock v;
  Rng rng(1);
  std::vector<std::int64_t> s(500, 2);
  s.insert(s.end(), 50, 1);
  const auto r = odd_fraction_after_transition(v, s, rng);
  CHECK(r.odd_fraction == 1.0);
  CHECK(r.n_transitions == 500);
  CHECK(r.n_excluded == 50);
  v.mechanism = DepositionMechanism::non_uniform(0.7);
  CHECK(odd_fraction_after_transition(v, s, rng).odd_fraction == 1.0);
}

TEST_CASE("too few transitions") {
  VirtualStock v;
  Rng rng(1);
  std::vector<std::int64_t> s(99, 3);
  s.insert(s.end(), 1000, 1);
  CHECK_THROWS_AS(odd_fraction_after_transition(v, s, rng), InsufficientSamples);
}

TEST_CASE("per-spread frequencies match the parity tables") {
  VirtualStock v;
  v.mechanism = DepositionMechanism::non_uniform(0.7);
  Rng rng(3);
  std::vector<std::int64_t> s;
  for (int k = 0; k < 100'000; ++k) {
    s.push_back(4);
    s.push_back(5);
  }
  const auto r = odd_fraction_after_transition(v, s, rng);
  const auto& c4 = r.cells.at(4);
  const auto& c5 = r.cells.at(5);
  CHECK(c4.visits == 100'000);
  CHECK(double(c4.odd) / c4.visits == doctest::Approx(0.85).epsilon(0.01));
  CHECK(double(c5.odd) / c5.visits == doctest::Approx(0.2).epsilon(0.03));
}

TEST_CASE("sweep agrees with the marginal oracle") {
  SweepConfig cfg;
  cfg.n_samples = 400'000;
  cfg.seed = 5;
  const auto rows = run_parity_sweep(cfg);
  REQUIRE(rows.size() == cfg.means.size() * 2);
  for (const auto& row : rows) {
    CAPTURE(row.mean_spread);
    CAPTURE(row.mechanism.name());
    const double expect =
        oracle_geometric(row.mean_spread, row.mechanism.is_uniform(), row.mechanism.alpha());
    CHECK(std::abs(row.result.odd_fraction - expect) < 5 * row.result.std_error);
  }
}

TEST_CASE("uniform odd fraction decreases toward one half") {
  SweepConfig cfg;
  cfg.mechanisms = {DepositionMechanism::uniform()};
  cfg.means = {1.5, 3.0, 8.0, 30.0};
  cfg.n_samples = 300'000;
  const auto rows = run_parity_sweep(cfg);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].result.odd_fraction < rows[i - 1].result.odd_fraction);
    CHECK(rows[i].result.odd_fraction > 0.5 - 3 * rows[i].result.std_error);
  }
}

TEST_CASE("sweep output does not depend on the thread count") {
  SweepConfig cfg;
  cfg.n_samples = 20'000;
  std::ostringstream one, many;
  write_sweep_csv(one, run_parity_sweep(cfg));
  cfg.threads = 4;
  write_sweep_csv(many, run_parity_sweep(cfg));
  CHECK(one.str() == many.str());
  CHECK(one.str().rfind("mean_spread,mechanism,alpha,odd_fraction,n_transitions\n", 0) == 0);
}

TEST_CASE("sweep config errors") {
  SweepConfig cfg;
  cfg.means.clear();
  CHECK_THROWS_AS(run_parity_sweep(cfg), ConfigError);
  cfg.means = {0.5};
  CHECK_THROWS(run_parity_sweep(cfg));
}

}  // TEST_SUITE
