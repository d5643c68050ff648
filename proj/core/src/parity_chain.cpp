#include "spreadlab/parity_chain.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>
#include <thread>

#include "spreadlab/analytics.hpp"
#include "spreadlab/csv.hpp"

namespace spreadlab {

std::string_view to_string(SpreadMarginal m) noexcept {
  return m == SpreadMarginal::Geometric ? "geometric" : "poisson";
}

SpreadMarginal parse_spread_marginal(std::string_view name) {
  if (name == "geometric") return SpreadMarginal::Geometric;
  if (name == "poisson") return SpreadMarginal::ShiftedPoisson;
  throw ConfigError("unknown spread marginal '" + std::string(name) + "'");
}

void VirtualStock::validate() const {
  if (!(mean_spread > 1.0) || !std::isfinite(mean_spread)) {
    throw DomainError("mean spread must be finite and > 1");
  }
  if (n_samples < 1) throw DomainError("n_samples must be positive");
}

namespace {

std::int64_t draw_geometric(double log_q, Rng& rng) {
  // Failures before the first success; 1 - u lies in (0, 1].
  const double u = 1.0 - rng.uniform();
  return static_cast<std::int64_t>(std::floor(std::log(u) / log_q));
}

std::int64_t draw_poisson(double lambda, Rng& rng) {
  double p = std::exp(-lambda);
  double cdf = p;
  const double u = rng.uniform();
  std::int64_t k = 0;
  while (u >= cdf && p > 0.0) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

double transition_p_odd(const DepositionMechanism& mech, std::int64_t s) {
  if (s == 2) return general_parity(mech, s).p_odd();
  if (mech.is_uniform()) return uniform_parity(s).p_odd();
  return nonuniform_parity(mech.alpha(), s).p_odd();
}

}  // namespace

std::vector<std::int64_t> sample_spread_sequence(const VirtualStock& stock, Rng& rng) {
  stock.validate();
  std::vector<std::int64_t> out(static_cast<std::size_t>(stock.n_samples));
  if (stock.marginal == SpreadMarginal::Geometric) {
    const double log_q = std::log1p(-1.0 / stock.mean_spread);
    for (auto& s : out) s = 1 + draw_geometric(log_q, rng);
  } else {
    const double lambda = stock.mean_spread - 1.0;
    if (lambda > 500.0) throw DomainError("poisson marginal supports means up to 501");
    for (auto& s : out) s = 1 + draw_poisson(lambda, rng);
  }
  return out;
}

ParityChainResult odd_fraction_after_transition(const VirtualStock& stock,
                                                const std::vector<std::int64_t>& spreads,
                                                Rng& rng) {
  ParityChainResult r;
  std::vector<double> p_odd;  // cached by s
  std::int64_t odd = 0;
  for (const std::int64_t s : spreads) {
    if (s < 1) throw DomainError("spreads must be >= 1");
    if (s == 1) {
      ++r.n_excluded;
      continue;
    }
    const auto idx = static_cast<std::size_t>(s);
    if (idx >= p_odd.size()) p_odd.resize(idx + 1, -1.0);
    if (p_odd[idx] < 0.0) p_odd[idx] = transition_p_odd(stock.mechanism, s);
    const bool is_odd = rng.bernoulli(p_odd[idx]);
    auto& cell = r.cells[s];
    ++cell.visits;
    if (is_odd) {
      ++cell.odd;
      ++odd;
    }
    ++r.n_transitions;
  }
  if (r.n_transitions < 100) {
    throw InsufficientSamples("only " + std::to_string(r.n_transitions) +
                              " transitions after excluding s = 1 (need 100)");
  }
  const double n = static_cast<double>(r.n_transitions);
  r.odd_fraction = static_cast<double>(odd) / n;
  r.std_error = std::sqrt(r.odd_fraction * (1.0 - r.odd_fraction) / n);
  return r;
}

ParityChainResult odd_fraction_after_transition(const VirtualStock& stock, Rng& rng) {
  const auto spreads = sample_spread_sequence(stock, rng);
  return odd_fraction_after_transition(stock, spreads, rng);
}

std::vector<SweepRow> run_parity_sweep(const SweepConfig& config) {
  if (config.means.empty() || config.mechanisms.empty()) {
    throw ConfigError("parity sweep needs at least one mean and one mechanism");
  }
  std::vector<SweepRow> rows;
  for (double m : config.means) {
    for (const auto& mech : config.mechanisms) {
      VirtualStock stock{m, config.n_samples, mech, config.marginal};
      try {
        stock.validate();
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
      rows.push_back(SweepRow{m, mech, {}});
    }
  }

  const auto work = [&](std::size_t j) {
    VirtualStock stock{rows[j].mean_spread, config.n_samples, rows[j].mechanism, config.marginal};
    Rng rng(replica_seed(config.seed, j));
    rows[j].result = odd_fraction_after_transition(stock, rng);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, rows.size()));
  if (threads == 1) {
    for (std::size_t j = 0; j < rows.size(); ++j) work(j);
    return rows;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t j = w; j < rows.size(); j += threads) work(j);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "mean_spread,mechanism,alpha,odd_fraction,n_transitions\n";
  for (const auto& r : rows) {
    out << csv::format_double(r.mean_spread) << ',' << r.mechanism.name() << ','
        << csv::format_double(r.mechanism.alpha()) << ',' << csv::format_double(r.result.odd_fraction)
        << ',' << r.result.n_transitions << '\n';
  }
}

}  // namespace spreadlab
