#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "spreadlab/series.hpp"

namespace spreadlab {

// Fraction of records whose post-event spread is odd.
double odd_fraction(const SpreadEventSeries& series);

struct ParityCell {
  std::int64_t n = 0;
  std::int64_t n_odd = 0;
  double p_odd = 0.0;
  double p_even = 0.0;
  double std_error = 0.0;  // binomial standard error of p_odd
  bool low_statistics = false;
};

// Per pre-event spread s, frequency of odd/even s' over spread-decreasing
// events (s' < s).
std::map<std::int64_t, ParityCell> conditional_parity_frequency(const SpreadEventSeries& series,
                                                                std::int64_t min_count = 50);

struct DeltaSDistribution {
  std::int64_t s = 0;
  std::int64_t total = 0;
  std::map<std::int64_t, std::int64_t> counts;
  std::map<std::int64_t, double> frequency;
};

// Histogram of Δs = s - s' over spread-decreasing events with s_pre == s.
DeltaSDistribution delta_s_distribution(const SpreadEventSeries& series, std::int64_t s);

struct AlphaCell {
  std::int64_t n = 0;
  std::int64_t adjacent = 0;  // events with Δs = 1
  double alpha = 0.0;
  double std_error = 0.0;
};

struct AlphaEstimate {
  std::map<std::int64_t, AlphaCell> by_spread;  // s >= 3 only
  double weighted_alpha = 0.0;                  // count-weighted over s
  std::int64_t total = 0;
};

AlphaEstimate alpha_estimate(const SpreadEventSeries& series);

struct AcfFitWindow {
  std::int64_t min_lag = 5;
  std::int64_t max_lag = 0;  // 0: up to the ACF's max lag
};

struct AcfResult {
  std::vector<double> acf;  // acf[j] is the autocorrelation at lag j + 1
  std::int64_t n_returns = 0;
  // Fit acf(lag) ~ amplitude * exp(-lag / decay_constant) over the window,
  // using lags whose acf exceeds the 3/sqrt(N) noise floor. decay_constant
  // is in events; +inf if the fitted slope is not negative, 0 if fewer than
  // two lags qualify.
  double decay_constant = 0.0;
  double amplitude = 0.0;
  std::int64_t fit_points = 0;

  double at(std::int64_t lag) const { return acf.at(static_cast<std::size_t>(lag - 1)); }
};

// Sample autocorrelation of |Δp| where Δp are consecutive mid differences.
AcfResult acf_abs_returns(std::span<const std::int64_t> mids, std::int64_t max_lag,
                          AcfFitWindow window = {});

struct RelaxationCurve {
  std::int64_t delta = 0;
  double mean_spread = 0.0;
  std::int64_t conditioning_events = 0;
  std::map<std::int64_t, double> values;        // G(τ|Δ) in ticks
  std::map<std::int64_t, std::int64_t> counts;  // conditioning events per lag
};

// G(τ|Δ) = E[s(t+τ) | s(t) - s(t-1) = Δ] - E[s], with s(t) the post-event
// spread of record t and lags in records. Overlapping windows all count.
RelaxationCurve spread_relaxation(const SpreadEventSeries& series, std::int64_t delta,
                                  std::int64_t max_lag);

// First lag with |G| < threshold, if any.
std::optional<std::int64_t> first_lag_below(const RelaxationCurve& curve, double threshold);

struct SpreadPdfBin {
  std::int64_t count = 0;
  double p = 0.0;
  double std_error = 0.0;  // batch-means error, valid for correlated series
};

// Empirical pmf of the post-event spread. Errors come from the spread of
// the per-batch frequencies over `batches` contiguous blocks.
std::map<std::int64_t, SpreadPdfBin> spread_pdf(const SpreadEventSeries& series,
                                               std::int64_t batches = 20);

}  // namespace spreadlab
