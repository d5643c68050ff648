#include "spreadlab/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace spreadlab {

namespace {

double binomial_se(double p, std::int64_t n) {
  return n > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
}

}  // namespace

double odd_fraction(const SpreadEventSeries& series) {
  if (series.empty()) throw EmptySeries();
  std::int64_t odd = 0;
  for (const auto& e : series) odd += e.s_post & 1;
  return static_cast<double>(odd) / static_cast<double>(series.size());
}

std::map<std::int64_t, ParityCell> conditional_parity_frequency(const SpreadEventSeries& series,
                                                                std::int64_t min_count) {
  if (series.empty()) throw EmptySeries();
  std::map<std::int64_t, ParityCell> cells;
  for (const auto& e : series) {
    if (e.s_post >= e.s_pre) continue;
    auto& c = cells[e.s_pre];
    ++c.n;
    c.n_odd += e.s_post & 1;
  }
  for (auto& [s, c] : cells) {
    c.p_odd = static_cast<double>(c.n_odd) / static_cast<double>(c.n);
    c.p_even = 1.0 - c.p_odd;
    c.std_error = binomial_se(c.p_odd, c.n);
    c.low_statistics = c.n < min_count;
  }
  return cells;
}

DeltaSDistribution delta_s_distribution(const SpreadEventSeries& series, std::int64_t s) {
  DeltaSDistribution d;
  d.s = s;
  for (const auto& e : series) {
    if (e.s_pre != s || e.s_post >= e.s_pre) continue;
    ++d.counts[e.s_pre - e.s_post];
    ++d.total;
  }
  if (d.total == 0) {
    throw NoSuchSpread("no spread-decreasing events at s = " + std::to_string(s));
  }
  for (const auto& [ds, n] : d.counts) {
    d.frequency[ds] = static_cast<double>(n) / static_cast<double>(d.total);
  }
  return d;
}

AlphaEstimate alpha_estimate(const SpreadEventSeries& series) {
  if (series.empty()) throw EmptySeries();
  AlphaEstimate out;
  for (const auto& e : series) {
    if (e.s_pre < 3 || e.s_post >= e.s_pre) continue;
    auto& c = out.by_spread[e.s_pre];
    ++c.n;
    if (e.s_pre - e.s_post == 1) ++c.adjacent;
  }
  if (out.by_spread.empty()) throw EmptySeries("no spread-decreasing events with s >= 3");
  std::int64_t adjacent = 0;
  for (auto& [s, c] : out.by_spread) {
    c.alpha = static_cast<double>(c.adjacent) / static_cast<double>(c.n);
    c.std_error = binomial_se(c.alpha, c.n);
    out.total += c.n;
    adjacent += c.adjacent;
  }
  out.weighted_alpha = static_cast<double>(adjacent) / static_cast<double>(out.total);
  return out;
}

AcfResult acf_abs_returns(std::span<const std::int64_t> mids, std::int64_t max_lag,
                          AcfFitWindow window) {
  if (max_lag < 1) throw DomainError("max_lag must be positive");
  if (static_cast<std::int64_t>(mids.size()) <= 10 * max_lag + 1) {
    throw SeriesTooShort("need more than 10 * max_lag returns (have " +
                         std::to_string(mids.size() > 0 ? mids.size() - 1 : 0) + ")");
  }
  const std::size_t n = mids.size() - 1;
  std::vector<double> x(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(std::llabs(mids[i + 1] - mids[i]));
    mean += x[i];
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (auto& v : x) {
    v -= mean;
    var += v * v;
  }
  if (var == 0.0) throw ZeroVariance("absolute returns are constant");

  AcfResult out;
  out.n_returns = static_cast<std::int64_t>(n);
  out.acf.resize(static_cast<std::size_t>(max_lag));
  for (std::int64_t lag = 1; lag <= max_lag; ++lag) {
    double c = 0.0;
    const auto l = static_cast<std::size_t>(lag);
    for (std::size_t i = 0; i + l < n; ++i) c += x[i] * x[i + l];
    out.acf[l - 1] = c / var;
  }

  const std::int64_t lo = std::max<std::int64_t>(1, window.min_lag);
  const std::int64_t hi = window.max_lag > 0 ? std::min(window.max_lag, max_lag) : max_lag;
  const double floor = 3.0 / std::sqrt(static_cast<double>(n));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::int64_t m = 0;
  for (std::int64_t lag = lo; lag <= hi; ++lag) {
    const double a = out.acf[static_cast<std::size_t>(lag - 1)];
    if (a <= floor) continue;
    const double xl = static_cast<double>(lag);
    const double yl = std::log(a);
    sx += xl;
    sy += yl;
    sxx += xl * xl;
    sxy += xl * yl;
    ++m;
  }
  out.fit_points = m;
  if (m < 2) return out;
  const double md = static_cast<double>(m);
  const double slope = (md * sxy - sx * sy) / (md * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / md;
  out.amplitude = std::exp(intercept);
  out.decay_constant = slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();
  return out;
}

RelaxationCurve spread_relaxation(const SpreadEventSeries& series, std::int64_t delta,
                                  std::int64_t max_lag) {
  if (delta == 0) throw DomainError("delta must be non-zero");
  if (max_lag < 0) throw DomainError("max_lag must be >= 0");
  if (series.empty()) throw EmptySeries();
  const auto s = series.spreads();
  const std::size_t n = s.size();

  RelaxationCurve curve;
  curve.delta = delta;
  double total = 0.0;
  for (auto v : s) total += static_cast<double>(v);
  curve.mean_spread = total / static_cast<double>(n);

  std::vector<double> sums(static_cast<std::size_t>(max_lag) + 1, 0.0);
  std::vector<std::int64_t> counts(sums.size(), 0);
  for (std::size_t t = 1; t < n; ++t) {
    if (s[t] - s[t - 1] != delta) continue;
    ++curve.conditioning_events;
    for (std::size_t tau = 0; tau < sums.size() && t + tau < n; ++tau) {
      sums[tau] += static_cast<double>(s[t + tau]);
      ++counts[tau];
    }
  }
  if (curve.conditioning_events == 0) {
    throw NoConditioningEvents("no events with s(t) - s(t-1) = " + std::to_string(delta));
  }
  for (std::size_t tau = 0; tau < sums.size(); ++tau) {
    if (counts[tau] == 0) continue;
    const auto lag = static_cast<std::int64_t>(tau);
    curve.counts[lag] = counts[tau];
    curve.values[lag] = sums[tau] / static_cast<double>(counts[tau]) - curve.mean_spread;
  }
  return curve;
}

std::optional<std::int64_t> first_lag_below(const RelaxationCurve& curve, double threshold) {
  for (const auto& [lag, g] : curve.values) {
    if (std::fabs(g) < threshold) return lag;
  }
  return std::nullopt;
}

std::map<std::int64_t, SpreadPdfBin> spread_pdf(const SpreadEventSeries& series,
                                               std::int64_t batches) {
  if (series.empty()) throw EmptySeries();
  if (batches < 2) throw DomainError("need at least two batches");
  const auto n = static_cast<std::int64_t>(series.size());
  if (n < batches) throw SeriesTooShort("fewer records than batches");

  std::map<std::int64_t, SpreadPdfBin> bins;
  std::map<std::int64_t, std::vector<std::int64_t>> per_batch;
  const std::int64_t batch_len = n / batches;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto s = series[static_cast<std::size_t>(i)].s_post;
    ++bins[s].count;
    const std::int64_t b = std::min(i / batch_len, batches - 1);
    auto& v = per_batch[s];
    if (v.empty()) v.assign(static_cast<std::size_t>(batches), 0);
    ++v[static_cast<std::size_t>(b)];
  }
  for (auto& [s, bin] : bins) {
    bin.p = static_cast<double>(bin.count) / static_cast<double>(n);
    const auto& v = per_batch[s];
    double mean = 0.0;
    std::vector<double> f(v.size());
    for (std::size_t b = 0; b < v.size(); ++b) {
      const std::int64_t len = b + 1 == v.size() ? n - batch_len * (batches - 1) : batch_len;
      f[b] = static_cast<double>(v[b]) / static_cast<double>(len);
      mean += f[b];
    }
    mean /= static_cast<double>(f.size());
    double ss = 0.0;
    for (double x : f) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(f.size() - 1);
    bin.std_error = std::sqrt(var / static_cast<double>(f.size()));
  }
  return bins;
}

}  // namespace spreadlab
