// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance            run every criterion
//   acceptance N [M ...]  run the listed criteria only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "spreadlab/analytics.hpp"
#include "spreadlab/cli/app.hpp"
#include "spreadlab/engine.hpp"
#include "spreadlab/estimators.hpp"
#include "spreadlab/parity_chain.hpp"
#include "spreadlab/series.hpp"
#include "spreadlab/tape.hpp"

using namespace spreadlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

double binomial_sigma(double p, std::int64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// Test-side deposition pmf, written out from the mechanism definitions.
double oracle_pmf(double alpha, std::int64_t s, std::int64_t i) {
  if (s == 2) return 1.0;
  return i == 1 ? alpha : (1.0 - alpha) / static_cast<double>(s - 2);
}

double oracle_p_odd(double alpha, std::int64_t s) {
  double odd = 0.0;
  for (std::int64_t i = 1; i <= s - 1; ++i) {
    if ((s - i) % 2 != 0) odd += oracle_pmf(alpha, s, i);
  }
  return odd;
}

Rational oracle_uniform_p_odd(std::int64_t s) {
  Rational odd(0);
  for (std::int64_t i = 1; i <= s - 1; ++i) {
    if ((s - i) % 2 != 0) odd = odd + Rational(1, s - 1);
  }
  return odd;
}

std::vector<double> alpha_grid() {
  std::vector<double> a;
  for (int j = 1; j <= 19; ++j) a.push_back(0.05 * j);
  return a;
}

Outcome analytic_oracle_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  int checks = 0;
  double worst = 0.0;
  for (std::int64_t s = 2; s <= 500; ++s) {
    const auto exact = uniform_parity_exact(s);
    if (!(exact.p_odd == oracle_uniform_p_odd(s)) || !(exact.p_even == Rational(1) - exact.p_odd)) {
      o.require(false, "uniform mismatch at s=" + std::to_string(s));
    }
    ++checks;
    for (double a : alpha_grid()) {
      const double oracle = oracle_p_odd(a, s);
      if (s >= 3) {
        const double closed = nonuniform_parity(a, s).p_odd();
        worst = std::max(worst, std::fabs(closed - oracle));
      }
      const double summed = general_parity(DepositionMechanism::non_uniform(a), s).p_odd();
      worst = std::max(worst, std::fabs(summed - oracle));
      ++checks;
    }
  }
  const double elapsed = seconds_since(t0);
  o.require(worst <= 1e-12, "non-uniform max deviation " + num(worst));
  o.require(elapsed < 5.0, "runtime " + num(elapsed) + " s");
  o.note(std::to_string(checks) + " (s, mechanism) cells, max non-uniform deviation " + num(worst, 3) +
         ", " + num(elapsed, 3) + " s");
  return o;
}

Outcome spot_values() {
  Outcome o;
  const auto u4 = uniform_parity_exact(4);
  o.require(u4.p_odd == Rational(2, 3) && u4.p_even == Rational(1, 3), "uniform_parity(4) != (2/3, 1/3)");
  o.require(std::fabs(uniform_parity(4).p_odd_given_even() - 2.0 / 3.0) == 0.0,
            "uniform_parity(4) double form");
  const auto n5 = nonuniform_parity_exact(Rational(7, 10), 5);
  o.require(n5.p_even == Rational(4, 5) && n5.p_odd == Rational(1, 5),
            "nonuniform_parity(0.7, 5) != (P(e|o)=4/5, P(o|o)=1/5)");
  const auto d5 = nonuniform_parity(0.7, 5);
  o.require(std::fabs(d5.p_even_given_odd() - 0.8) < 1e-15 && std::fabs(d5.p_odd_given_odd() - 0.2) < 1e-15,
            "double form of nonuniform_parity(0.7, 5)");
  for (std::int64_t s = 2; s <= 1000; ++s) {
    if (mean_relative_spread_change(DepositionMechanism::uniform(), s) != 0.5) {
      o.require(false, "uniform mean relative change != 1/2 at s=" + std::to_string(s));
      break;
    }
  }
  o.require(coupling_boundary(0.5) == 3.0, "coupling_boundary(0.5) != 3");
  o.note("P(o|e,4)=2/3 P(e|o,5)=4/5 P(o|o,5)=1/5 (rational); uniform <ds>/s=1/2 for s<=1000; boundary(0.5)=" +
         num(coupling_boundary(0.5)));
  return o;
}

Outcome reduction_identity() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::int64_t s = 3; s <= 500; ++s) {
    const double a = 1.0 / static_cast<double>(s - 1);
    worst = std::max(worst, std::fabs(nonuniform_parity(a, s).p_odd() - uniform_parity(s).p_odd()));
    worst = std::max(worst, std::fabs(nonuniform_parity(a, s).p_even() - uniform_parity(s).p_even()));
  }
  const double elapsed = seconds_since(t0);
  o.require(worst <= 1e-12, "max deviation " + num(worst));
  o.require(elapsed < 1.0, "runtime " + num(elapsed) + " s");
  o.note("max deviation " + num(worst, 3) + ", " + num(elapsed, 3) + " s");
  return o;
}

Outcome simulation_vs_analytics() {
  Outcome o;
  const auto t0 = Clock::now();
  SimConfig cfg;
  cfg.mechanism = DepositionMechanism::non_uniform(0.7);
  const auto traj = run(cfg);
  o.require(!traj.diverged, "run diverged");
  const auto series = to_event_series(traj);
  const auto cells = conditional_parity_frequency(series);
  int tested = 0;
  double worst_z = 0.0;
  for (const auto& [s, c] : cells) {
    if (c.n < 10'000) continue;
    const double expected = s == 2 ? 1.0 : nonuniform_parity(0.7, s).p_odd();
    const double sigma = binomial_sigma(expected, c.n);
    ++tested;
    if (sigma == 0.0) {
      o.require(c.p_odd == expected, "s=" + std::to_string(s) + " forced transition violated");
      continue;
    }
    const double z = (c.p_odd - expected) / sigma;
    worst_z = std::max(worst_z, std::fabs(z));
    o.require(std::fabs(z) <= 3.0, "parity cell s=" + std::to_string(s) + " z=" + num(z));
  }
  o.require(tested >= 2, "fewer than two parity cells with >= 1e4 events");
  const auto alpha = alpha_estimate(series);
  std::string alphas;
  for (std::int64_t s = 3; s <= 8; ++s) {
    const auto it = alpha.by_spread.find(s);
    if (it == alpha.by_spread.end()) {
      o.require(false, "no events at s=" + std::to_string(s));
      continue;
    }
    const double z = (it->second.alpha - 0.7) / binomial_sigma(0.7, it->second.n);
    o.require(std::fabs(z) <= 3.0, "alpha(" + std::to_string(s) + ") z=" + num(z));
    alphas += (alphas.empty() ? "" : " ") + std::to_string(s) + ":" + num(it->second.alpha, 3);
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 60.0, "runtime " + num(elapsed) + " s");
  o.note(std::to_string(tested) + " parity cells, max |z| " + num(worst_z, 3) + "; alpha " + alphas +
         "; " + num(elapsed, 3) + " s");
  return o;
}

Outcome parity_sweep_ordering() {
  Outcome o;
  const auto t0 = Clock::now();
  SweepConfig cfg;  // means {1.5, 2, 3, 4, 6, 8}, uniform and non-uniform(0.7), n = 1e6
  const auto rows = run_parity_sweep(cfg);
  std::map<double, ParityChainResult> uni, non;
  for (const auto& r : rows) (r.mechanism.is_uniform() ? uni : non)[r.mean_spread] = r.result;
  std::string table;
  const ParityChainResult* prev_u = nullptr;
  const ParityChainResult* prev_n = nullptr;
  for (const double m : cfg.means) {
    const auto& u = uni.at(m);
    const auto& n = non.at(m);
    table += (table.empty() ? "" : " ") + num(m, 2) + ":U=" + num(u.odd_fraction) + ",N=" + num(n.odd_fraction);
    o.require(n.odd_fraction >= u.odd_fraction,
              "mean " + num(m, 2) + ": non-uniform " + num(n.odd_fraction) + " < uniform " + num(u.odd_fraction));
    o.require(u.odd_fraction >= 0.5 - 3.0 * u.std_error, "mean " + num(m, 2) + ": uniform below 0.5 - 3 sigma");
    if (prev_u) {
      const double su = std::hypot(u.std_error, prev_u->std_error);
      const double sn = std::hypot(n.std_error, prev_n->std_error);
      o.require(u.odd_fraction <= prev_u->odd_fraction + 3.0 * su, "uniform not decreasing at mean " + num(m, 2));
      o.require(n.odd_fraction <= prev_n->odd_fraction + 3.0 * sn, "non-uniform not decreasing at mean " + num(m, 2));
    }
    prev_u = &u;
    prev_n = &n;
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 30.0, "runtime " + num(elapsed) + " s");
  o.note(table + "; " + num(elapsed, 3) + " s");
  return o;
}

Outcome stability_boundary() {
  Outcome o;
  const auto t0 = Clock::now();
  SimConfig stable;
  stable.mechanism = DepositionMechanism::non_uniform(0.7);
  const auto a = run(stable);
  o.require(!a.diverged, "alpha=0.7 diverged");
  const std::size_t half = a.events.size() / 2;
  double first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    (i < half ? first : second) += static_cast<double>(a.events[i].s_post);
  }
  first /= static_cast<double>(half);
  second /= static_cast<double>(a.events.size() - half);
  const double drift = std::fabs(second - first) / first;
  o.require(drift <= 0.10, "alpha=0.7 half means differ by " + num(100 * drift, 3) + "%");

  SimConfig unstable = stable;
  unstable.mechanism = DepositionMechanism::non_uniform(0.9);
  const auto b = run(unstable);
  o.require(b.diverged, "alpha=0.9 did not diverge within 1e6 events");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 120.0, "runtime " + num(elapsed) + " s");
  o.note("alpha=0.7 halves " + num(first) + "/" + num(second) + " (" + num(100 * drift, 3) +
         "%); alpha=0.9 diverged=" + (b.diverged ? "yes" : "no") + " after " +
         std::to_string(b.events.size()) + " events; " + num(elapsed, 3) + " s");
  return o;
}

Outcome volatility_persistence() {
  Outcome o;
  const auto t0 = Clock::now();
  double tau[2] = {0.0, 0.0};
  for (int m = 0; m < 2; ++m) {
    for (std::uint64_t r = 0; r < 8; ++r) {
      SimConfig cfg;
      cfg.pi = 0.3;
      cfg.seed = replica_seed(1, r);
      if (m == 1) cfg.mechanism = DepositionMechanism::non_uniform(0.7);
      const auto traj = run(cfg);
      o.require(!traj.diverged, "run diverged");
      std::vector<std::int64_t> mids;
      mids.reserve(traj.events.size());
      for (const auto& e : traj.events) mids.push_back(e.mid);
      tau[m] += acf_abs_returns(mids, 200, {5, 200}).decay_constant / 8.0;
    }
  }
  o.require(tau[1] > tau[0], "non-uniform decay constant " + num(tau[1]) + " <= uniform " + num(tau[0]));
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 300.0, "runtime " + num(elapsed) + " s");
  o.note("mean decay constant uniform " + num(tau[0]) + ", non-uniform " + num(tau[1]) + " events; " +
         num(elapsed, 3) + " s");
  return o;
}

Outcome compact_regime() {
  Outcome o;
  const auto t0 = Clock::now();
  SimConfig u;
  u.pi = 0.25;
  SimConfig n = u;
  n.mechanism = DepositionMechanism::non_uniform(0.7);
  const auto tu = run(u);
  const auto tn = run(n);
  o.require(tn.mean_spread() < 1.5, "non-uniform mean spread " + num(tn.mean_spread()));
  const auto pu = spread_pdf(to_event_series(tu));
  const auto pn = spread_pdf(to_event_series(tn));
  std::map<std::int64_t, std::pair<SpreadPdfBin, SpreadPdfBin>> bins;
  for (const auto& [s, b] : pu) bins[s].first = b;
  for (const auto& [s, b] : pn) bins[s].second = b;
  double worst = 0.0;
  std::int64_t worst_s = 0;
  for (const auto& [s, pair] : bins) {
    const double sigma = std::hypot(pair.first.std_error, pair.second.std_error);
    const double diff = std::fabs(pair.first.p - pair.second.p);
    if (sigma == 0.0) {
      o.require(diff == 0.0, "bin s=" + std::to_string(s) + " differs with zero error");
      continue;
    }
    if (diff / sigma > worst) {
      worst = diff / sigma;
      worst_s = s;
    }
  }
  o.require(worst <= 3.0, "bin s=" + std::to_string(worst_s) + " differs by " + num(worst, 3) + " sigma");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 60.0, "runtime " + num(elapsed) + " s");
  o.note("mean spread uniform " + num(tu.mean_spread()) + ", non-uniform " + num(tn.mean_spread()) + "; " +
         std::to_string(bins.size()) + " bins, max |diff| " + num(worst, 3) + " sigma at s=" +
         std::to_string(worst_s) + "; " + num(elapsed, 3) + " s");
  return o;
}

Outcome relaxation_ordering() {
  Outcome o;
  const auto t0 = Clock::now();
  SimConfig u;
  u.pi = 0.3;
  SimConfig n = u;
  n.mechanism = DepositionMechanism::non_uniform(0.7);
  const auto su = to_event_series(run(u));
  const auto sn = to_event_series(run(n));
  const std::int64_t max_lag = 5000;
  const auto lu = first_lag_below(spread_relaxation(su, 2, max_lag), 0.1);
  const auto ln = first_lag_below(spread_relaxation(sn, 2, max_lag), 0.1);
  o.require(lu.has_value() && ln.has_value(), "|G(tau|2)| never fell below 0.1 within " + std::to_string(max_lag));
  if (lu && ln) o.require(*ln > *lu, "non-uniform lag " + std::to_string(*ln) + " <= uniform " + std::to_string(*lu));

  std::string g0;
  double prev = -1e300;
  int used = 0;
  for (std::int64_t d = 1; d <= 3; ++d) {
    RelaxationCurve c;
    try {
      c = spread_relaxation(sn, d, 0);
    } catch (const NoConditioningEvents&) {
      continue;
    }
    if (c.conditioning_events < 100) continue;
    const double v = c.values.at(0);
    o.require(v > prev, "G(0|" + std::to_string(d) + ") not above G(0|" + std::to_string(d - 1) + ")");
    prev = v;
    ++used;
    g0 += (g0.empty() ? "" : " ") + std::to_string(d) + ":" + num(v);
  }
  o.require(used >= 2, "fewer than two deltas with >= 100 conditioning events");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 180.0, "runtime " + num(elapsed) + " s");
  o.note("lag |G(.|2)|<0.1 uniform " + (lu ? std::to_string(*lu) : "none") + ", non-uniform " +
         (ln ? std::to_string(*ln) : "none") + "; non-uniform G(0|d) " + g0 + "; " + num(elapsed, 3) + " s");
  return o;
}

Outcome ingestion_round_trip() {
  Outcome o;
  const auto t0 = Clock::now();
  SimConfig cfg;
  const auto traj = run(cfg);
  std::stringstream tape;
  write_quote_tape(tape, traj, 1, 2);
  const auto parsed = parse_tape(tape);
  const auto ticks = to_ticks(parsed.records, TickSpec{0.01, 1e-6});
  const auto classified = classify_events(ticks.quotes);

  std::map<std::int64_t, const SpreadEvent*> by_t;
  for (const auto& e : classified.series) by_t[e.t] = &e;
  std::int64_t agree = 0, mismatched = 0, mislabels = 0, missing = 0, expected_events = 0;
  for (const auto& r : traj.events) {
    if (r.s_post == r.s_pre) continue;
    ++expected_events;
    const auto it = by_t.find(r.t + 1);  // row 0 of the tape holds the initial quotes
    if (it == by_t.end()) {
      ++missing;
      continue;
    }
    const auto kind = it->second->kind;
    if (r.kind == EventKind::Cancellation) {
      if (kind == OrderKind::MarketOrder) ++mislabels;
      continue;
    }
    const auto want = r.kind == EventKind::LimitOrder ? OrderKind::LimitOrder : OrderKind::MarketOrder;
    (kind == want ? agree : mismatched) += 1;
  }
  o.require(missing == 0, std::to_string(missing) + " spread changes not recovered");
  o.require(mismatched == 0, std::to_string(mismatched) + " order events misclassified");
  o.require(static_cast<std::int64_t>(classified.series.size()) == expected_events, "extra events produced");
  o.require(mislabels == traj.stats.cancellation_events,
            "mislabels " + std::to_string(mislabels) + " != cancellation-at-best count " +
                std::to_string(traj.stats.cancellation_events));

  std::vector<TickQuote> fixture;
  for (const std::int64_t s : {3, 3, 2, 4}) fixture.push_back(TickQuote{100, 100 + s, "", 0});
  const auto fx = classify_events(fixture).series;
  const bool fixture_ok = fx.size() == 2 && fx[0].s_pre == 3 && fx[0].s_post == 2 &&
                          fx[0].kind == OrderKind::LimitOrder && fx[1].s_pre == 2 && fx[1].s_post == 4 &&
                          fx[1].kind == OrderKind::MarketOrder;
  o.require(fixture_ok, "fixture [3,3,2,4] misclassified");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 10.0, "runtime " + num(elapsed) + " s");
  o.note(std::to_string(agree) + " order events agree, " + std::to_string(mislabels) +
         " cancellations labelled MarketOrder (engine count " + std::to_string(traj.stats.cancellation_events) +
         "); fixture ok=" + (fixture_ok ? "yes" : "no") + "; " + num(elapsed, 3) + " s");
  return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream f(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    files[entry.path().filename().string()] = s.str();
  }
  return files;
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("spreadlab_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const std::vector<std::string> args{"--seed", "42", "--threads", "2", "--out", dir.string(), "simulate",
                                      "--mechanism", "nonuniform", "--steps", "200000", "--replicas", "2",
                                      "--quote-tape", "0.01"};
  std::ostringstream out1, err1, out2, err2;
  const int c1 = cli::run(args, out1, err1);
  const auto first = snapshot(dir);
  fs::remove_all(dir);
  const int c2 = cli::run(args, out2, err2);
  const auto second = snapshot(dir);
  fs::remove_all(dir);
  o.require(c1 == 0 && c2 == 0, "exit codes " + std::to_string(c1) + "/" + std::to_string(c2) + " " + err1.str());
  o.require(first.size() >= 3, "expected trajectory, quote and summary files");
  o.require(first == second, "output files differ between runs");
  o.require(out1.str() == out2.str(), "stdout differs between runs");
  std::size_t bytes = 0;
  for (const auto& [name, body] : first) bytes += body.size();
  o.note(std::to_string(first.size()) + " files, " + std::to_string(bytes) + " bytes identical");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"analytic-oracle equivalence", analytic_oracle_equivalence},
      {"analytic spot values", spot_values},
      {"reduction identity", reduction_identity},
      {"simulation vs analytics", simulation_vs_analytics},
      {"parity-sweep ordering", parity_sweep_ordering},
      {"stability boundary", stability_boundary},
      {"volatility persistence", volatility_persistence},
      {"compact regime", compact_regime},
      {"relaxation ordering", relaxation_ordering},
      {"ingestion round-trip", ingestion_round_trip},
      {"determinism", determinism},
  };
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << argv[i] << '\n';
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(n - 1));
  }
  if (selected.empty()) {
    for (std::size_t i = 0; i < criteria.size(); ++i) selected.push_back(i);
  }
  int failures = 0;
  for (const auto i : selected) {
    Outcome result;
    try {
      result = criteria[i].second();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::cout << (result.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": "
              << result.detail << std::endl;
    if (!result.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
