#include "spreadlab/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "spreadlab/analytics.hpp"
#include "spreadlab/csv.hpp"
#include "spreadlab/engine.hpp"
#include "spreadlab/estimators.hpp"
#include "spreadlab/parity_chain.hpp"
#include "spreadlab/series.hpp"
#include "spreadlab/tape.hpp"

namespace spreadlab::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  unsigned threads = 1;
};

struct SimulateOptions {
  SimConfig config;
  std::string mechanism = "uniform";
  double alpha = 0.7;
  int replicas = 1;
  std::string tape_tick;  // empty: no quote tape
};

struct SweepOptions {
  std::vector<double> means{1.5, 2.0, 3.0, 4.0, 6.0, 8.0};
  std::vector<std::string> mechanisms{"uniform", "nonuniform"};
  double alpha = 0.7;
  std::int64_t samples = 1'000'000;
  std::string marginal = "geometric";
};

struct AnalyzeOptions {
  std::string input;
  bool all = false;
  bool odd = false;
  bool parity = false;
  bool delta_s = false;
  std::vector<std::int64_t> delta_s_spreads;
  bool alpha = false;
  bool acf = false;
  std::int64_t acf_max_lag = 200;
  std::int64_t acf_fit_min = 5;
  std::int64_t acf_fit_max = 0;
  bool relax = false;
  std::vector<std::int64_t> relax_deltas;
  std::int64_t relax_max_lag = 300;
  bool pdf = false;
  std::int64_t pdf_batches = 20;
  std::int64_t min_count = 50;
};

struct IngestOptions {
  std::string input;
  double tick_size = 0.01;
  double tolerance = 1e-6;
  bool lenient = false;
  bool with_mid = false;
};

// Output files are written in one piece once all work is done.
class OutputDir {
public:
  OutputDir(const std::string& dir, std::string header) : dir_(dir), header_(std::move(header)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw IoError("cannot create output directory '" + dir + "'");
    }
  }

  const std::string& header() const noexcept { return header_; }

  fs::path write(const std::string& name, const std::string& body) const {
    const fs::path path = dir_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << header_ << body;
    f.close();
    if (!f) throw IoError("failed writing '" + path.string() + "'");
    return path;
  }

private:
  fs::path dir_;
  std::string header_;
};

std::ifstream open_input(const std::string& path) {
  if (path.empty()) throw ConfigError("--input is required");
  if (!fs::is_regular_file(path)) throw IoError("input file '" + path + "' does not exist");
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  return f;
}

DepositionMechanism make_mechanism(const std::string& name, double alpha) {
  if (name == "uniform") return DepositionMechanism::uniform();
  if (name == "nonuniform") {
    try {
      return DepositionMechanism::non_uniform(alpha);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown mechanism '" + name + "'");
}

std::string fmt(double v) { return csv::format_double(v); }

std::string file_header(const std::string& command, const std::string& effective) {
  return csv::comment_block("spreadlab " + command + "\neffective configuration:\n" + effective);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <class Fn>
void fan_out(std::size_t n, unsigned threads, Fn fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int cmd_simulate(const SimulateOptions& opt, const CommonOptions& common,
                 const std::string& effective, std::ostream& out, std::ostream& err) {
  SimConfig base = opt.config;
  base.mechanism = make_mechanism(opt.mechanism, opt.alpha);
  base.seed = common.seed;
  base.validate();
  if (opt.replicas < 1) throw ConfigError("replicas must be >= 1");
  DecimalTick tick;
  if (!opt.tape_tick.empty()) tick = parse_decimal_tick(opt.tape_tick);

  const auto n = static_cast<std::size_t>(opt.replicas);
  std::vector<Trajectory> runs(n);
  fan_out(n, common.threads, [&](std::size_t i) {
    SimConfig c = base;
    c.seed = replica_seed(common.seed, i);
    runs[i] = run(c);
  });

  OutputDir dir(common.out_dir, file_header("simulate", effective));
  std::ostringstream summary;
  summary << "replica,seed,mechanism,alpha,pi,events,mean_spread,odd_fraction,diverged,max_spread,"
             "cancellation_at_best_rate,market_orders,limit_orders,cancellation_events\n";
  bool any_diverged = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& tr = runs[i];
    const std::string suffix = n == 1 ? "" : "_" + std::to_string(i);
    std::ostringstream body;
    write_trajectory_csv(body, tr);
    dir.write("trajectory" + suffix + ".csv", body.str());
    if (!opt.tape_tick.empty()) {
      std::ostringstream tape;
      write_quote_tape(tape, tr, tick.numerator, tick.decimals);
      dir.write("quotes" + suffix + ".csv", tape.str());
    }
    const auto& s = tr.stats;
    summary << i << ',' << tr.config.seed << ',' << tr.config.mechanism.name() << ','
            << fmt(tr.config.mechanism.alpha()) << ',' << fmt(tr.config.pi) << ','
            << tr.events.size() << ',' << fmt(tr.mean_spread()) << ',' << fmt(tr.odd_fraction())
            << ',' << (tr.diverged ? "true" : "false") << ',' << tr.max_spread << ','
            << fmt(s.cancellation_at_best_rate()) << ',' << s.market_orders << ','
            << s.limit_orders << ',' << s.cancellation_events << '\n';

    out << "replica " << i << ": events=" << tr.events.size()
        << " mean_spread=" << fmt(tr.mean_spread()) << " odd_fraction=" << fmt(tr.odd_fraction())
        << " diverged=" << (tr.diverged ? "yes" : "no")
        << " cancellation_at_best_rate=" << fmt(s.cancellation_at_best_rate()) << '\n';
    if (tr.diverged) {
      any_diverged = true;
      err << "Divergence: replica " << i << " spread reached " << tr.max_spread
          << " ticks, above the ceiling of " << base.effective_ceiling() << " after "
          << tr.events.size() << " events\n";
    }
  }
  dir.write("summary.csv", summary.str());
  return any_diverged ? kDiverged : kOk;
}

int cmd_parity_sweep(const SweepOptions& opt, const CommonOptions& common,
                     const std::string& effective, std::ostream& out) {
  SweepConfig cfg;
  cfg.means = opt.means;
  cfg.mechanisms.clear();
  for (const auto& m : opt.mechanisms) cfg.mechanisms.push_back(make_mechanism(m, opt.alpha));
  if (opt.samples < 1) throw ConfigError("samples must be >= 1");
  cfg.n_samples = opt.samples;
  cfg.marginal = parse_spread_marginal(opt.marginal);
  cfg.seed = common.seed;
  cfg.threads = common.threads;
  for (double m : cfg.means) {
    if (!(m > 1.0)) throw ConfigError("mean spreads must be > 1 (got " + fmt(m) + ")");
  }
  const auto rows = run_parity_sweep(cfg);

  std::ostringstream body;
  write_sweep_csv(body, rows);
  OutputDir dir(common.out_dir, file_header("parity-sweep", effective));
  dir.write("parity_sweep.csv", body.str());
  for (const auto& r : rows) {
    out << "mean=" << fmt(r.mean_spread) << ' ' << r.mechanism.name()
        << " odd_fraction=" << fmt(r.result.odd_fraction) << " +/- " << fmt(r.result.std_error)
        << " transitions=" << r.result.n_transitions << " excluded=" << r.result.n_excluded << '\n';
  }
  return kOk;
}

std::string estimator_line(const std::string& name, const std::string& params) {
  return "# estimator=" + name + (params.empty() ? "" : " " + params) + '\n';
}

int cmd_analyze(const AnalyzeOptions& opt, bool relax_given, const CommonOptions& common,
                const std::string& effective, std::ostream& out) {
  const bool all = opt.all;
  const bool any = all || opt.odd || opt.parity || opt.delta_s || opt.alpha || opt.acf ||
                   opt.relax || relax_given || opt.pdf;
  if (!any) throw ConfigError("no estimator selected; pass --all or one of the estimator flags");

  auto in = open_input(opt.input);
  const SpreadEventSeries series = read_series_csv(in);
  if (series.empty()) throw EmptySeries();

  std::vector<std::pair<std::string, std::string>> files;

  if (all || opt.odd) {
    const double f = odd_fraction(series);
    std::string body = estimator_line("odd_fraction", "n=" + std::to_string(series.size()));
    body += "odd_fraction,n\n" + fmt(f) + ',' + std::to_string(series.size()) + '\n';
    files.emplace_back("odd_fraction.csv", body);
    out << "odd_fraction=" << fmt(f) << " n=" << series.size() << '\n';
  }

  if (all || opt.parity) {
    const auto cells = conditional_parity_frequency(series, opt.min_count);
    std::int64_t n = 0;
    for (const auto& [s, c] : cells) n += c.n;
    std::string body = estimator_line("conditional_parity",
                                      "min_count=" + std::to_string(opt.min_count) +
                                          " n=" + std::to_string(n));
    body += "s,from_parity,n,p_odd,p_even,std_error,low_statistics\n";
    for (const auto& [s, c] : cells) {
      body += std::to_string(s) + ',' + (s % 2 ? "odd" : "even") + ',' + std::to_string(c.n) + ',' +
              fmt(c.p_odd) + ',' + fmt(c.p_even) + ',' + fmt(c.std_error) + ',' +
              (c.low_statistics ? "true" : "false") + '\n';
    }
    files.emplace_back("conditional_parity.csv", body);
    out << "conditional_parity: " << cells.size() << " spread cells\n";
  }

  if (all || opt.delta_s || !opt.delta_s_spreads.empty()) {
    std::vector<std::int64_t> spreads = opt.delta_s_spreads;
    const bool explicit_spreads = !spreads.empty();
    if (!explicit_spreads) {
      for (const auto& [s, c] : conditional_parity_frequency(series, opt.min_count)) {
        spreads.push_back(s);
      }
    }
    std::string rows;
    std::int64_t n = 0;
    for (const auto s : spreads) {
      const auto d = delta_s_distribution(series, s);
      n += d.total;
      for (const auto& [ds, count] : d.counts) {
        rows += std::to_string(s) + ',' + std::to_string(ds) + ',' + std::to_string(count) + ',' +
                fmt(d.frequency.at(ds)) + '\n';
      }
    }
    std::string list;
    for (const auto s : spreads) list += (list.empty() ? "" : ";") + std::to_string(s);
    std::string body = estimator_line("delta_s_distribution",
                                      "spreads=" + (list.empty() ? "none" : list) +
                                          " n=" + std::to_string(n));
    body += "s,delta_s,count,frequency\n" + rows;
    files.emplace_back("delta_s.csv", body);
    out << "delta_s_distribution: " << spreads.size() << " spreads, n=" << n << '\n';
  }

  if (all || opt.alpha) {
    const auto a = alpha_estimate(series);
    std::string body = estimator_line("alpha_estimate", "weighted_alpha=" + fmt(a.weighted_alpha) +
                                                            " n=" + std::to_string(a.total));
    body += "s,n,alpha,std_error\n";
    for (const auto& [s, c] : a.by_spread) {
      body += std::to_string(s) + ',' + std::to_string(c.n) + ',' + fmt(c.alpha) + ',' +
              fmt(c.std_error) + '\n';
    }
    const double se = std::sqrt(a.weighted_alpha * (1.0 - a.weighted_alpha) /
                                static_cast<double>(a.total));
    body += "all," + std::to_string(a.total) + ',' + fmt(a.weighted_alpha) + ',' + fmt(se) + '\n';
    files.emplace_back("alpha.csv", body);
    out << "alpha_estimate: weighted=" << fmt(a.weighted_alpha) << " n=" << a.total << '\n';
  }

  if (all || opt.acf) {
    const std::string params = "max_lag=" + std::to_string(opt.acf_max_lag) +
                               " fit_min_lag=" + std::to_string(opt.acf_fit_min) +
                               " fit_max_lag=" + std::to_string(opt.acf_fit_max);
    if (!series.has_mids()) {
      if (!all) throw DomainError("series has no mid prices; the ACF needs a trajectory or an event file with a mid column");
      files.emplace_back("acf.csv", estimator_line("acf_abs_returns", params + " status=skipped reason=no_mid_prices n=0") +
                                        "lag,acf\n");
      out << "acf_abs_returns: skipped, series has no mid prices\n";
    } else {
      const auto mids = series.mids();
      const auto r = acf_abs_returns(mids, opt.acf_max_lag, {opt.acf_fit_min, opt.acf_fit_max});
      std::string body = estimator_line(
          "acf_abs_returns", params + " decay_constant=" + fmt(r.decay_constant) +
                                 " amplitude=" + fmt(r.amplitude) +
                                 " fit_points=" + std::to_string(r.fit_points) +
                                 " n=" + std::to_string(r.n_returns));
      body += "lag,acf\n";
      for (std::size_t j = 0; j < r.acf.size(); ++j) {
        body += std::to_string(j + 1) + ',' + fmt(r.acf[j]) + '\n';
      }
      files.emplace_back("acf.csv", body);
      out << "acf_abs_returns: decay_constant=" << fmt(r.decay_constant)
          << " n=" << r.n_returns << '\n';
    }
  }

  if (all || opt.relax || relax_given) {
    std::vector<std::int64_t> deltas = opt.relax_deltas;
    if (deltas.empty()) deltas = {1, 2, 3};
    std::string rows;
    std::string used;
    std::string skipped;
    double mean = 0.0;
    for (const auto d : deltas) {
      RelaxationCurve c;
      try {
        c = spread_relaxation(series, d, opt.relax_max_lag);
      } catch (const NoConditioningEvents&) {
        if (relax_given) throw;
        skipped += (skipped.empty() ? "" : ";") + std::to_string(d);
        continue;
      }
      mean = c.mean_spread;
      used += (used.empty() ? "" : ";") + std::to_string(d) + ":" +
              std::to_string(c.conditioning_events);
      for (const auto& [lag, g] : c.values) {
        rows += std::to_string(d) + ',' + std::to_string(lag) + ',' + fmt(g) + ',' +
                std::to_string(c.counts.at(lag)) + '\n';
      }
    }
    std::string params = "max_lag=" + std::to_string(opt.relax_max_lag) +
                         " mean_spread=" + fmt(mean) + " conditioning=" +
                         (used.empty() ? "none" : used);
    if (!skipped.empty()) params += " skipped_deltas=" + skipped;
    std::string body = estimator_line("spread_relaxation", params + " n=" + std::to_string(series.size()));
    body += "delta,lag,g,count\n" + rows;
    files.emplace_back("relaxation.csv", body);
    out << "spread_relaxation: conditioning " << (used.empty() ? "none" : used) << '\n';
  }

  if (opt.pdf) {
    const auto bins = spread_pdf(series, opt.pdf_batches);
    std::string body = estimator_line("spread_pdf", "batches=" + std::to_string(opt.pdf_batches) +
                                                        " n=" + std::to_string(series.size()));
    body += "s,count,p,std_error\n";
    for (const auto& [s, b] : bins) {
      body += std::to_string(s) + ',' + std::to_string(b.count) + ',' + fmt(b.p) + ',' +
              fmt(b.std_error) + '\n';
    }
    files.emplace_back("spread_pdf.csv", body);
  }

  OutputDir dir(common.out_dir, file_header("analyze", effective));
  for (const auto& [name, body] : files) dir.write(name, body);
  return kOk;
}

int cmd_ingest(const IngestOptions& opt, const CommonOptions& common, const std::string& effective,
               std::ostream& out, std::ostream& err) {
  TickSpec spec{opt.tick_size, opt.tolerance};
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  auto in = open_input(opt.input);
  TapeFormat format;
  format.lenient = opt.lenient;
  const ParsedTape tape = parse_tape(in, format);
  const TickSeries ticks = to_ticks(tape.records, spec, opt.lenient);
  const ClassifiedTape classified = classify_events(ticks.quotes);
  const auto& sum = classified.summary;

  std::ostringstream meta;
  meta << "rows_read=" << tape.rows_read << '\n'
       << "rows_rejected=" << tape.rejected.size() << '\n'
       << "off_grid_rows=" << ticks.off_grid_lines.size() << '\n'
       << "quotes=" << sum.quotes << '\n'
       << "days=" << sum.days << '\n'
       << "unchanged_spread_pairs=" << sum.unchanged << '\n'
       << "market_orders=" << sum.market_orders << '\n'
       << "limit_orders=" << sum.limit_orders << '\n'
       << "caveat=" << kClassificationCaveat << '\n';
  for (const auto& r : tape.rejected) meta << "rejected line " << r.line << ": " << r.reason << '\n';
  for (const auto l : ticks.off_grid_lines) meta << "off-grid line " << l << '\n';

  std::ostringstream body;
  body << csv::comment_block(meta.str());
  write_event_csv(body, classified.series, opt.with_mid);
  OutputDir dir(common.out_dir, file_header("ingest", effective));
  dir.write("events.csv", body.str());

  out << csv::comment_block(meta.str());
  if (!tape.rejected.empty() || !ticks.off_grid_lines.empty()) {
    err << "warning: skipped " << tape.rejected.size() << " malformed and "
        << ticks.off_grid_lines.size() << " off-grid rows\n";
  }
  return kOk;
}

std::string error_name(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const IoError*>(&e)) return "IoError";
  if (dynamic_cast<const OffGridPrice*>(&e)) return "OffGridPrice";
  if (dynamic_cast<const OrderingError*>(&e)) return "OrderingError";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const EmptySeries*>(&e)) return "EmptySeries";
  if (dynamic_cast<const NoSuchSpread*>(&e)) return "NoSuchSpread";
  if (dynamic_cast<const NoConditioningEvents*>(&e)) return "NoConditioningEvents";
  if (dynamic_cast<const SeriesTooShort*>(&e)) return "SeriesTooShort";
  if (dynamic_cast<const ZeroVariance*>(&e)) return "ZeroVariance";
  if (dynamic_cast<const InsufficientSamples*>(&e)) return "InsufficientSamples";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  return "Error";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kUsage;
  if (dynamic_cast<const IoError*>(&e)) return kIoError;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const OrderingError*>(&e) ||
      dynamic_cast<const OffGridPrice*>(&e)) {
    return kParseError;
  }
  return kFailure;
}

}  // namespace

DecimalTick parse_decimal_tick(const std::string& text) {
  const auto t = csv::trim(text);
  DecimalTick tick;
  std::string digits;
  bool dot = false;
  for (const char ch : t) {
    if (ch == '.' && !dot) {
      dot = true;
    } else if (ch >= '0' && ch <= '9') {
      digits += ch;
      if (dot) ++tick.decimals;
    } else {
      throw ConfigError("tick size '" + text + "' is not a plain decimal");
    }
  }
  if (digits.empty() || tick.decimals > 12) throw ConfigError("bad tick size '" + text + "'");
  tick.numerator = std::stoll(digits);
  if (tick.numerator < 1) throw ConfigError("tick size must be positive");
  return tick;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Order book spread simulator, parity Monte Carlo and spread estimators",
               "spreadlab"};
  app.set_config("--config", "", "INI config file with one [section] per subcommand; flags win");
  app.require_subcommand(1, 1);
  app.fallthrough();

  CommonOptions common;
  app.add_option("--seed", common.seed, "Master random seed")->capture_default_str();
  app.add_option("--out", common.out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads for replicas / virtual stocks")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run the order book model");
  simulate->configurable();
  simulate->add_option("--pi", sim.config.pi, "Market order probability")->default_str(fmt(sim.config.pi));
  simulate->add_option("--k", sim.config.k, "Limit placement range multiplier")->default_str(fmt(sim.config.k));
  simulate->add_option("--mechanism", sim.mechanism, "Deposition mechanism")
      ->check(CLI::IsMember({"uniform", "nonuniform"}))
      ->capture_default_str();
  simulate->add_option("--alpha", sim.alpha, "Adjacent-quote mass for the nonuniform mechanism")
      ->default_str(fmt(sim.alpha));
  simulate->add_option("--cancel-rate", sim.config.cancel_rate, "Per-unit cancellation probability per event")
      ->default_str(fmt(sim.config.cancel_rate));
  simulate->add_option("--steps", sim.config.steps, "Recorded order events")->capture_default_str();
  simulate->add_option("--warmup", sim.config.warmup, "Discarded order events")->capture_default_str();
  simulate->add_option("--window", sim.config.window, "Price window width in ticks")->capture_default_str();
  simulate->add_option("--initial-depth", sim.config.initial_depth, "Seeded levels per side")
      ->capture_default_str();
  simulate->add_option("--initial-bid", sim.config.initial_bid, "Initial best bid in ticks")
      ->capture_default_str();
  simulate->add_option("--divergence-ceiling", sim.config.divergence_ceiling,
                       "Spread that stops the run (0: window / 10)")
      ->capture_default_str();
  simulate->add_option("--replicas", sim.replicas, "Independent runs")->capture_default_str();
  simulate->add_option("--quote-tape", sim.tape_tick,
                       "Also write a best-quote tape with this decimal tick size, e.g. 0.01");

  SweepOptions sweep;
  auto* parity = app.add_subcommand("parity-sweep", "Parity Monte Carlo over virtual stocks");
  parity->configurable();
  parity->add_option("--means", sweep.means, "Mean spreads")->delimiter(',')->capture_default_str();
  parity->add_option("--mechanisms", sweep.mechanisms, "uniform and/or nonuniform")
      ->delimiter(',')
      ->check(CLI::IsMember({"uniform", "nonuniform"}))
      ->capture_default_str();
  parity->add_option("--alpha", sweep.alpha, "Adjacent-quote mass for nonuniform")->default_str(fmt(sweep.alpha));
  parity->add_option("--samples", sweep.samples, "Spreads drawn per virtual stock")->capture_default_str();
  parity->add_option("--marginal", sweep.marginal, "Spread marginal: geometric or poisson")
      ->check(CLI::IsMember({"geometric", "poisson"}))
      ->capture_default_str();

  AnalyzeOptions an;
  auto* analyze = app.add_subcommand("analyze", "Run estimators on an event or trajectory CSV");
  analyze->configurable();
  analyze->add_option("--input", an.input, "Event CSV (t,s_pre,s_post,kind[,mid]) or trajectory CSV");
  analyze->add_flag("--all", an.all, "Odd fraction, parity, delta-s, alpha, ACF and relaxation");
  analyze->add_flag("--odd-fraction", an.odd, "Fraction of odd post-event spreads");
  analyze->add_flag("--parity", an.parity, "Conditional parity frequencies");
  analyze->add_flag("--delta-s", an.delta_s, "Spread reduction histograms");
  analyze->add_option("--delta-s-spread", an.delta_s_spreads, "Pre-event spreads for --delta-s")
      ->delimiter(',');
  analyze->add_flag("--alpha", an.alpha, "Adjacent-quote frequency per spread");
  analyze->add_flag("--acf", an.acf, "Autocorrelation of absolute mid returns");
  analyze->add_option("--acf-max-lag", an.acf_max_lag, "Largest ACF lag")->capture_default_str();
  analyze->add_option("--acf-fit-min", an.acf_fit_min, "First lag of the exponential fit")
      ->capture_default_str();
  analyze->add_option("--acf-fit-max", an.acf_fit_max, "Last lag of the fit (0: max lag)")
      ->capture_default_str();
  analyze->add_flag("--relax", an.relax, "Spread relaxation G(tau|delta) for deltas 1,2,3");
  auto* relax_delta = analyze->add_option("--relax-delta", an.relax_deltas,
                                          "Spread jumps to condition on")
                          ->delimiter(',');
  analyze->add_option("--relax-max-lag", an.relax_max_lag, "Largest relaxation lag")
      ->capture_default_str();
  analyze->add_flag("--pdf", an.pdf, "Spread pmf with batch-means errors");
  analyze->add_option("--pdf-batches", an.pdf_batches, "Batches for --pdf errors")->capture_default_str();
  analyze->add_option("--min-count", an.min_count, "Low-statistics threshold for parity cells")
      ->capture_default_str();

  IngestOptions ing;
  auto* ingest = app.add_subcommand("ingest", "Classify a best-quote tape into spread events");
  ingest->configurable();
  ingest->add_option("--input", ing.input, "Quote CSV: timestamp,bid,ask[,day]");
  ingest->add_option("--tick-size", ing.tick_size, "Tick size in price units")->default_str(fmt(ing.tick_size));
  ingest->add_option("--tolerance", ing.tolerance, "Off-grid tolerance in price units")
      ->default_str(fmt(ing.tolerance));
  ingest->add_flag("--lenient", ing.lenient, "Skip malformed and off-grid rows instead of failing");
  ingest->add_flag("--with-mid", ing.with_mid, "Append a mid column (half ticks) to the event CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::FileError& e) {
    err << "IoError: " << e.what() << '\n';
    return kIoError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  // Keep the common options and the selected subcommand's section only.
  std::string effective;
  {
    std::istringstream all(app.config_to_str(true, false));
    std::string line;
    while (std::getline(all, line)) {
      bool other = false;
      for (auto* sub : {simulate, parity, analyze, ingest}) {
        if (!sub->parsed() && line.starts_with(sub->get_name() + ".")) other = true;
      }
      if (!other) effective += line + '\n';
    }
  }
  out << csv::comment_block("effective configuration (flags > config file > defaults):\n" +
                            effective);

  try {
    if (simulate->parsed()) return cmd_simulate(sim, common, effective, out, err);
    if (parity->parsed()) return cmd_parity_sweep(sweep, common, effective, out);
    if (analyze->parsed()) {
      return cmd_analyze(an, relax_delta->count() > 0, common, effective, out);
    }
    if (ingest->parsed()) return cmd_ingest(ing, common, effective, out, err);
  } catch (const Error& e) {
    err << error_name(e) << ": " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace spreadlab::cli
