#include "spreadlab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "spreadlab/csv.hpp"

namespace spreadlab {

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::MarketOrder: return "MarketOrder";
    case EventKind::LimitOrder: return "LimitOrder";
    case EventKind::Cancellation: return "Cancellation";
  }
  return "?";
}

void SimConfig::validate() const {
  if (!(pi > 0.0 && pi < 1.0)) throw ConfigError("pi must lie in (0, 1)");
  if (!(k > 1.0)) throw ConfigError("k must be > 1");
  if (!(cancel_rate >= 0.0 && cancel_rate < 1.0)) throw ConfigError("cancel_rate must lie in [0, 1)");
  if (steps < 1) throw ConfigError("steps must be positive");
  if (warmup < 0 || warmup >= steps) throw ConfigError("warmup must satisfy 0 <= warmup < steps");
  if (initial_depth < 1) throw ConfigError("initial_depth must be >= 1 (a side cannot start empty)");
  if (window < 16) throw ConfigError("window must be at least 16 ticks");
  if (2 * initial_depth + 2 > window / 2) throw ConfigError("initial_depth does not fit in the window");
  if (initial_bid - window / 2 < 1) throw ConfigError("initial_bid too small for the window");
  if (divergence_ceiling < 0) throw ConfigError("divergence_ceiling must be >= 0");
  if (effective_ceiling() > window / 2) throw ConfigError("divergence_ceiling exceeds window / 2");
}

double Trajectory::mean_spread() const noexcept {
  if (events.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : events) sum += static_cast<double>(e.s_post);
  return sum / static_cast<double>(events.size());
}

double Trajectory::odd_fraction() const noexcept {
  if (events.empty()) return 0.0;
  std::size_t odd = 0;
  for (const auto& e : events) odd += static_cast<std::size_t>(e.s_post & 1);
  return static_cast<double>(odd) / static_cast<double>(events.size());
}

OrderBook init_book(const SimConfig& config) {
  config.validate();
  const std::int64_t bid = config.initial_bid;
  OrderBook book(bid - config.window / 2 + 1, config.window);
  for (std::int64_t d = 0; d < config.initial_depth; ++d) {
    book.side(Side::Buy).add(TickPrice(bid - d));
    book.side(Side::Sell).add(TickPrice(bid + 1 + d));
  }
  return book;
}

Simulator::Simulator(SimConfig config)
    : config_(config), book_(init_book(config_)), rng_(config_.seed) {
  ref_bid_ = book_.best_bid().value;
  ref_ask_ = book_.best_ask().value;
}

void Simulator::refresh_reference() noexcept {
  if (!book_.bids().empty()) ref_bid_ = book_.bids().best().value;
  if (!book_.asks().empty()) ref_ask_ = book_.asks().best().value;
  // Only possible when one side is empty and the other re-forms through
  // its reference; keep the pair ordered.
  if (ref_ask_ <= ref_bid_) {
    if (book_.asks().empty()) ref_ask_ = ref_bid_ + 1;
    else ref_bid_ = ref_ask_ - 1;
  }
}

EventRecord Simulator::record(EventKind kind, Side side, std::int64_t s_pre) const {
  EventRecord r;
  r.t = next_t_;
  r.kind = kind;
  r.side = side;
  r.s_pre = s_pre;
  r.s_post = ref_ask_ - ref_bid_;
  r.mid = ref_ask_ + ref_bid_;
  r.gran_bid = book_.bids().empty() ? 0.0 : granularity(book_.bids()).value;
  r.gran_ask = book_.asks().empty() ? 0.0 : granularity(book_.asks()).value;
  return r;
}

bool Simulator::apply_market(Side& side) {
  if (book_.side(opposite(side)).empty()) {
    ++stats_.side_redraws;
    side = opposite(side);
    if (book_.side(opposite(side)).empty()) return false;
  }
  book_.market_order(side);
  return true;
}

void Simulator::place_limit(Side side, std::int64_t b, std::int64_t a) {
  const std::int64_t s = a - b;
  const auto range = static_cast<std::int64_t>(std::ceil(config_.k * static_cast<double>(s)));
  const auto u = 1 + static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(range)));
  const bool interior = u < s;
  std::int64_t price = side == Side::Sell ? b + u : a - u;
  if (interior) {
    ++stats_.interior_limit_orders;
    if (!config_.mechanism.is_uniform()) {
      const auto i = sample(config_.mechanism, s, rng_);
      price = side == Side::Sell ? a - i : b + i;
    }
  }
  // An emptied side is refilled at its reference quote, so a limit order
  // never widens the spread.
  if (!interior && book_.side(side).empty()) price = side == Side::Sell ? a : b;
  if (!book_.side(side).in_window(price)) {
    ++stats_.dropped_orders;
    return;
  }
  book_.side(side).add(TickPrice(price));
}

void Simulator::cancel() {
  if (config_.cancel_rate <= 0.0) return;
  std::int64_t total = book_.bids().total_volume() + book_.asks().total_volume();
  const std::int64_t n = rng_.binomial(total, config_.cancel_rate);
  for (std::int64_t c = 0; c < n && total > 0; ++c, --total) {
    auto unit = static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(total)));
    BookSide* side = &book_.side(Side::Buy);
    if (unit >= side->total_volume()) {
      unit -= side->total_volume();
      side = &book_.side(Side::Sell);
    }
    side->remove(side->locate_unit(unit));
  }
  stats_.cancelled_units += n;
}

void Simulator::maybe_recenter() {
  const std::int64_t margin = config_.window / 8;
  const std::int64_t lo = book_.origin();
  const std::int64_t hi = lo + book_.width() - 1;
  if (ref_bid_ - lo >= margin && hi - ref_ask_ >= margin) return;
  const std::int64_t origin = std::max<std::int64_t>(1, (ref_bid_ + ref_ask_) / 2 - config_.window / 2);
  stats_.discarded_units += book_.recenter(origin);
  ++stats_.recenterings;
}

StepResult Simulator::step() {
  const std::int64_t b = ref_bid_;
  const std::int64_t a = ref_ask_;
  const std::int64_t s_pre = a - b;

  Side side = rng_.below(2) == 0 ? Side::Buy : Side::Sell;
  const bool market = rng_.uniform() < config_.pi;
  EventKind kind = EventKind::LimitOrder;
  if (market && apply_market(side)) {
    kind = EventKind::MarketOrder;
    ++stats_.market_orders;
  } else {
    place_limit(side, b, a);
    ++stats_.limit_orders;
  }
  refresh_reference();

  StepResult out{record(kind, side, s_pre), std::nullopt};
  ++next_t_;
  if (out.order.s_post > s_pre) ++stats_.spread_increases;

  const std::int64_t b_mid = ref_bid_;
  const std::int64_t a_mid = ref_ask_;
  cancel();
  refresh_reference();
  if (ref_bid_ != b_mid || ref_ask_ != a_mid) {
    const Side moved = ref_bid_ != b_mid ? Side::Buy : Side::Sell;
    out.cancellation = record(EventKind::Cancellation, moved, a_mid - b_mid);
    ++next_t_;
    ++stats_.cancellation_events;
    if (out.cancellation->s_post > out.cancellation->s_pre) ++stats_.spread_increases;
  }
  maybe_recenter();
  return out;
}

StepResult step(Simulator& sim) { return sim.step(); }

Trajectory run(const SimConfig& config) {
  config.validate();
  Simulator sim(config);
  Trajectory traj;
  traj.config = config;
  const std::int64_t ceiling = config.effective_ceiling();

  auto exceeded = [&](const StepResult& r) {
    return r.order.s_post > ceiling || (r.cancellation && r.cancellation->s_post > ceiling);
  };

  for (std::int64_t i = 0; i < config.warmup; ++i) {
    if (exceeded(sim.step())) {
      traj.diverged = true;
      traj.max_spread = sim.spread();
      traj.stats = sim.stats();
      return traj;
    }
  }

  // Recording starts here: statistics and event time restart at zero.
  traj.initial_bid = sim.reference_bid();
  traj.initial_ask = sim.reference_ask();
  const RunStats before = sim.stats();

  traj.events.reserve(static_cast<std::size_t>(config.steps + config.steps / 8));
  for (std::int64_t i = 0; i < config.steps; ++i) {
    const StepResult r = sim.step();
    traj.events.push_back(r.order);
    if (r.cancellation) traj.events.push_back(*r.cancellation);
    traj.max_spread = std::max({traj.max_spread, r.order.s_post,
                                r.cancellation ? r.cancellation->s_post : std::int64_t{0}});
    if (exceeded(r)) {
      traj.diverged = true;
      break;
    }
  }

  const RunStats& after = sim.stats();
  RunStats& st = traj.stats;
  st.market_orders = after.market_orders - before.market_orders;
  st.limit_orders = after.limit_orders - before.limit_orders;
  st.interior_limit_orders = after.interior_limit_orders - before.interior_limit_orders;
  st.cancelled_units = after.cancelled_units - before.cancelled_units;
  st.cancellation_events = after.cancellation_events - before.cancellation_events;
  st.spread_increases = after.spread_increases - before.spread_increases;
  st.side_redraws = after.side_redraws - before.side_redraws;
  st.dropped_orders = after.dropped_orders - before.dropped_orders;
  st.recenterings = after.recenterings - before.recenterings;
  st.discarded_units = after.discarded_units - before.discarded_units;

  const std::int64_t t0 = traj.events.empty() ? 0 : traj.events.front().t;
  for (auto& e : traj.events) e.t -= t0;
  return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "# initial_quotes=" << traj.initial_bid << ',' << traj.initial_ask << '\n';
  out << "t,kind,side,s_pre,s_post,mid,gran_bid,gran_ask\n";
  for (const auto& e : traj.events) {
    out << e.t << ',' << to_string(e.kind) << ',' << to_string(e.side) << ',' << e.s_pre << ','
        << e.s_post << ',' << e.mid << ',' << csv::format_double(e.gran_bid) << ','
        << csv::format_double(e.gran_ask) << '\n';
  }
}

namespace {

EventKind parse_kind(std::string_view s, std::size_t line) {
  if (s == "MarketOrder") return EventKind::MarketOrder;
  if (s == "LimitOrder") return EventKind::LimitOrder;
  if (s == "Cancellation") return EventKind::Cancellation;
  throw ParseError(line, "unknown event kind '" + std::string(s) + "'");
}

Side parse_side(std::string_view s, std::size_t line) {
  if (s == "Buy") return Side::Buy;
  if (s == "Sell") return Side::Sell;
  throw ParseError(line, "unknown side '" + std::string(s) + "'");
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory traj;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = csv::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      constexpr std::string_view key = "# initial_quotes=";
      if (text.starts_with(key)) {
        const auto f = csv::split(text.substr(key.size()));
        if (f.size() == 2) {
          traj.initial_bid = csv::parse_int(f[0]).value_or(0);
          traj.initial_ask = csv::parse_int(f[1]).value_or(0);
        }
      }
      continue;
    }
    if (!header) {
      if (text != "t,kind,side,s_pre,s_post,mid,gran_bid,gran_ask") {
        throw ParseError(lineno, "unexpected trajectory header");
      }
      header = true;
      continue;
    }
    const auto f = csv::split(text);
    if (f.size() != 8) throw ParseError(lineno, "expected 8 columns");
    EventRecord e;
    const auto t = csv::parse_int(f[0]);
    const auto sp = csv::parse_int(f[3]);
    const auto so = csv::parse_int(f[4]);
    const auto mid = csv::parse_int(f[5]);
    const auto gb = csv::parse_double(f[6]);
    const auto ga = csv::parse_double(f[7]);
    if (!t || !sp || !so || !mid || !gb || !ga) throw ParseError(lineno, "malformed numeric field");
    e.t = *t;
    e.kind = parse_kind(csv::trim(f[1]), lineno);
    e.side = parse_side(csv::trim(f[2]), lineno);
    e.s_pre = *sp;
    e.s_post = *so;
    e.mid = *mid;
    e.gran_bid = *gb;
    e.gran_ask = *ga;
    traj.events.push_back(e);
  }
  if (!header) throw ParseError(lineno, "missing trajectory header");
  return traj;
}

namespace {

std::string format_price(std::int64_t ticks, std::int64_t tick_numerator, int decimals) {
  const std::int64_t scaled = ticks * tick_numerator;
  if (decimals <= 0) return std::to_string(scaled);
  std::int64_t pow10 = 1;
  for (int i = 0; i < decimals; ++i) pow10 *= 10;
  std::string frac = std::to_string(scaled % pow10);
  frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
  return std::to_string(scaled / pow10) + "." + frac;
}

}  // namespace

void write_quote_tape(std::ostream& out, const Trajectory& traj, std::int64_t tick_numerator,
                      int decimals) {
  if (tick_numerator < 1) throw DomainError("tick numerator must be positive");
  out << "timestamp,bid,ask\n";
  std::int64_t ts = 0;
  auto row = [&](std::int64_t bid, std::int64_t ask) {
    out << ts++ << ',' << format_price(bid, tick_numerator, decimals) << ','
        << format_price(ask, tick_numerator, decimals) << '\n';
  };
  if (traj.initial_ask > traj.initial_bid) row(traj.initial_bid, traj.initial_ask);
  for (const auto& e : traj.events) row(e.best_bid(), e.best_ask());
}

}  // namespace spreadlab
