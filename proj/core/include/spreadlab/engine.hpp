#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "spreadlab/deposition.hpp"
#include "spreadlab/lob.hpp"
#include "spreadlab/rng.hpp"

namespace spreadlab {

enum class EventKind : std::uint8_t { MarketOrder, LimitOrder, Cancellation };

std::string_view to_string(EventKind k) noexcept;

struct SimConfig {
  double pi = 1.0 / 3.0;       // probability that an event is a market order
  double k = 1.7;              // limit orders land in ]b, b + k s] / [a - k s, a[
  DepositionMechanism mechanism = DepositionMechanism::uniform();
  double cancel_rate = 0.015;  // per resting unit, per order event
  std::int64_t steps = 1'000'000;  // recorded order events after warm-up
  std::int64_t warmup = 10'000;
  std::uint64_t seed = 1;
  std::int64_t window = OrderBook::kDefaultWindow;
  std::int64_t initial_depth = 5;
  std::int64_t initial_bid = 100'000;
  // Spread above which the run stops and reports divergence; 0 selects
  // window / 10.
  std::int64_t divergence_ceiling = 0;

  void validate() const;
  std::int64_t effective_ceiling() const noexcept {
    return divergence_ceiling > 0 ? divergence_ceiling : window / 10;
  }
};

struct EventRecord {
  std::int64_t t = 0;
  EventKind kind = EventKind::LimitOrder;
  Side side = Side::Buy;
  std::int64_t s_pre = 0;
  std::int64_t s_post = 0;
  std::int64_t mid = 0;  // (a + b) after the event, in half ticks
  double gran_bid = 0.0;
  double gran_ask = 0.0;

  std::int64_t best_bid() const noexcept { return (mid - s_post) / 2; }
  std::int64_t best_ask() const noexcept { return (mid + s_post) / 2; }
};

struct RunStats {
  std::int64_t market_orders = 0;
  std::int64_t limit_orders = 0;
  std::int64_t interior_limit_orders = 0;
  std::int64_t cancelled_units = 0;
  // Cancellation events that moved a best quote (these widen the spread).
  std::int64_t cancellation_events = 0;
  // Market and cancellation events that widened the spread.
  std::int64_t spread_increases = 0;
  std::int64_t side_redraws = 0;
  std::int64_t dropped_orders = 0;  // placements outside the price window
  std::int64_t recenterings = 0;
  std::int64_t discarded_units = 0;  // volume lost when re-centring

  double cancellation_at_best_rate() const noexcept {
    return spread_increases == 0
               ? 0.0
               : static_cast<double>(cancellation_events) / static_cast<double>(spread_increases);
  }
};

struct Trajectory {
  SimConfig config;
  std::vector<EventRecord> events;
  RunStats stats;
  bool diverged = false;
  std::int64_t max_spread = 0;
  // Best quotes when recording started.
  std::int64_t initial_bid = 0;
  std::int64_t initial_ask = 0;

  double mean_spread() const noexcept;
  double odd_fraction() const noexcept;
};

struct StepResult {
  EventRecord order;
  std::optional<EventRecord> cancellation;
};

// Both sides seeded with `initial_depth` unit levels, best quotes adjacent,
// window centred on the initial mid-price.
OrderBook init_book(const SimConfig& config);

// Stateful event loop over one book. A side that a market order has emptied
// keeps its last best price as the reference for placing new limit orders.
class Simulator {
public:
  explicit Simulator(SimConfig config);

  const OrderBook& book() const noexcept { return book_; }
  const SimConfig& config() const noexcept { return config_; }
  const RunStats& stats() const noexcept { return stats_; }
  // Spread using reference prices for an empty side.
  std::int64_t spread() const noexcept { return ref_ask_ - ref_bid_; }
  std::int64_t reference_bid() const noexcept { return ref_bid_; }
  std::int64_t reference_ask() const noexcept { return ref_ask_; }

  StepResult step();

private:
  void place_limit(Side side, std::int64_t b, std::int64_t a);
  bool apply_market(Side& side);
  void cancel();
  void refresh_reference() noexcept;
  void maybe_recenter();
  EventRecord record(EventKind kind, Side side, std::int64_t s_pre) const;

  SimConfig config_;
  OrderBook book_;
  Rng rng_;
  RunStats stats_;
  std::int64_t ref_bid_ = 0;
  std::int64_t ref_ask_ = 0;
  std::int64_t next_t_ = 0;
};

StepResult step(Simulator& sim);

// Runs warm-up plus `steps` order events. Stops early, with `diverged` set,
// when the spread exceeds the configured ceiling.
Trajectory run(const SimConfig& config);

// CSV: t,kind,side,s_pre,s_post,mid,gran_bid,gran_ask (one row per event).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);

// Best-quote tape (timestamp,bid,ask) with prices = ticks * tick_size,
// printed with `decimals` fractional digits. The first row holds the initial
// quotes, then one row per event.
void write_quote_tape(std::ostream& out, const Trajectory& traj, std::int64_t tick_numerator,
                      int decimals);

}  // namespace spreadlab
