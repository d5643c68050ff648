#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spreadlab/engine.hpp"

namespace spreadlab {

enum class OrderKind : std::uint8_t { MarketOrder, LimitOrder, Unknown };

std::string_view to_string(OrderKind k) noexcept;

struct SpreadEvent {
  std::int64_t t = 0;
  std::int64_t s_pre = 1;
  std::int64_t s_post = 1;
  OrderKind kind = OrderKind::Unknown;
  std::optional<std::int64_t> mid;  // half ticks
};

// Ordered event stream shared by the simulator and tape ingestion.
// Invariants: t strictly increasing, spreads >= 1, LimitOrder only on a
// spread decrease and MarketOrder only on an increase.
class SpreadEventSeries {
public:
  SpreadEventSeries() = default;
  explicit SpreadEventSeries(std::vector<SpreadEvent> events);

  void push_back(const SpreadEvent& e);

  const std::vector<SpreadEvent>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const SpreadEvent& operator[](std::size_t i) const noexcept { return events_[i]; }
  auto begin() const noexcept { return events_.begin(); }
  auto end() const noexcept { return events_.end(); }

  bool has_mids() const noexcept;
  // Post-event mids; throws DomainError if any record lacks one.
  std::vector<std::int64_t> mids() const;
  std::vector<std::int64_t> spreads() const;

private:
  static void check(const SpreadEvent& e, const SpreadEvent* prev);
  std::vector<SpreadEvent> events_;
};

// One record per trajectory event. Kinds follow the spread direction:
// decreases are LimitOrder, increases caused by a market order are
// MarketOrder, everything else (no change, cancellations) is Unknown.
SpreadEventSeries to_event_series(const Trajectory& traj);

// CSV: t,s_pre,s_post,kind[,mid]. The mid column is optional on input and
// written only when `with_mid` is set.
void write_event_csv(std::ostream& out, const SpreadEventSeries& series, bool with_mid = false);
SpreadEventSeries read_event_csv(std::istream& in);

// Reads either an event CSV or a trajectory CSV (detected from the header).
SpreadEventSeries read_series_csv(std::istream& in);

}  // namespace spreadlab
