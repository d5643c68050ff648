#pragma once

#include <compare>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "spreadlab/errors.hpp"

namespace spreadlab {

// Integer price on the tick grid (tick size 1). Always >= 1.
struct TickPrice {
  std::int64_t value;

  constexpr explicit TickPrice(std::int64_t v) : value(v) {
    if (v < 1) throw DomainError("tick price must be >= 1");
  }
  friend constexpr auto operator<=>(TickPrice, TickPrice) = default;
};

enum class Side : std::uint8_t { Buy, Sell };

constexpr Side opposite(Side s) noexcept { return s == Side::Buy ? Side::Sell : Side::Buy; }
std::string_view to_string(Side s) noexcept;

// Linear density of resting volume on one side, in units per tick.
struct Granularity {
  double value = 0.0;
};

namespace detail {

// Prefix sums over a dense array of level volumes.
class Fenwick {
public:
  explicit Fenwick(std::size_t n = 0) : tree_(n + 1, 0) {}
  void reset(std::size_t n) { tree_.assign(n + 1, 0); }
  void add(std::size_t idx, std::int64_t delta) noexcept {
    for (std::size_t i = idx + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }
  // Smallest index whose inclusive prefix sum exceeds k.
  std::size_t find(std::int64_t k) const noexcept;

private:
  std::vector<std::int64_t> tree_;
};

}  // namespace detail

// One side of the book stored as a dense volume array over a price window
// [origin, origin + width). Volume 0 means the quote is absent.
class BookSide {
public:
  BookSide(Side side, std::int64_t origin, std::int64_t width);

  Side side() const noexcept { return side_; }
  bool empty() const noexcept { return total_ == 0; }
  std::int64_t total_volume() const noexcept { return total_; }
  std::int64_t origin() const noexcept { return origin_; }
  std::int64_t width() const noexcept { return static_cast<std::int64_t>(vol_.size()); }
  bool in_window(std::int64_t price) const noexcept {
    return price >= origin_ && price < origin_ + width();
  }

  std::int64_t volume_at(TickPrice p) const noexcept;
  // Max occupied price for bids, min for asks.
  TickPrice best() const;
  // Occupied quote farthest from the best.
  TickPrice farthest() const;

  void add(TickPrice p, std::int64_t volume = 1);
  void remove(TickPrice p, std::int64_t volume = 1);

  // Price holding the k-th unit of volume (0-based, ascending price order).
  TickPrice locate_unit(std::int64_t k) const;

  // Moves the window; volume that falls outside is discarded and returned.
  std::int64_t shift_origin(std::int64_t new_origin);

  // Occupied levels in ascending price order.
  std::vector<std::pair<TickPrice, std::int64_t>> levels() const;

private:
  std::size_t index(std::int64_t price) const;
  void rescan_bounds() noexcept;

  Side side_;
  std::int64_t origin_;
  std::vector<std::int64_t> vol_;
  detail::Fenwick fenwick_;
  std::int64_t total_ = 0;
  std::int64_t lo_ = -1;  // lowest occupied index, -1 when empty
  std::int64_t hi_ = -1;  // highest occupied index
};

class OrderBook {
public:
  static constexpr std::int64_t kDefaultWindow = 10000;

  explicit OrderBook(std::int64_t origin = 1, std::int64_t width = kDefaultWindow);

  const BookSide& bids() const noexcept { return bids_; }
  const BookSide& asks() const noexcept { return asks_; }
  const BookSide& side(Side s) const noexcept { return s == Side::Buy ? bids_ : asks_; }
  BookSide& side(Side s) noexcept { return s == Side::Buy ? bids_ : asks_; }

  std::int64_t origin() const noexcept { return bids_.origin(); }
  std::int64_t width() const noexcept { return bids_.width(); }

  TickPrice best_bid() const { return bids_.best(); }
  TickPrice best_ask() const { return asks_.best(); }
  std::int64_t spread() const;
  // (a + b), i.e. the mid-price in half-tick units.
  std::int64_t mid_half_ticks() const;

  // Executes one unit against the opposite best quote.
  void market_order(Side order_side);
  // Rests one unit at `price`; throws CrossingOrder if it would cross.
  void limit_order(Side order_side, TickPrice price);

  // Re-bases both sides on a new window origin. Returns discarded volume.
  std::int64_t recenter(std::int64_t new_origin);

private:
  BookSide bids_;
  BookSide asks_;
};

std::int64_t spread(const OrderBook& book);
Granularity granularity(const BookSide& side);
OrderBook apply_market_order(OrderBook book, Side order_side);
OrderBook apply_limit_order(OrderBook book, Side order_side, TickPrice price);

}  // namespace spreadlab
