#include "spreadlab/lob.hpp"

#include <bit>
#include <cstdlib>
#include <string>

namespace spreadlab {

std::string_view to_string(Side s) noexcept { return s == Side::Buy ? "Buy" : "Sell"; }

namespace detail {

std::size_t Fenwick::find(std::int64_t k) const noexcept {
  const std::size_t n = tree_.size() - 1;
  std::size_t pos = 0;
  for (std::size_t step = std::bit_floor(n == 0 ? std::size_t{1} : n); step != 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next <= n && tree_[next] <= k) {
      pos = next;
      k -= tree_[next];
    }
  }
  return pos;  // 0-based index of the element
}

}  // namespace detail

BookSide::BookSide(Side side, std::int64_t origin, std::int64_t width)
    : side_(side), origin_(origin), vol_(), fenwick_() {
  if (width < 2) throw DomainError("price window must span at least 2 ticks");
  if (origin < 1) throw DomainError("price window origin must be >= 1");
  vol_.assign(static_cast<std::size_t>(width), 0);
  fenwick_.reset(vol_.size());
}

std::size_t BookSide::index(std::int64_t price) const {
  if (!in_window(price)) {
    throw DomainError("price " + std::to_string(price) + " outside the book window [" +
                      std::to_string(origin_) + ", " + std::to_string(origin_ + width()) + ")");
  }
  return static_cast<std::size_t>(price - origin_);
}

std::int64_t BookSide::volume_at(TickPrice p) const noexcept {
  if (!in_window(p.value)) return 0;
  return vol_[static_cast<std::size_t>(p.value - origin_)];
}

TickPrice BookSide::best() const {
  if (empty()) throw EmptySide();
  return TickPrice(origin_ + (side_ == Side::Buy ? hi_ : lo_));
}

TickPrice BookSide::farthest() const {
  if (empty()) throw EmptySide();
  return TickPrice(origin_ + (side_ == Side::Buy ? lo_ : hi_));
}

void BookSide::add(TickPrice p, std::int64_t volume) {
  if (volume < 0) throw DomainError("negative volume");
  if (volume == 0) return;
  const auto i = index(p.value);
  vol_[i] += volume;
  fenwick_.add(i, volume);
  total_ += volume;
  const auto si = static_cast<std::int64_t>(i);
  if (lo_ < 0 || si < lo_) lo_ = si;
  if (hi_ < 0 || si > hi_) hi_ = si;
}

void BookSide::remove(TickPrice p, std::int64_t volume) {
  if (volume < 0) throw DomainError("negative volume");
  const auto i = index(p.value);
  if (vol_[i] < volume) throw DomainError("not enough resting volume at " + std::to_string(p.value));
  if (volume == 0) return;
  vol_[i] -= volume;
  fenwick_.add(i, -volume);
  total_ -= volume;
  if (vol_[i] != 0) return;
  if (total_ == 0) {
    lo_ = hi_ = -1;
    return;
  }
  const auto si = static_cast<std::int64_t>(i);
  if (si == lo_) {
    while (vol_[static_cast<std::size_t>(lo_)] == 0) ++lo_;
  }
  if (si == hi_) {
    while (vol_[static_cast<std::size_t>(hi_)] == 0) --hi_;
  }
}

TickPrice BookSide::locate_unit(std::int64_t k) const {
  if (k < 0 || k >= total_) throw DomainError("volume unit index out of range");
  return TickPrice(origin_ + static_cast<std::int64_t>(fenwick_.find(k)));
}

void BookSide::rescan_bounds() noexcept {
  lo_ = hi_ = -1;
  for (std::size_t i = 0; i < vol_.size(); ++i) {
    if (vol_[i] == 0) continue;
    if (lo_ < 0) lo_ = static_cast<std::int64_t>(i);
    hi_ = static_cast<std::int64_t>(i);
  }
}

std::int64_t BookSide::shift_origin(std::int64_t new_origin) {
  if (new_origin < 1) throw DomainError("price window origin must be >= 1");
  const std::int64_t delta = new_origin - origin_;
  if (delta == 0) return 0;
  const std::int64_t w = width();
  std::vector<std::int64_t> moved(vol_.size(), 0);
  std::int64_t dropped = 0;
  for (std::int64_t i = 0; i < w; ++i) {
    const std::int64_t v = vol_[static_cast<std::size_t>(i)];
    if (v == 0) continue;
    const std::int64_t j = i - delta;
    if (j >= 0 && j < w) {
      moved[static_cast<std::size_t>(j)] = v;
    } else {
      dropped += v;
    }
  }
  vol_ = std::move(moved);
  origin_ = new_origin;
  total_ -= dropped;
  fenwick_.reset(vol_.size());
  for (std::size_t i = 0; i < vol_.size(); ++i) {
    if (vol_[i] != 0) fenwick_.add(i, vol_[i]);
  }
  rescan_bounds();
  return dropped;
}

std::vector<std::pair<TickPrice, std::int64_t>> BookSide::levels() const {
  std::vector<std::pair<TickPrice, std::int64_t>> out;
  if (empty()) return out;
  for (std::int64_t i = lo_; i <= hi_; ++i) {
    const auto v = vol_[static_cast<std::size_t>(i)];
    if (v != 0) out.emplace_back(TickPrice(origin_ + i), v);
  }
  return out;
}

OrderBook::OrderBook(std::int64_t origin, std::int64_t width)
    : bids_(Side::Buy, origin, width), asks_(Side::Sell, origin, width) {}

std::int64_t OrderBook::spread() const { return best_ask().value - best_bid().value; }

std::int64_t OrderBook::mid_half_ticks() const { return best_ask().value + best_bid().value; }

void OrderBook::market_order(Side order_side) {
  BookSide& book = side(opposite(order_side));
  book.remove(book.best(), 1);
}

void OrderBook::limit_order(Side order_side, TickPrice price) {
  if (order_side == Side::Sell && !bids_.empty() && price <= bids_.best()) {
    throw CrossingOrder("sell limit at " + std::to_string(price.value) + " crosses best bid " +
                        std::to_string(bids_.best().value));
  }
  if (order_side == Side::Buy && !asks_.empty() && price >= asks_.best()) {
    throw CrossingOrder("buy limit at " + std::to_string(price.value) + " crosses best ask " +
                        std::to_string(asks_.best().value));
  }
  side(order_side).add(price, 1);
}

std::int64_t OrderBook::recenter(std::int64_t new_origin) {
  return bids_.shift_origin(new_origin) + asks_.shift_origin(new_origin);
}

std::int64_t spread(const OrderBook& book) { return book.spread(); }

Granularity granularity(const BookSide& side) {
  const std::int64_t span = std::abs(side.best().value - side.farthest().value) + 1;
  return Granularity{static_cast<double>(side.total_volume()) / static_cast<double>(span)};
}

OrderBook apply_market_order(OrderBook book, Side order_side) {
  book.market_order(order_side);
  return book;
}

OrderBook apply_limit_order(OrderBook book, Side order_side, TickPrice price) {
  book.limit_order(order_side, price);
  return book;
}

}  // namespace spreadlab
