#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spreadlab/series.hpp"

namespace spreadlab {

struct QuoteRecord {
  std::string timestamp;  // opaque ordering key
  double bid = 0.0;
  double ask = 0.0;
  std::string day;  // empty when the tape has no day column
  std::size_t line = 0;
};

struct TapeFormat {
  // Strict mode throws on the first malformed row; lenient mode skips and
  // reports it. Timestamp regressions always throw.
  bool lenient = false;
  char separator = ',';
};

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct ParsedTape {
  std::vector<QuoteRecord> records;
  std::vector<RejectedRow> rejected;
  std::int64_t rows_read = 0;
  bool has_day = false;
};

// Header must name bid and ask columns; the timestamp column is "timestamp",
// "time" or "t" (else the first column); "day" is optional. Blank lines and
// lines starting with '#' are skipped. Timestamps compare numerically when
// both parse as numbers, lexicographically otherwise, and only within a day.
ParsedTape parse_tape(std::istream& in, const TapeFormat& format = {});

struct TickSpec {
  double tick_size = 0.01;
  double tolerance = 1e-6;  // in price units

  void validate() const;
};

struct TickQuote {
  std::int64_t bid = 0;
  std::int64_t ask = 0;
  std::string day;
  std::size_t line = 0;

  std::int64_t spread() const noexcept { return ask - bid; }
};

struct TickSeries {
  std::vector<TickQuote> quotes;
  std::vector<std::size_t> off_grid_lines;  // lenient mode only
};

// Throws OffGridPrice for the first off-grid price unless `lenient`, in
// which case such rows are dropped and listed.
TickSeries to_ticks(const std::vector<QuoteRecord>& records, const TickSpec& spec,
                    bool lenient = false);

struct ClassificationSummary {
  std::int64_t quotes = 0;
  std::int64_t days = 0;
  std::int64_t unchanged = 0;  // consecutive quotes with equal spread
  std::int64_t market_orders = 0;
  std::int64_t limit_orders = 0;
};

struct ClassifiedTape {
  SpreadEventSeries series;
  ClassificationSummary summary;
};

// Spread increase -> MarketOrder, decrease -> LimitOrder, no change -> no
// event; pairs straddling a day boundary never produce events. Event t is
// the index of the later quote; mid is in half ticks.
ClassifiedTape classify_events(const std::vector<TickQuote>& quotes);

// Caveat carried in ingest output: a cancellation at the best widens the
// spread and is counted as a market order.
inline constexpr const char* kClassificationCaveat =
    "spread increases are labelled MarketOrder; cancellations at the best are assumed negligible "
    "and are indistinguishable from market orders";

}  // namespace spreadlab
