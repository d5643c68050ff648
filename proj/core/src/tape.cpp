#include "spreadlab/tape.hpp"

#include <cmath>
#include <istream>
#include <optional>

#include "spreadlab/csv.hpp"

namespace spreadlab {

namespace {

struct Columns {
  std::size_t timestamp = 0;
  std::size_t bid = 0;
  std::size_t ask = 0;
  std::optional<std::size_t> day;
  std::size_t count = 0;
};

Columns parse_header(std::string_view line, char sep, std::size_t line_no) {
  const auto fields = csv::split(line, sep);
  Columns c;
  c.count = fields.size();
  std::optional<std::size_t> ts, bid, ask;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto name = csv::trim(fields[i]);
    if (name == "timestamp" || name == "time" || name == "t") {
      if (!ts) ts = i;
    } else if (name == "bid") {
      bid = i;
    } else if (name == "ask") {
      ask = i;
    } else if (name == "day") {
      c.day = i;
    }
  }
  if (!bid || !ask) throw ParseError(line_no, "header must contain bid and ask columns");
  c.timestamp = ts.value_or(0);
  c.bid = *bid;
  c.ask = *ask;
  return c;
}

// Negative: a before b.
int compare_timestamps(const std::string& a, const std::string& b) {
  const auto x = csv::parse_double(a);
  const auto y = csv::parse_double(b);
  if (x && y) return *x < *y ? -1 : (*x > *y ? 1 : 0);
  return a.compare(b);
}

}  // namespace

ParsedTape parse_tape(std::istream& in, const TapeFormat& format) {
  ParsedTape tape;
  std::optional<Columns> cols;
  std::string raw;
  std::size_t line_no = 0;
  const QuoteRecord* prev = nullptr;

  const auto reject = [&](std::size_t line, std::string reason) {
    if (!format.lenient) throw ParseError(line, std::move(reason));
    tape.rejected.push_back({line, std::move(reason)});
  };

  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto line = csv::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!cols) {
      cols = parse_header(line, format.separator, line_no);
      tape.has_day = cols->day.has_value();
      continue;
    }
    ++tape.rows_read;
    const auto fields = csv::split(line, format.separator);
    if (fields.size() != cols->count) {
      reject(line_no, "expected " + std::to_string(cols->count) + " fields, found " +
                          std::to_string(fields.size()));
      continue;
    }
    const auto bid = csv::parse_double(csv::trim(fields[cols->bid]));
    const auto ask = csv::parse_double(csv::trim(fields[cols->ask]));
    if (!bid || !ask || !std::isfinite(*bid) || !std::isfinite(*ask)) {
      reject(line_no, "non-numeric price");
      continue;
    }
    if (*bid <= 0.0 || *ask <= 0.0) {
      reject(line_no, "non-positive price");
      continue;
    }
    if (*ask <= *bid) {
      reject(line_no, "crossed quote");
      continue;
    }
    QuoteRecord rec;
    rec.timestamp = std::string(csv::trim(fields[cols->timestamp]));
    rec.bid = *bid;
    rec.ask = *ask;
    if (cols->day) rec.day = std::string(csv::trim(fields[*cols->day]));
    rec.line = line_no;
    if (rec.timestamp.empty()) {
      reject(line_no, "missing timestamp");
      continue;
    }
    if (prev && prev->day == rec.day && compare_timestamps(rec.timestamp, prev->timestamp) < 0) {
      throw OrderingError(line_no, "timestamp " + rec.timestamp + " precedes " + prev->timestamp);
    }
    tape.records.push_back(std::move(rec));
    prev = &tape.records.back();
  }
  if (!cols) throw ParseError(line_no, "missing header");
  return tape;
}

void TickSpec::validate() const {
  if (!(tick_size > 0.0) || !std::isfinite(tick_size)) throw DomainError("tick size must be positive");
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be non-negative");
}

TickSeries to_ticks(const std::vector<QuoteRecord>& records, const TickSpec& spec, bool lenient) {
  spec.validate();
  TickSeries out;
  out.quotes.reserve(records.size());
  const auto convert = [&](const QuoteRecord& r, double price) -> std::optional<std::int64_t> {
    const double ticks = std::round(price / spec.tick_size);
    const double residual = std::fabs(price - ticks * spec.tick_size);
    if (residual > spec.tolerance) {
      if (!lenient) throw OffGridPrice(r.line, price, residual);
      return std::nullopt;
    }
    return static_cast<std::int64_t>(ticks);
  };
  for (const auto& r : records) {
    const auto bid = convert(r, r.bid);
    const auto ask = convert(r, r.ask);
    if (!bid || !ask) {
      out.off_grid_lines.push_back(r.line);
      continue;
    }
    if (*ask - *bid < 1) {
      throw DomainError("line " + std::to_string(r.line) + ": spread below one tick after rounding");
    }
    out.quotes.push_back(TickQuote{*bid, *ask, r.day, r.line});
  }
  return out;
}

ClassifiedTape classify_events(const std::vector<TickQuote>& quotes) {
  if (quotes.size() < 2) throw EmptySeries("need at least two quotes to classify events");
  ClassifiedTape out;
  auto& sum = out.summary;
  sum.quotes = static_cast<std::int64_t>(quotes.size());
  sum.days = 1;
  std::vector<SpreadEvent> events;
  for (std::size_t i = 1; i < quotes.size(); ++i) {
    const auto& a = quotes[i - 1];
    const auto& b = quotes[i];
    if (a.day != b.day) {
      ++sum.days;
      continue;
    }
    const std::int64_t s0 = a.spread();
    const std::int64_t s1 = b.spread();
    if (s0 == s1) {
      ++sum.unchanged;
      continue;
    }
    const bool widened = s1 > s0;
    ++(widened ? sum.market_orders : sum.limit_orders);
    events.push_back(SpreadEvent{static_cast<std::int64_t>(i), s0, s1,
                                 widened ? OrderKind::MarketOrder : OrderKind::LimitOrder,
                                 b.bid + b.ask});
  }
  out.series = SpreadEventSeries(std::move(events));
  return out;
}

}  // namespace spreadlab
