#include "spreadlab/series.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "spreadlab/csv.hpp"

namespace spreadlab {

std::string_view to_string(OrderKind k) noexcept {
  switch (k) {
    case OrderKind::MarketOrder: return "MarketOrder";
    case OrderKind::LimitOrder: return "LimitOrder";
    case OrderKind::Unknown: return "Unknown";
  }
  return "?";
}

SpreadEventSeries::SpreadEventSeries(std::vector<SpreadEvent> events) {
  for (std::size_t i = 0; i < events.size(); ++i) check(events[i], i == 0 ? nullptr : &events[i - 1]);
  events_ = std::move(events);
}

void SpreadEventSeries::check(const SpreadEvent& e, const SpreadEvent* prev) {
  if (prev != nullptr && e.t <= prev->t) {
    throw DomainError("event times must be strictly increasing (t=" + std::to_string(e.t) + ")");
  }
  if (e.s_pre < 1 || e.s_post < 1) throw DomainError("spreads must be >= 1");
  if (e.kind == OrderKind::LimitOrder && !(e.s_post < e.s_pre)) {
    throw DomainError("LimitOrder event must decrease the spread (t=" + std::to_string(e.t) + ")");
  }
  if (e.kind == OrderKind::MarketOrder && !(e.s_post > e.s_pre)) {
    throw DomainError("MarketOrder event must increase the spread (t=" + std::to_string(e.t) + ")");
  }
}

void SpreadEventSeries::push_back(const SpreadEvent& e) {
  check(e, events_.empty() ? nullptr : &events_.back());
  events_.push_back(e);
}

bool SpreadEventSeries::has_mids() const noexcept {
  if (events_.empty()) return false;
  for (const auto& e : events_) {
    if (!e.mid) return false;
  }
  return true;
}

std::vector<std::int64_t> SpreadEventSeries::mids() const {
  std::vector<std::int64_t> out;
  out.reserve(events_.size());
  for (const auto& e : events_) {
    if (!e.mid) throw DomainError("series has no mid-price column");
    out.push_back(*e.mid);
  }
  return out;
}

std::vector<std::int64_t> SpreadEventSeries::spreads() const {
  std::vector<std::int64_t> out;
  out.reserve(events_.size());
  for (const auto& e : events_) out.push_back(e.s_post);
  return out;
}

SpreadEventSeries to_event_series(const Trajectory& traj) {
  std::vector<SpreadEvent> out;
  out.reserve(traj.events.size());
  for (const auto& r : traj.events) {
    OrderKind kind = OrderKind::Unknown;
    if (r.s_post < r.s_pre) kind = OrderKind::LimitOrder;
    else if (r.s_post > r.s_pre && r.kind == EventKind::MarketOrder) kind = OrderKind::MarketOrder;
    out.push_back(SpreadEvent{r.t, r.s_pre, r.s_post, kind, r.mid});
  }
  return SpreadEventSeries(std::move(out));
}

void write_event_csv(std::ostream& out, const SpreadEventSeries& series, bool with_mid) {
  out << (with_mid ? "t,s_pre,s_post,kind,mid\n" : "t,s_pre,s_post,kind\n");
  for (const auto& e : series) {
    out << e.t << ',' << e.s_pre << ',' << e.s_post << ',' << to_string(e.kind);
    if (with_mid) {
      out << ',';
      if (e.mid) out << *e.mid;
    }
    out << '\n';
  }
}

namespace {

OrderKind parse_order_kind(std::string_view s, std::size_t line) {
  if (s == "MarketOrder") return OrderKind::MarketOrder;
  if (s == "LimitOrder") return OrderKind::LimitOrder;
  if (s == "Unknown") return OrderKind::Unknown;
  throw ParseError(line, "unknown event kind '" + std::string(s) + "'");
}

}  // namespace

SpreadEventSeries read_event_csv(std::istream& in) {
  SpreadEventSeries series;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  bool with_mid = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = csv::trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!header) {
      if (text == "t,s_pre,s_post,kind") {
        with_mid = false;
      } else if (text == "t,s_pre,s_post,kind,mid") {
        with_mid = true;
      } else {
        throw ParseError(lineno, "expected header t,s_pre,s_post,kind[,mid]");
      }
      header = true;
      continue;
    }
    const auto f = csv::split(text);
    if (f.size() != (with_mid ? 5U : 4U)) throw ParseError(lineno, "wrong number of columns");
    const auto t = csv::parse_int(f[0]);
    const auto sp = csv::parse_int(f[1]);
    const auto so = csv::parse_int(f[2]);
    if (!t || !sp || !so) throw ParseError(lineno, "malformed integer field");
    SpreadEvent e{*t, *sp, *so, parse_order_kind(csv::trim(f[3]), lineno), std::nullopt};
    if (with_mid && !csv::trim(f[4]).empty()) {
      const auto m = csv::parse_int(f[4]);
      if (!m) throw ParseError(lineno, "malformed mid");
      e.mid = *m;
    }
    try {
      series.push_back(e);
    } catch (const DomainError& err) {
      throw ParseError(lineno, err.what());
    }
  }
  if (!header) throw ParseError(lineno, "missing header");
  return series;
}

SpreadEventSeries read_series_csv(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::istringstream probe(text);
  std::string line;
  while (std::getline(probe, line)) {
    const auto t = csv::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream again(text);
    if (t.starts_with("t,kind,side")) return to_event_series(read_trajectory_csv(again));
    return read_event_csv(again);
  }
  throw ParseError(0, "empty input");
}

}  // namespace spreadlab
