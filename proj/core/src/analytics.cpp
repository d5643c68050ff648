#include "spreadlab/analytics.hpp"

#include <string>

namespace spreadlab {

namespace {

void require_spread(std::int64_t s, std::int64_t min) {
  if (s < min) {
    throw DomainError("spread must be >= " + std::to_string(min) + " (got " + std::to_string(s) + ")");
  }
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

ParityTransitionTable::ParityTransitionTable(std::int64_t s, double p_odd) : s_(s), p_odd_(p_odd) {
  require_spread(s, 2);
  if (!(p_odd >= 0.0 && p_odd <= 1.0)) throw DomainError("probability outside [0, 1]");
}

double ParityTransitionTable::p_odd_given_odd() const {
  if (!from_odd()) throw DomainError("P(o|o) needs an odd pre-event spread");
  return p_odd();
}

double ParityTransitionTable::p_even_given_odd() const {
  if (!from_odd()) throw DomainError("P(e|o) needs an odd pre-event spread");
  return p_even();
}

double ParityTransitionTable::p_odd_given_even() const {
  if (from_odd()) throw DomainError("P(o|e) needs an even pre-event spread");
  return p_odd();
}

double ParityTransitionTable::p_even_given_even() const {
  if (from_odd()) throw DomainError("P(e|e) needs an even pre-event spread");
  return p_even();
}

ExactParityRow uniform_parity_exact(std::int64_t s) {
  require_spread(s, 2);
  if (s % 2 != 0) return {s, Rational(1, 2), Rational(1, 2)};
  return {s, Rational(s, 2 * (s - 1)), Rational(s - 2, 2 * (s - 1))};
}

ParityTransitionTable uniform_parity(std::int64_t s) {
  require_spread(s, 2);
  if (s % 2 != 0) return {s, 0.5};
  const double sd = static_cast<double>(s);
  return {s, sd / (2.0 * (sd - 1.0))};
}

ParityTransitionTable general_parity(const DepositionMechanism& mech, std::int64_t s) {
  require_spread(s, 2);
  double odd = 0.0;
  // s - i is odd when i has the opposite parity to s.
  for (std::int64_t i = (s % 2 == 0) ? 1 : 2; i <= s - 1; i += 2) odd += pmf(mech, s, i);
  if (odd > 1.0) odd = 1.0;
  return {s, odd};
}

ParityTransitionTable nonuniform_parity(double alpha, std::int64_t s) {
  require_alpha(alpha);
  require_spread(s, 3);
  if (s % 2 == 0) return {s, alpha + (1.0 - alpha) / 2.0};
  const double sd = static_cast<double>(s);
  return {s, (1.0 - alpha) * (sd - 1.0) / (2.0 * (sd - 2.0))};
}

ExactParityRow nonuniform_parity_exact(Rational alpha, std::int64_t s) {
  if (alpha.num <= 0 || alpha.num >= alpha.den) throw DomainError("alpha must lie in (0, 1)");
  require_spread(s, 3);
  const Rational rest = Rational(1) - alpha;
  Rational odd = (s % 2 == 0) ? alpha + rest * Rational(1, 2)
                              : rest * Rational(s - 1, 2 * (s - 2));
  return {s, odd, Rational(1) - odd};
}

double mean_relative_spread_change(const DepositionMechanism& mech, std::int64_t s) {
  require_spread(s, 2);
  if (mech.is_uniform() || s == 2) return 0.5;
  const double a = mech.alpha();
  const double sd = static_cast<double>(s);
  return a / sd + (1.0 - a) * (sd * (sd - 1.0) - 2.0) / (2.0 * sd * (sd - 2.0));
}

double coupling_boundary(double alpha) {
  require_alpha(alpha);
  return (alpha + 1.0) / alpha;
}

}  // namespace spreadlab
