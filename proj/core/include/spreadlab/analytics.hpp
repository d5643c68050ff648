#pragma once

#include <cstdint>

#include "spreadlab/deposition.hpp"

namespace spreadlab {

// Parity transition probabilities for an interior limit order at pre-event
// spread s. Only the row for the parity of s exists: asking an odd-s table
// for P(.|even) throws DomainError.
class ParityTransitionTable {
public:
  ParityTransitionTable(std::int64_t s, double p_odd);

  std::int64_t s() const noexcept { return s_; }
  bool from_odd() const noexcept { return (s_ & 1) != 0; }
  // Probability that the post-event spread is odd / even.
  double p_odd() const noexcept { return p_odd_; }
  double p_even() const noexcept { return 1.0 - p_odd_; }

  double p_odd_given_odd() const;
  double p_even_given_odd() const;
  double p_odd_given_even() const;
  double p_even_given_even() const;

private:
  std::int64_t s_;
  double p_odd_;
};

struct ExactParityRow {
  std::int64_t s = 2;
  Rational p_odd;
  Rational p_even;
};

// Closed forms for the uniform mechanism.
ParityTransitionTable uniform_parity(std::int64_t s);
ExactParityRow uniform_parity_exact(std::int64_t s);

// Sums g(i | s) over placements whose post-event spread s - i is odd.
ParityTransitionTable general_parity(const DepositionMechanism& mech, std::int64_t s);

// Closed form for the non-uniform mechanism; s >= 3, 0 < alpha < 1.
ParityTransitionTable nonuniform_parity(double alpha, std::int64_t s);
ExactParityRow nonuniform_parity_exact(Rational alpha, std::int64_t s);

// <s - s'> / s for an interior limit order. 1/2 at s = 2 for every mechanism.
double mean_relative_spread_change(const DepositionMechanism& mech, std::int64_t s);

// (alpha + 1) / alpha: the non-uniform mean relative change is >= 1/2 only
// for 2 <= s <= this value.
double coupling_boundary(double alpha);

}  // namespace spreadlab
