#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

#include "spreadlab/errors.hpp"
#include "spreadlab/rng.hpp"

namespace spreadlab {

// Where a limit order lands inside the spread. The placement index i is the
// distance from the order's own best quote (i = 1 is the quote adjacent to
// it), so the spread after the order is s - i.
class DepositionMechanism {
public:
  enum class Kind : std::uint8_t { Uniform, NonUniform };

  static DepositionMechanism uniform() noexcept { return DepositionMechanism(Kind::Uniform, 0.0); }
  // Piecewise pmf: alpha at i = 1, the rest shared evenly. Requires 0 < alpha < 1.
  static DepositionMechanism non_uniform(double alpha);

  Kind kind() const noexcept { return kind_; }
  bool is_uniform() const noexcept { return kind_ == Kind::Uniform; }
  // 0 for the uniform mechanism.
  double alpha() const noexcept { return alpha_; }

  std::string name() const { return is_uniform() ? "uniform" : "nonuniform"; }

  friend bool operator==(const DepositionMechanism&, const DepositionMechanism&) = default;

private:
  DepositionMechanism(Kind kind, double alpha) noexcept : kind_(kind), alpha_(alpha) {}

  Kind kind_;
  double alpha_;
};

// Exact fraction with a positive denominator, always in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (d == 0) throw DomainError("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  constexpr double to_double() const noexcept {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  friend constexpr Rational operator+(Rational a, Rational b) {
    const auto g = std::gcd(a.den, b.den);
    return Rational(a.num * (b.den / g) + b.num * (a.den / g), a.den / g * b.den);
  }
  friend constexpr Rational operator-(Rational a, Rational b) { return a + Rational(-b.num, b.den); }
  friend constexpr Rational operator*(Rational a, Rational b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend constexpr bool operator==(Rational a, Rational b) noexcept {
    return a.num == b.num && a.den == b.den;
  }
};

// g(i | s) for 1 <= i <= s - 1, s >= 2. At s = 2 every mechanism returns 1.
double pmf(const DepositionMechanism& mech, std::int64_t s, std::int64_t i);

// Uniform g(i | s) = 1 / (s - 1) as an exact fraction.
Rational uniform_pmf_exact(std::int64_t s, std::int64_t i);

// Draws i ~ g(. | s) from a single uniform variate (inverse CDF).
std::int64_t sample(const DepositionMechanism& mech, std::int64_t s, Rng& rng);
std::int64_t sample_from_uniform(const DepositionMechanism& mech, std::int64_t s, double u);

}  // namespace spreadlab
