#include "spreadlab/deposition.hpp"

#include <algorithm>

namespace spreadlab {

namespace {

void check_support(std::int64_t s, std::int64_t i) {
  if (s < 2) throw DomainError("interior placement requires spread >= 2, got " + std::to_string(s));
  if (i < 1 || i > s - 1) {
    throw DomainError("placement distance " + std::to_string(i) + " outside [1, " +
                      std::to_string(s - 1) + "]");
  }
}

}  // namespace

DepositionMechanism DepositionMechanism::non_uniform(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("non-uniform deposition requires 0 < alpha < 1, got " + std::to_string(alpha));
  }
  return DepositionMechanism(Kind::NonUniform, alpha);
}

double pmf(const DepositionMechanism& mech, std::int64_t s, std::int64_t i) {
  check_support(s, i);
  if (s == 2) return 1.0;
  if (mech.is_uniform()) return 1.0 / static_cast<double>(s - 1);
  return i == 1 ? mech.alpha() : (1.0 - mech.alpha()) / static_cast<double>(s - 2);
}

Rational uniform_pmf_exact(std::int64_t s, std::int64_t i) {
  check_support(s, i);
  return Rational(1, s - 1);
}

std::int64_t sample_from_uniform(const DepositionMechanism& mech, std::int64_t s, double u) {
  if (s < 2) throw DomainError("interior placement requires spread >= 2, got " + std::to_string(s));
  if (s == 2) return 1;
  std::int64_t i = 0;
  if (mech.is_uniform()) {
    i = 1 + static_cast<std::int64_t>(u * static_cast<double>(s - 1));
  } else if (u < mech.alpha()) {
    i = 1;
  } else {
    const double v = (u - mech.alpha()) / (1.0 - mech.alpha());
    i = 2 + static_cast<std::int64_t>(v * static_cast<double>(s - 2));
  }
  return std::clamp<std::int64_t>(i, 1, s - 1);
}

std::int64_t sample(const DepositionMechanism& mech, std::int64_t s, Rng& rng) {
  return sample_from_uniform(mech, s, rng.uniform());
}

}  // namespace spreadlab
