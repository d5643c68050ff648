#include "spreadlab/rng.hpp"

#include <cmath>

namespace spreadlab {

std::int64_t Rng::binomial(std::int64_t n, double p) noexcept {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const double mean = static_cast<double>(n) * p;
  if (mean > 30.0) {
    // Inversion loses precision far into the tail; the library sampler is
    // deterministic for a given toolchain.
    std::binomial_distribution<std::int64_t> dist(n, p);
    return dist(engine_);
  }
  const double odds = p / (1.0 - p);
  double pk = std::exp(static_cast<double>(n) * std::log1p(-p));
  double cdf = pk;
  const double u = uniform();
  std::int64_t k = 0;
  while (u >= cdf && k < n) {
    pk *= odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
    ++k;
    cdf += pk;
  }
  return k;
}

}  // namespace spreadlab
