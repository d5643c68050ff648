#pragma once

#include <cstdint>
#include <random>

namespace spreadlab {

// SplitMix64 finalizer; used to expand one seed into independent streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for replica `index` of an invocation seeded with `seed`:
// splitmix64(seed + index * golden-ratio increment).
constexpr std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(seed + index * 0x9E3779B97F4A7C15ULL);
}

// Random stream owned by one simulation replica. All draws are derived from
// raw mt19937_64 output with hand-written transforms, so sequences do not
// depend on the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() noexcept { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Binomial(n, p) by sequential inversion; intended for small n*p.
  std::int64_t binomial(std::int64_t n, double p) noexcept;

private:
  std::mt19937_64 engine_;
};

}  // namespace spreadlab
