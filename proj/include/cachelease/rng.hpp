#pragma once

#include <cstdint>
#include <random>

namespace cachelease {

/// Deterministic RNG. mt19937_64 is fully specified by the standard and the
/// distributions below are hand-rolled, so streams are bit-identical across
/// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Poisson draw via Knuth's product method; large means are split using
  /// the additivity of independent Poisson variables.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    int total = 0;
    while (mean > 30.0) {
      total += poisson_small(mean / 2.0);
      mean /= 2.0;
    }
    return total + poisson_small(mean);
  }

 private:
  int poisson_small(double mean) {
    const double limit = std::exp(-mean);
    double prod = uniform();
    int k = 0;
    while (prod > limit) {
      prod *= uniform();
      ++k;
    }
    return k;
  }

  std::mt19937_64 gen_;
};

/// splitmix64 finalizer; used to derive independent per-cell seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t seed_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

}  // namespace cachelease
