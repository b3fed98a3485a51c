#pragma once

#include <cstdint>

#include "pmdrift/field.hpp"

namespace pmdrift {

/// SplitMix64 generator; bit-identical streams across platforms, unlike the
/// standard distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Field field(std::size_t n, double lo, double hi) {
    Field f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = uniform(lo, hi);
    return f;
  }

private:
  std::uint64_t state_;
};

}  // namespace pmdrift
