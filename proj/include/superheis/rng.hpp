#pragma once

#include <cstdint>

#include "superheis/grassmann.hpp"

namespace superheis {

/// Deterministic splitmix64 generator; identical streams across platforms so
/// seeded reports stay byte-identical.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(next() % std::uint64_t(hi - lo + 1));
  }
  cplx crand(double scale = 1.0) {
    double re = uniform(-scale, scale);
    return cplx(re, uniform(-scale, scale));
  }
};

}  // namespace superheis
