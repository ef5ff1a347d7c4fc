#pragma once

#include <cstdint>
#include <random>

namespace hlri {

// Platform-independent draws on top of mt19937_64. The standard
// distributions are implementation-defined, so they are not used here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  bool bit() { return (engine_() >> 63) != 0; }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform on {0, ..., n-1}; rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r = engine_();
    while (r >= limit) r = engine_();
    return r % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hlri
