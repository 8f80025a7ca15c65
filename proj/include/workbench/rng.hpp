#pragma once

#include <cstdint>

namespace workbench {

// xorshift64* generator. The update rule is fixed so that seeded runs are
// reproducible across platforms and compilers:
//   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  output = x * 0x2545F4914F6CDD1D
// A zero seed is remapped to a fixed nonzero constant (the state must never
// be zero). Integer draws below n use the plain modulus of the 64-bit output.
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed)
      : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1Dull;
  }

  std::uint64_t below(std::uint64_t n) { return n <= 1 ? 0 : next() % n; }

  // Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace workbench
