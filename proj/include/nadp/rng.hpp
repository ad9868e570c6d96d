#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace nadp {

/// SplitMix64 finalizer chained over the parts. Used to derive independent
/// member seeds from (stream seed, frame index, family, member).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

/// Portable uniform generator: std::mt19937_64 is specified bit-exactly by
/// the standard, and the real conversion below is done by hand because the
/// standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nadp
