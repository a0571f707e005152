#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace eepc {

/// Seeded generator with a portable draw sequence.
///
/// std::mt19937_64 output is fixed by the standard; the distributions here are
/// written out explicitly so results do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unit-mean exponential by inversion.
  double exponential() { return -std::log1p(-uniform()); }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace eepc
