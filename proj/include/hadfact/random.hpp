#pragma once

#include "hadfact/matrix.hpp"

#include <cstdint>
#include <random>

namespace hadfact {

/// Portable seeded generator: std::mt19937_64 (its output sequence is fixed by
/// the C++ standard) with uniform doubles built from the top 53 bits, so a
/// given seed yields identical matrices on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller on the portable uniforms.
  double normal();
  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  Matrix uniform_matrix(Index rows, Index cols);
  Matrix normal_matrix(Index rows, Index cols);

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

} // namespace hadfact
