#pragma once

#include <cstdint>
#include <random>

namespace qam {

/// Seeded uniform source. Doubles are derived from raw mt19937_64 words so
/// streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [lo, hi], inclusive. Modulo bias is irrelevant at
  /// the range sizes used here.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(engine_() %
                                 static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qam
