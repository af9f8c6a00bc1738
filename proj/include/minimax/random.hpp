#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace minimax {

/// Portable random stream: std::mt19937_64 (its output sequence is fixed by
/// the C++ standard) with hand-written uniform and Box-Muller transforms, so
/// the same seed yields the same numbers on every standard library.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64+box-muller/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace minimax
