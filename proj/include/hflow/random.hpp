#pragma once

/// @file random.hpp
/// @brief Platform-independent random draws. std::normal_distribution is
/// implementation-defined, so Gaussian draws are produced here by Box-Muller
/// from raw mt19937_64 output; identical seeds give identical streams on
/// every standard library.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hflow {

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1), 53 random bits.
  double uniform() {
    double u = 0.0;
    while (u == 0.0) u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return u;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hflow
