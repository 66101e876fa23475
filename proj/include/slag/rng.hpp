#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace slag {

/**
 * @brief Seeded generator with platform-stable output.
 *
 * mt19937_64 has a standardized sequence; the uniform and Gaussian transforms
 * here are fixed arithmetic (53-bit mantissa scaling and Box-Muller) rather
 * than the implementation-defined std distributions, so identical seeds give
 * identical reports on every platform.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /** @brief Uniform double in [0, 1). */
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /** @brief Uniform double in [lo, hi). */
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /** @brief Standard normal via Box-Muller (one value per call, cached pair). */
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace slag
