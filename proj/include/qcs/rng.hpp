#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace qcs {

/// Seedable 64-bit generator behind all stochastic behavior. The algorithm
/// is selected by name so a config file can pin it; every draw is a pure
/// function of (algorithm, seed, call sequence).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

  static Rng named(const std::string& algorithm, std::uint64_t seed) {
    if (algorithm != "mt19937_64")
      throw std::invalid_argument("unknown rng algorithm: " + algorithm);
    return Rng(seed);
  }

  std::uint64_t raw() { return eng_(); }

  /// Uniform in [0, 1) with 53 bits, independent of library distributions
  /// so output bytes are reproducible across standard libraries.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on the uniform above.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qcs
