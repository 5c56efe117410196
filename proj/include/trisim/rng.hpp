#pragma once
// Deterministic random source. The engine is std::mt19937_64 (bit stream fixed
// by the standard); all transforms to uniforms/normals/Poisson counts are done
// here so results never depend on library-specific distribution internals.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace trisim {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform double in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1]; safe as log() argument.
  double uniform_pos() { return 1.0 - uniform(); }

  double uniform_range(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = uniform_pos();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double c = std::cos(2.0 * M_PI * v);
    const double s = std::sin(2.0 * M_PI * v);
    spare_ = r * s;
    have_spare_ = true;
    return r * c;
  }

  // Unbiased index in [0, n) by rejection.
  std::size_t index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: empty range");
    const std::uint64_t span = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Spin value +1/-1 with equal probability.
  int spin() { return bernoulli(0.5) ? 1 : -1; }

  // Poisson count; product method for small means, halving recursion above.
  long poisson(double lambda) {
    if (lambda < 0) throw std::invalid_argument("Rng::poisson: negative mean");
    if (lambda == 0) return 0;
    if (lambda > 30.0) {
      const long a = poisson(lambda / 2.0);
      const long b = poisson(lambda - lambda / 2.0);
      return a + b;
    }
    const double limit = std::exp(-lambda);
    long k = 0;
    double prod = 1.0;
    for (;;) {
      prod *= uniform_pos();
      if (prod <= limit) return k;
      ++k;
    }
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace trisim
