#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace ddm {

// Seed derivation for independent streams (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  auto step = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  };
  std::uint64_t h = step(a);
  h = step(h ^ step(b + 0x9e3779b97f4a7c15ull));
  h = step(h ^ step(c + 0xbf58476d1ce4e5b9ull));
  return h;
}

// mt19937_64 wrapped with explicit distributions. <random>'s distribution
// classes are implementation-defined, which would break frozen test vectors
// and byte-identical reruns; everything here is pinned down.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n) {
    const auto wide = static_cast<unsigned __int128>(eng_()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  std::uint8_t bit() { return static_cast<std::uint8_t>(eng_() >> 63); }

  // standard normal via Box-Muller
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  // circularly-symmetric complex Gaussian with E|x|^2 = var
  std::complex<double> cgauss(double var) {
    const double s = std::sqrt(var * 0.5);
    const double re = gauss();
    const double im = gauss();
    return {s * re, s * im};
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ddm
