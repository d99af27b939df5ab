#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tsa {

// splitmix64 finalizer. Used to derive independent stream seeds from a base
// seed and a salt; the derivation is order-independent, so streams for
// different (station, component) pairs never depend on generation order.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seedable standard normal stream.
//
// The algorithm is pinned so that the same seed reproduces the same deviates
// on any conforming platform:
//   engine   mt19937_64 seeded directly with the 64-bit seed
//   uniforms u = (x >> 11) * 2^-53 in [0, 1) from successive engine outputs
//   normals  trigonometric Box-Muller on pairs (u1, u2), with u1 mapped to
//            (0, 1] as 1 - u:
//              r  = sqrt(-2 ln u1)
//              z0 = r cos(2 pi u2),  z1 = r sin(2 pi u2)
//            z0 is returned first, z1 cached for the next call.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform draw in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal draw.
  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace tsa
