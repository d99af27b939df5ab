#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "tsa/rng.hpp"

using namespace tsa;

TEST_CASE("gaussian stream reproduces the documented construction exactly") {
  const std::uint64_t seed = 0xDEADBEEFCAFEULL;
  GaussianRng rng(seed);

  std::mt19937_64 engine(seed);
  auto uniform = [&]() {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  };

  for (int i = 0; i < 32; ++i) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    CHECK(rng.next() == r * std::cos(theta));
    CHECK(rng.next() == r * std::sin(theta));
  }
}

TEST_CASE("same seed, same stream; different seed, different stream") {
  GaussianRng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_differ = false;
  for (int i = 0; i < 256; ++i) {
    const double va = a.next();
    all_equal = all_equal && va == b.next();
    any_differ = any_differ || va != c.next();
  }
  CHECK(all_equal);
  CHECK(any_differ);
}

TEST_CASE("uniform draws stay in the half-open unit interval") {
  GaussianRng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("first two sample moments and lag-1 correlation look normal") {
  GaussianRng rng(20240601);
  const std::size_t n = 100000;
  std::vector<double> z(n);
  for (double& v : z) v = rng.next();

  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(n);

  double var = 0.0, lag1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    var += (z[i] - mean) * (z[i] - mean);
    if (i > 0) lag1 += (z[i] - mean) * (z[i - 1] - mean);
  }
  var /= static_cast<double>(n);
  lag1 /= var * static_cast<double>(n);

  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.02);
  CHECK(std::abs(lag1) < 0.02);
}

TEST_CASE("mix_seed is the splitmix64 stream over salts") {
  // First output of the reference splitmix64 sequence seeded with 0.
  CHECK(mix_seed(0, 0) == 0xE220A8397B1DCDAFULL);

  // Salted streams separate and do not depend on evaluation order.
  CHECK(mix_seed(0, 0) != mix_seed(0, 1));
  CHECK(mix_seed(1, 0) != mix_seed(0, 0));
  const std::uint64_t late = mix_seed(99, 5);
  const std::uint64_t early = mix_seed(99, 5);
  CHECK(late == early);

  // No short-range collisions across a small salt/base grid.
  std::vector<std::uint64_t> seen;
  for (std::uint64_t base = 0; base < 8; ++base) {
    for (std::uint64_t salt = 0; salt < 8; ++salt) {
      seen.push_back(mix_seed(base, salt));
    }
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}
