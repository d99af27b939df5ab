#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "tsa/fft.hpp"

using namespace tsa;

namespace {

// Quadratic-time reference DFT over the non-redundant half spectrum.
std::vector<std::complex<double>> direct_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(m) / static_cast<double>(n);
      s += x[m] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = s;
  }
  return out;
}

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> x(n);
  for (double& v : x) v = nd(gen);
  return x;
}

}  // namespace

TEST_CASE("rfft agrees with the direct DFT") {
  for (std::size_t n : {8u, 16u, 33u, 64u, 100u}) {
    const auto x = random_vec(n, 1000 + n);
    const auto fast = rfft(x);
    const auto slow = direct_dft(x);
    REQUIRE(fast.size() == n / 2 + 1);
    double scale = 0.0;
    for (const auto& v : slow) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < slow.size(); ++k) {
      CAPTURE(n);
      CAPTURE(k);
      CHECK(std::abs(fast[k] - slow[k]) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("rfft of a constant concentrates at DC") {
  const std::vector<double> x(24, 3.5);
  const auto spec = rfft(x);
  CHECK(spec[0].real() == doctest::Approx(24 * 3.5).epsilon(1e-14));
  CHECK(spec[0].imag() == doctest::Approx(0.0));
  for (std::size_t k = 1; k < spec.size(); ++k) {
    CHECK(std::abs(spec[k]) <= 1e-11 * std::abs(spec[0]));
  }
}

TEST_CASE("irfft inverts rfft for even and odd lengths") {
  for (std::size_t n : {12u, 17u, 256u}) {
    const auto x = random_vec(n, 31 + n);
    const auto back = irfft(rfft(x), n);
    REQUIRE(back.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("fft convolution equals the direct sum, including truncation") {
  struct Case {
    std::size_t na, nb, out;
  };
  for (const Case c : {Case{17, 9, 25}, Case{64, 64, 64}, Case{40, 95, 20}}) {
    const auto a = random_vec(c.na, 5 + c.na);
    const auto b = random_vec(c.nb, 11 + c.nb);
    const auto fast = fft_convolve(a, b, c.out);
    REQUIRE(fast.size() == c.out);
    double scale = 0.0;
    for (double v : fast) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < c.out; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < c.na; ++i) {
        if (k >= i && k - i < c.nb) s += a[i] * b[k - i];
      }
      CHECK(std::abs(fast[k] - s) <= 1e-11 * std::max(scale, 1.0));
    }
  }
}
