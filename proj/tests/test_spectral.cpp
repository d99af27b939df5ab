#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tsa/errors.hpp"
#include "tsa/noise_model.hpp"
#include "tsa/rng.hpp"
#include "tsa/spectral.hpp"
#include "tsa/synthesis.hpp"

using namespace tsa;

namespace {

std::vector<double> gauss(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
  GaussianRng rng(seed);
  std::vector<double> y(n);
  for (double& v : y) v = sigma * rng.next();
  return y;
}

double mean_square(std::span<const double> y) {
  double s = 0.0;
  for (double v : y) s += v * v;
  return s / static_cast<double>(y.size());
}

double psd_integral(const Periodogram& pg, std::size_t bins_per_transform) {
  double s = 0.0;
  for (double p : pg.power) s += p;
  return s * pg.fs / static_cast<double>(bins_per_transform);
}

// O(N^2) reference periodogram straight from the definition.
std::vector<double> direct_psd(std::span<const double> y, double fs) {
  const std::size_t n = y.size();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(i) / static_cast<double>(n);
      re += y[i] * std::cos(ang);
      im += y[i] * std::sin(ang);
    }
    double p = (re * re + im * im) / (fs * static_cast<double>(n));
    const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
    out[k] = edge ? p : 2.0 * p;
  }
  return out;
}

}  // namespace

TEST_CASE("periodogram preserves the mean square of the series") {
  std::uint64_t seed = 100;
  for (std::size_t n : {std::size_t{64}, std::size_t{500}, std::size_t{1024}}) {
    for (int rep = 0; rep < 20; ++rep) {
      const std::vector<double> y = gauss(n, seed++, 1.0 + 0.1 * rep);
      const Periodogram pg = periodogram(y, 365.25);
      const double lhs = psd_integral(pg, n);
      const double rhs = mean_square(y);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
    }
  }
}

TEST_CASE("periodogram matches the direct transform definition") {
  for (std::size_t n : {std::size_t{64}, std::size_t{33}}) {
    const std::vector<double> y = gauss(n, 7000 + n);
    const Periodogram pg = periodogram(y, 2.0);
    const std::vector<double> want = direct_psd(y, 2.0);
    REQUIRE(pg.power.size() == want.size());
    double top = 0.0;
    for (double p : want) top = std::max(top, p);
    for (std::size_t k = 0; k < want.size(); ++k) {
      CHECK(std::abs(pg.power[k] - want[k]) <= 1e-10 * top);
    }
    CHECK(pg.freqs[0] == 0.0);
    CHECK(pg.freqs[1] == doctest::Approx(2.0 / static_cast<double>(n)).epsilon(1e-15));
    CHECK(pg.method == "raw");
  }
}

TEST_CASE("constant input concentrates all power at zero frequency") {
  const std::size_t n = 120;
  const double c = 3.25;
  const std::vector<double> y(n, c);
  const Periodogram pg = periodogram(y, 4.0);
  const double dc_want = static_cast<double>(n) * c * c / 4.0;
  CHECK(pg.power[0] == doctest::Approx(dc_want).epsilon(1e-12));
  for (std::size_t k = 1; k < pg.power.size(); ++k) {
    CHECK(std::abs(pg.power[k]) <= 1e-12 * dc_want);
  }
  CHECK(psd_integral(pg, n) == doctest::Approx(c * c).epsilon(1e-12));
}

TEST_CASE("a pure cosine lands in a single bin at the textbook level") {
  const std::size_t n = 64;
  const std::size_t k0 = 8;
  const double fs = 2.0;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::cos(2.0 * std::numbers::pi * static_cast<double>(k0) *
                    static_cast<double>(i) / static_cast<double>(n));
  }
  const Periodogram pg = periodogram(y, fs);
  const double want = static_cast<double>(n) / (2.0 * fs);
  CHECK(pg.power[k0] == doctest::Approx(want).epsilon(1e-10));
  for (std::size_t k = 0; k < pg.power.size(); ++k) {
    if (k != k0) CHECK(std::abs(pg.power[k]) <= 1e-10 * want);
  }
  CHECK(psd_integral(pg, n) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("one rectangular segment reproduces the raw periodogram bit for bit") {
  const std::vector<double> y = gauss(513, 42);
  const Periodogram raw = periodogram(y, 365.25);
  WelchParams wp;
  wp.segments = 1;
  wp.window = WindowKind::Rectangular;
  const Periodogram w = welch(y, 365.25, wp);
  REQUIRE(w.power.size() == raw.power.size());
  for (std::size_t k = 0; k < raw.power.size(); ++k) {
    CHECK(w.power[k] == raw.power[k]);
    CHECK(w.freqs[k] == raw.freqs[k]);
  }
  CHECK(w.method.find("welch") == 0);
  CHECK(w.method.find("segments=1") != std::string::npos);
  CHECK(w.method.find("window=rectangular") != std::string::npos);
}

TEST_CASE("welch segmentation arithmetic") {
  const std::vector<double> y = gauss(1000, 43);
  const Periodogram pg = welch(y, 1.0);  // defaults: 4 segments, 0.5 overlap, hann
  CHECK(pg.freqs.size() == 201);  // length 400 -> 201 one-sided bins
  CHECK(pg.method.find("welch segments=4 length=400 overlap=0.5 window=hann") == 0);
  CHECK(pg.freqs[1] == doctest::Approx(1.0 / 400.0).epsilon(1e-15));

  WelchParams explicit_len;
  explicit_len.segment_length = 256;
  explicit_len.overlap = 0.0;
  const Periodogram pg2 = welch(y, 1.0, explicit_len);
  CHECK(pg2.freqs.size() == 129);
  CHECK(pg2.method.find("segments=3") != std::string::npos);
  CHECK(pg2.method.find("length=256") != std::string::npos);
}

TEST_CASE("hann-windowed welch is calibrated against the flat spectrum") {
  const std::size_t n = 4096;
  const double fs = 2.0;
  const std::vector<double> y = gauss(n, 4242);
  WelchParams wp;
  wp.segments = 8;
  const Periodogram pg = welch(y, fs, wp);
  const double want = psd_powerlaw(0.25, 0.0, 1.0, fs);  // 2 sigma^2 / fs
  double acc = 0.0;
  std::size_t cnt = 0;
  for (std::size_t k = 5; k + 5 < pg.power.size(); ++k) {
    acc += pg.power[k];
    ++cnt;
  }
  const double level = acc / static_cast<double>(cnt);
  CHECK(level == doctest::Approx(want).epsilon(0.15));
}

TEST_CASE("averaging more segments shrinks the estimator variance") {
  const std::size_t n = 2048;
  const std::size_t reps = 40;
  std::vector<double> stat;
  for (std::size_t segs : {std::size_t{1}, std::size_t{4}, std::size_t{16}}) {
    WelchParams wp;
    wp.segments = segs;
    std::vector<std::vector<double>> all;
    for (std::size_t r = 0; r < reps; ++r) {
      const std::vector<double> y = gauss(n, mix_seed(9000, r));
      all.push_back(welch(y, 1.0, wp).power);
    }
    const std::size_t bins = all[0].size();
    const std::size_t lo = bins / 5, hi = bins / 3;
    double norm_var = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      double m = 0.0;
      for (const auto& p : all) m += p[k];
      m /= static_cast<double>(reps);
      double v = 0.0;
      for (const auto& p : all) v += (p[k] - m) * (p[k] - m);
      v /= static_cast<double>(reps - 1);
      norm_var += v / (m * m);
    }
    stat.push_back(norm_var / static_cast<double>(hi - lo));
  }
  CHECK(stat[1] < 0.6 * stat[0]);
  CHECK(stat[2] < 0.6 * stat[1]);
}

TEST_CASE("the log-log fit recovers an exact power law") {
  Periodogram pg;
  pg.fs = 2.0;
  const std::size_t bins = 65;
  for (std::size_t k = 0; k < bins; ++k) {
    const double f = pg.fs * static_cast<double>(k) / 128.0;
    pg.freqs.push_back(f);
    pg.power.push_back(k == 0 ? 123.0 : 3.0 * std::pow(f / pg.fs, -1.2));
  }
  const PowerLawPsdFit fit = fit_power_law_psd(pg);
  CHECK(fit.kappa == doctest::Approx(-1.2).epsilon(1e-9));
  CHECK(fit.p0 == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.bins_used == 64);
  CHECK(fit.bins_dropped == 0);
}

TEST_CASE("non-positive bins are dropped and counted, never fitted") {
  Periodogram pg;
  pg.fs = 1.0;
  for (std::size_t k = 0; k < 21; ++k) {
    const double f = static_cast<double>(k) / 40.0;
    pg.freqs.push_back(f);
    pg.power.push_back(k == 0 ? 1.0 : 2.5 * std::pow(f, -0.8));
  }
  pg.power[3] = 0.0;
  pg.power[7] = -1.0;
  pg.power[11] = 0.0;
  const PowerLawPsdFit fit = fit_power_law_psd(pg);
  CHECK(fit.bins_dropped == 3);
  CHECK(fit.bins_used == 17);
  CHECK(fit.kappa == doctest::Approx(-0.8).epsilon(1e-9));
}

TEST_CASE("too few usable bins is an error") {
  Periodogram pg;
  pg.fs = 1.0;
  for (std::size_t k = 0; k < 8; ++k) {  // 7 usable after the DC exclusion
    pg.freqs.push_back(static_cast<double>(k) / 14.0);
    pg.power.push_back(1.0);
  }
  CHECK_THROWS_AS(fit_power_law_psd(pg), DomainError);
}

TEST_CASE("spectral slope estimates separate flicker from white noise") {
  const std::size_t n = 4096;
  std::vector<double> flicker_hat, white_hat;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const std::vector<double> fl =
        generate_colored_noise(powerlaw_filter(-1.0, n), 1.0, n, mix_seed(31000, s));
    flicker_hat.push_back(fit_power_law_psd(welch(fl, 1.0)).kappa);
    const std::vector<double> wh = gauss(n, mix_seed(32000, s));
    white_hat.push_back(fit_power_law_psd(welch(wh, 1.0)).kappa);
  }
  std::sort(flicker_hat.begin(), flicker_hat.end());
  std::sort(white_hat.begin(), white_hat.end());
  CHECK(flicker_hat[2] > -1.35);
  CHECK(flicker_hat[2] < -0.65);
  CHECK(std::abs(white_hat[2]) < 0.25);
}

TEST_CASE("periodogram serialization carries headers and two columns") {
  const std::vector<double> y = gauss(32, 1);
  const Periodogram pg = periodogram(y, 365.25);
  std::ostringstream os;
  const std::vector<std::pair<std::string, std::string>> extra{{"station", "TEST"}};
  write_periodogram(pg, os, extra);
  const std::string text = os.str();
  CHECK(text.find("# station: TEST") != std::string::npos);
  CHECK(text.find("# fs: 365.25") != std::string::npos);
  CHECK(text.find("# method: raw") != std::string::npos);
  CHECK(text.find("# columns: frequency power") != std::string::npos);

  std::istringstream is(text);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  CHECK(rows == pg.freqs.size());
}

TEST_CASE("spectral input guards") {
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(periodogram(one, 1.0), DomainError);
  const std::vector<double> y = gauss(64, 2);
  CHECK_THROWS_AS(periodogram(y, 0.0), DomainError);
  CHECK_THROWS_AS(periodogram(y, -1.0), DomainError);

  WelchParams bad;
  bad.overlap = 1.0;
  CHECK_THROWS_AS(welch(y, 1.0, bad), DomainError);
  bad.overlap = -0.1;
  CHECK_THROWS_AS(welch(y, 1.0, bad), DomainError);
  bad.overlap = 0.5;
  bad.segment_length = 65;
  CHECK_THROWS_AS(welch(y, 1.0, bad), DomainError);
  bad.segment_length = 1;
  CHECK_THROWS_AS(welch(y, 1.0, bad), DomainError);

  CHECK(window_from_name("hann") == WindowKind::Hann);
  CHECK(window_from_name("hanning") == WindowKind::Hann);
  CHECK(window_from_name("rectangular") == WindowKind::Rectangular);
  CHECK(window_from_name("boxcar") == WindowKind::Rectangular);
  CHECK_THROWS_AS(window_from_name("hamming"), SpecError);
  CHECK(window_name(WindowKind::Hann) == "hann");
}
