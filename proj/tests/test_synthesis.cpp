#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tsa/errors.hpp"
#include "tsa/noise_model.hpp"
#include "tsa/rng.hpp"
#include "tsa/series_io.hpp"
#include "tsa/synthesis.hpp"

using namespace tsa;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("colored noise draws are a pure function of the seed") {
  const FilterCoefficients taps = powerlaw_filter(-1.0, 200);
  const auto a = generate_colored_noise(taps, 1.5, 200, 99);
  const auto b = generate_colored_noise(taps, 1.5, 200, 99);
  const auto c = generate_colored_noise(taps, 1.5, 200, 100);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("the fft filtering equals the direct truncated convolution") {
  const std::size_t n = 257;
  const double kappa = -1.3;
  const double sigma = 2.0;
  const std::uint64_t seed = 2718;
  const FilterCoefficients taps = powerlaw_filter(kappa, n);

  GaussianRng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.next();

  std::vector<double> want(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += taps.h[j] * v[i - j];
    want[i] = sigma * s;
  }

  const std::vector<double> got = generate_colored_noise(taps, sigma, n, seed);
  double top = 0.0;
  for (double w : want) top = std::max(top, std::abs(w));
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(got[i] - want[i]) <= 1e-9 * top);
  }
}

TEST_CASE("the mixture is the documented combination of two derived streams") {
  const std::size_t n = 150;
  const double sigma = 3.0;
  const double phi_mix = 0.7;
  const std::uint64_t seed = 31415;
  const FilterCoefficients taps = powerlaw_filter(-0.9, n);

  const std::vector<double> got = mix_colored_white(taps, sigma, phi_mix, n, seed);

  std::vector<double> colored =
      generate_colored_noise(taps, std::sqrt(phi_mix), n, mix_seed(seed, 1));
  GaussianRng white(mix_seed(seed, 2));
  const double aw = std::sqrt(1.0 - phi_mix);
  for (std::size_t i = 0; i < n; ++i) {
    colored[i] = sigma * (colored[i] + aw * white.next());
  }
  CHECK(got == colored);
}

TEST_CASE("mix_flicker_white is the kappa = -1 mixture") {
  const std::size_t n = 80;
  const auto a = mix_flicker_white(2.0, 0.6, n, 555);
  const auto b = mix_colored_white(powerlaw_filter(-1.0, n), 2.0, 0.6, n, 555);
  CHECK(a == b);
}

TEST_CASE("amplitude scaling to the per-year convention") {
  const double dt = 1.0 / 365.25;

  const AmplitudePair up = scale_amplitude(4.8, 0.7, -1.0, dt);
  CHECK(up.sigma_pl == doctest::Approx(17.5565).epsilon(1e-4));
  CHECK(up.sigma_w == doctest::Approx(2.62906).epsilon(1e-4));

  const AmplitudePair east = scale_amplitude(1.4, 0.6, -1.0, dt);
  CHECK(east.sigma_pl == doctest::Approx(4.74080).epsilon(1e-4));
  CHECK(east.sigma_w == doctest::Approx(0.885438).epsilon(1e-4));

  // White spectral index: no resampling correction at all.
  const AmplitudePair flat = scale_amplitude(2.0, 0.25, 0.0, dt);
  CHECK(flat.sigma_pl == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat.sigma_w == doctest::Approx(2.0 * std::sqrt(0.75)).epsilon(1e-12));

  // At one-year sampling the correction factor is unity for any kappa.
  const AmplitudePair yr = scale_amplitude(3.0, 0.5, -1.7, 1.0);
  CHECK(yr.sigma_pl == doctest::Approx(3.0 * std::sqrt(0.5)).epsilon(1e-12));

  CHECK_THROWS_AS(scale_amplitude(1.0, 0.5, -1.0, 0.0), DomainError);
  CHECK_THROWS_AS(scale_amplitude(1.0, 1.5, -1.0, dt), DomainError);
  CHECK_THROWS_AS(scale_amplitude(1.0, 0.5, -2.5, dt), DomainError);
}

TEST_CASE("a noiseless recipe reproduces the trajectory exactly") {
  SynthesisRecipe recipe;
  recipe.trajectory = TrajectoryModel::standard(1, false, false);
  recipe.coefficients = {6.0, 3.0};
  recipe.noise.kind = NoiseKind::White;
  recipe.noise.sigma = 0.0;
  recipe.n = 100;
  recipe.seed = 1;
  recipe.station = "TST1";
  recipe.component = "U";

  const TimeSeries ts = generate_series(recipe);
  REQUIRE(ts.size() == 100);
  CHECK(ts.station == "TST1");
  CHECK(ts.component == "U");
  CHECK(ts.mjd.front() == 50084.0);
  CHECK(ts.mjd.back() == 50084.0 + 99.0);
  const std::vector<double> t = ts.epochs_years();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(ts.values[i] == doctest::Approx(6.0 + 3.0 * t[i]).epsilon(1e-12));
  }
}

TEST_CASE("recipe validation") {
  SynthesisRecipe recipe;
  recipe.trajectory = TrajectoryModel::standard(1, true, false);  // 4 columns
  recipe.coefficients = {1.0, 2.0};
  recipe.n = 50;
  CHECK_THROWS_AS(generate_series(recipe), SpecError);

  SynthesisRecipe orphan;
  orphan.coefficients = {1.0};
  orphan.n = 50;
  CHECK_THROWS_AS(generate_series(orphan), SpecError);

  SynthesisRecipe empty;
  empty.n = 0;
  CHECK_THROWS_AS(generate_series(empty), DomainError);

  const FilterCoefficients taps = powerlaw_filter(-1.0, 10);
  CHECK_THROWS_AS(generate_colored_noise(taps, 1.0, 20, 0), DomainError);
  CHECK_THROWS_AS(generate_colored_noise(taps, -1.0, 10, 0), DomainError);
  CHECK_THROWS_AS(mix_colored_white(taps, 1.0, 1.5, 10, 0), DomainError);
}

TEST_CASE("benchmark generation is deterministic and within its stated ranges") {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "tsa_bench_unit";
  const fs::path dir_a = base / "a";
  const fs::path dir_b = base / "b";
  fs::remove_all(base);

  BenchmarkOptions options;
  options.stations = 2;
  options.n = 120;

  const auto truths = generate_benchmark(dir_a, 12345, options);
  const auto again = generate_benchmark(dir_b, 12345, options);

  REQUIRE(truths.size() == 6);
  const char* names[6] = {"BSG01_E.dat", "BSG01_N.dat", "BSG01_U.dat",
                          "BSG02_E.dat", "BSG02_N.dat", "BSG02_U.dat"};
  for (const char* name : names) {
    CHECK(fs::exists(dir_a / name));
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
  CHECK(fs::exists(dir_a / "truth.txt"));
  CHECK(slurp(dir_a / "truth.txt") == slurp(dir_b / "truth.txt"));

  for (std::size_t i = 0; i < truths.size(); ++i) {
    const BenchmarkTruth& t = truths[i];
    CHECK(t.intercept >= -10.0);
    CHECK(t.intercept <= 10.0);
    CHECK(t.trend >= -5.0);
    CHECK(t.trend <= 5.0);
    CHECK(t.annual_amp >= 0.5);
    CHECK(t.annual_amp <= 3.0);
    CHECK(t.annual_phase >= 0.0);
    CHECK(t.annual_phase < 2.0 * std::numbers::pi);
    CHECK(t.semiannual_amp >= 0.2);
    CHECK(t.semiannual_amp <= 1.0);
    CHECK(t.kappa == -1.0);
    CHECK(truths[i].seed == again[i].seed);
  }
  CHECK(truths[0].sigma == 1.4);
  CHECK(truths[0].phi_mix == 0.6);
  CHECK(truths[2].sigma == 4.8);
  CHECK(truths[2].phi_mix == 0.7);
  CHECK(truths[0].component == "E");
  CHECK(truths[2].component == "U");

  // The per-file provenance headers carry the exact drawn coefficients.
  const std::string first = slurp(dir_a / "BSG01_E.dat");
  CHECK(first.find("# noise: plwn") != std::string::npos);
  CHECK(first.find("# seed: " + std::to_string(truths[0].seed)) != std::string::npos);
  CHECK(first.find(format_g17(truths[0].intercept)) != std::string::npos);
  CHECK(first.find(format_g17(truths[0].trend)) != std::string::npos);

  // Data block: n samples, one per line, after the headers.
  const TimeSeries back = read_series(dir_a / "BSG01_U.dat");
  CHECK(back.size() == 120);
  CHECK(back.station == "BSG01");
  CHECK(back.component == "U");
  CHECK(back.mjd.front() == 50084.0);

  const std::string manifest = slurp(dir_a / "truth.txt");
  CHECK(manifest.find("# columns: station component seed intercept trend") == 0);

  // A different master seed must change the data.
  const fs::path dir_c = base / "c";
  const auto other = generate_benchmark(dir_c, 777, options);
  CHECK(other[0].trend != truths[0].trend);
  CHECK(slurp(dir_c / "BSG01_E.dat") != slurp(dir_a / "BSG01_E.dat"));

  fs::remove_all(base);
}

TEST_CASE("benchmark truth seeds are collision free across series") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tsa_bench_seeds";
  fs::remove_all(dir);
  BenchmarkOptions options;
  options.stations = 4;
  options.n = 16;
  const auto truths = generate_benchmark(dir, 2026, options);
  std::vector<std::uint64_t> seeds;
  for (const auto& t : truths) seeds.push_back(t.seed);
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
  fs::remove_all(dir);
}
