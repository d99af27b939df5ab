#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tsa/noise_model.hpp"
#include "tsa/time_series.hpp"
#include "tsa/trajectory.hpp"

namespace tsa {

// n samples of colored noise: sigma times the filtered unit white stream for
// the given seed. The filtering is the FFT-accelerated truncated convolution
// of the driver with the taps, so the sample covariance matches
// build_covariance exactly (not just asymptotically).
std::vector<double> generate_colored_noise(const FilterCoefficients& coeffs, double sigma,
                                           std::size_t n, std::uint64_t seed);

// Mixture draw: sigma (sqrt(phi_mix) * colored + sqrt(1-phi_mix) * white),
// both components from one seed-derived pair of independent streams.
std::vector<double> mix_colored_white(const FilterCoefficients& coeffs, double sigma,
                                      double phi_mix, std::size_t n, std::uint64_t seed);

// Flicker specialization of the mixture (kappa = -1).
std::vector<double> mix_flicker_white(double sigma, double phi_mix, std::size_t n,
                                      std::uint64_t seed);

// Split a mixture amplitude into the power-law and white parts, with the
// power-law part rescaled to its per-year convention:
// sigma_pl = sigma * sqrt(phi_mix) * dt_years^(kappa/4), sigma_w = sigma * sqrt(1-phi_mix).
// For daily flicker noise dt_years^(kappa/4) = 365.25^(1/4) ~ 4.372.
struct AmplitudePair {
  double sigma_pl = 0.0;
  double sigma_w = 0.0;
};
AmplitudePair scale_amplitude(double sigma, double phi_mix, double kappa, double dt_years);

// Complete synthetic series recipe: trajectory + coefficients + noise draw.
struct SynthesisRecipe {
  TrajectoryModel trajectory;
  std::vector<double> coefficients;  // one per design column
  NoiseModel noise;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double mjd_start = 50084.0;
  double sampling_days = 1.0;
  std::string station;
  std::string component;
};

TimeSeries generate_series(const SynthesisRecipe& recipe);

// ---- Benchmark synthetic dataset -------------------------------------------

// Truth record for one generated benchmark series.
struct BenchmarkTruth {
  std::string station;
  std::string component;
  std::uint64_t seed = 0;
  double intercept = 0.0;
  double trend = 0.0;          // mm/yr
  double annual_amp = 0.0;     // mm
  double annual_phase = 0.0;   // rad
  double semiannual_amp = 0.0;
  double semiannual_phase = 0.0;
  double sigma = 0.0;          // mixture driver amplitude
  double phi_mix = 0.0;
  double kappa = -1.0;
};

struct BenchmarkOptions {
  std::size_t stations = 20;
  std::size_t n = 5000;
  double mjd_start = 50084.0;
};

// Generate the 60-series benchmark (20 stations x east/north/up, daily
// sampling) under output_dir, one file per series plus a truth manifest.
// Deterministic in master_seed; every draw comes from a stream derived with
// mix_seed, so series are independent of generation order.
std::vector<BenchmarkTruth> generate_benchmark(const std::filesystem::path& output_dir,
                                               std::uint64_t master_seed,
                                               const BenchmarkOptions& options = {});

}  // namespace tsa
