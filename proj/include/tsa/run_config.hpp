#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace tsa {

// Flat key = value configuration shared by every subcommand. A config file
// supplies defaults, command-line flags override, and resolved() serializes
// the effective state into the '# key: value' provenance header written to
// every output, so any output can be regenerated from its own header.
struct RunConfig {
  // io
  std::string command;  // informational; lets an output header name its producer
  std::string input;
  std::string output;

  // noise model
  std::string noise = "plwn";
  double kappa = -1.0;
  double kappa2 = 0.0;
  double phi = 0.9;
  double phi_mix = 0.5;
  double sigma = 1.0;
  std::vector<std::string> fix;  // parameter names held fixed during fits

  // estimator
  double xatol = 0.01;
  std::size_t max_iter = 2000;
  std::string amplitude_mode = "profiled";  // or "joint"
  bool toeplitz = false;
  std::size_t toeplitz_history = 0;

  // trajectory
  int poly_degree = 1;
  bool annual = true;
  bool semiannual = true;
  std::vector<double> periods;      // extra periodic terms, years
  std::vector<double> offsets_mjd;  // step epochs

  // synthesis
  std::size_t n = 500;
  std::uint64_t seed = 0;
  double mjd_start = 50084.0;
  double sampling_days = 1.0;
  std::string station = "SYNT";
  std::string component = "E";
  std::size_t stations = 20;  // benchmark
  double intercept = 0.0;
  double trend = 0.0;
  double annual_cos = 0.0;
  double annual_sin = 0.0;
  double semiannual_cos = 0.0;
  double semiannual_sin = 0.0;
  std::vector<double> coefficients;  // explicit column values; wins when set

  // spectrum
  std::string method = "raw";  // or "welch"
  std::size_t segments = 4;
  std::size_t segment_length = 0;
  double overlap = 0.5;
  std::string window = "hann";
  bool detrend = true;

  // execution
  std::size_t jobs = 0;  // 0 -> hardware concurrency

  // Apply one key = value pair; throws SpecError on unknown keys or
  // unparseable values.
  void set(const std::string& key, const std::string& value);

  // True when the key was assigned through set()/load_file rather than left
  // at its built-in default. Lets commands pick command-specific defaults
  // (benchmark series length) without clobbering explicit requests.
  bool was_set(const std::string& key) const;

  // Parse a config file of '#'-comment and 'key = value' lines into *this.
  void load_file(const std::filesystem::path& path);

  // Effective configuration as ordered key/value pairs; feeding every pair
  // back through set() reproduces the state.
  std::vector<std::pair<std::string, std::string>> resolved() const;

 private:
  std::vector<std::string> assigned_;
};

}  // namespace tsa
