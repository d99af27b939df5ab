#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace tsa {

// Evenly sampled scalar series. Epochs are Modified Julian Dates in days,
// values in observation units (millimetres throughout the tooling).
struct TimeSeries {
  std::vector<double> mjd;
  std::vector<double> values;
  double sampling_days = 1.0;
  std::string station;
  std::string component;
  // Header lines of the source file, order preserved, for provenance.
  std::vector<std::pair<std::string, std::string>> headers;

  std::size_t size() const noexcept { return values.size(); }

  // Sampling frequency in cycles per year.
  double sampling_frequency_cpy() const { return 365.25 / sampling_days; }

  // Epochs in years since the first sample.
  std::vector<double> epochs_years() const;

  // Strictly increasing, uniformly spaced epochs (tolerance in days);
  // throws DomainError naming the first offending sample.
  void validate_uniform(double tol_days = 1e-6) const;
};

}  // namespace tsa
