#include "tsa/time_series.hpp"

#include <cmath>
#include <string>

#include "tsa/errors.hpp"

namespace tsa {

std::vector<double> TimeSeries::epochs_years() const {
  std::vector<double> t(mjd.size());
  if (mjd.empty()) return t;
  const double t0 = mjd.front();
  for (std::size_t i = 0; i < mjd.size(); ++i) t[i] = (mjd[i] - t0) / 365.25;
  return t;
}

void TimeSeries::validate_uniform(double tol_days) const {
  if (mjd.size() != values.size()) {
    throw DomainError("time series: epoch/value count mismatch");
  }
  if (mjd.empty()) throw DomainError("time series: empty");
  for (std::size_t i = 1; i < mjd.size(); ++i) {
    const double dt = mjd[i] - mjd[i - 1];
    if (!(dt > 0.0)) {
      throw DomainError("time series: epochs not strictly increasing at sample " +
                        std::to_string(i));
    }
    if (std::abs(dt - sampling_days) > tol_days) {
      throw DomainError("time series: non-uniform sampling at sample " +
                        std::to_string(i));
    }
  }
}

}  // namespace tsa
