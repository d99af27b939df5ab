#pragma once

#include <string>

#include "tsa/estimator.hpp"
#include "tsa/run_config.hpp"

namespace tsa {

// Subcommand bodies. Each returns a process exit code (0 success, 2 fit
// convergence warning) and throws the library's typed errors otherwise;
// run_command maps those to exit codes 3 (input/spec) and 4 (I/O).
int cmd_simulate(const RunConfig& config);
int cmd_fit(const RunConfig& config);
int cmd_spectrum(const RunConfig& config);
int cmd_benchmark(const RunConfig& config);

int run_command(const std::string& name, const RunConfig& config);

// Shared helpers, exposed for tests.
TrajectoryModel trajectory_from_config(const RunConfig& config, double mjd_start);
NoiseModel noise_from_config(const RunConfig& config);
FreeParams free_params_from_config(const RunConfig& config);
std::string fit_report(const FitResult& fit, const TimeSeries& series,
                       const RunConfig& config, double runtime_s);

}  // namespace tsa
