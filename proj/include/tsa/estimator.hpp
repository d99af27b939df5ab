#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tsa/covariance.hpp"
#include "tsa/linalg.hpp"
#include "tsa/noise_model.hpp"
#include "tsa/time_series.hpp"
#include "tsa/trajectory.hpp"

namespace tsa {

// ---- Generalized least squares ------------------------------------------

struct WlsSolution {
  std::vector<double> x;  // estimated coefficients
  Matrix cx;              // parameter covariance (A^T C^-1 A)^-1
};

// Whiten the design matrix and observations with the Cholesky factor of the
// noise covariance and solve the normal equations. Throws CollinearityError
// naming the offending columns when the whitened normal matrix is singular.
WlsSolution wls_fit(const DesignMatrix& design, const CholeskyFactor& chol,
                    std::span<const double> y);

// Gaussian log-likelihood of residuals r under covariance C = L L^T:
// -0.5 (N ln 2pi + ln det C + r^T C^-1 r).
double log_likelihood(const CholeskyFactor& chol, std::span<const double> residuals);

// Driver amplitude estimate from residuals under the unit-amplitude
// covariance factor: sqrt(r^T C1^-1 r / N).
double sigma_from_residuals(const CholeskyFactor& chol_unit,
                            std::span<const double> residuals);

// ---- Nelder-Mead ----------------------------------------------------------

struct MinimizerOptions {
  double xatol = 0.01;        // max infinity-norm spread of the simplex
  std::size_t max_iter = 2000;
  double step = 0.25;         // initial simplex displacement per coordinate
};

struct MinimizerResult {
  std::vector<double> x;
  double fmin = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

// Downhill simplex with reflection 1, expansion 2, contraction 0.5 and
// shrink 0.5. Terminates when every vertex is within xatol of the best one
// in the infinity norm, or at max_iter. Throws DomainError if the objective
// returns a non-finite value.
MinimizerResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> start,
                            const MinimizerOptions& options = {});

// ---- Maximum likelihood fit ----------------------------------------------

enum class AmplitudeMode {
  Profiled,  // sigma maximized in closed form at each objective evaluation
  Joint,     // amplitudes searched alongside the shape parameters
};

enum class SolvePath {
  Dense,     // exact covariance, packed Cholesky
  Toeplitz,  // stationary approximation, Levinson recursion
};

// Which noise parameters the minimizer may move; the rest stay at the values
// given in the family model.
struct FreeParams {
  bool kappa = false;
  bool kappa2 = false;
  bool phi = false;
  bool phi_mix = false;
  bool sigma = false;

  bool any_shape() const noexcept { return kappa || kappa2 || phi || phi_mix; }
  bool any() const noexcept { return any_shape() || sigma; }
  std::size_t shape_count() const noexcept;

  // Everything the kind can move: kappa for the power-law family, phi for
  // Ggm/Figgm, kappa2 for Figgm, phi_mix for the mixture, sigma always.
  static FreeParams all_for(NoiseKind kind);
};

struct FitOptions {
  MinimizerOptions minimizer;
  AmplitudeMode amplitude_mode = AmplitudeMode::Profiled;
  SolvePath path = SolvePath::Dense;
  std::size_t toeplitz_history = 0;  // 0 -> series length
  std::size_t max_restarts = 8;      // restart until the optimum is stable
};

struct FitResult {
  std::vector<double> coefficients;
  std::vector<std::string> labels;
  Matrix cx;
  std::vector<double> residuals;
  NoiseModel noise;          // fitted noise parameters, sigma included
  double ln_likelihood = 0.0;
  bool converged = true;
  bool at_boundary = false;  // some noise parameter ended on its bound
  std::size_t evaluations = 0;
  std::size_t restarts = 0;
};

// Fit trajectory coefficients and noise parameters by maximum likelihood.
//
// With no free noise parameters this reduces to a single generalized
// least-squares pass under the given model. Otherwise the free shape
// parameters are searched by Nelder-Mead (phi-like parameters through a
// logistic transform, kappa with a soft clamp to [-2, 0.1]); in Profiled
// mode the driver amplitude is maximized analytically at every evaluation.
FitResult mle_fit(const TimeSeries& series, const TrajectoryModel& trajectory,
                  const NoiseModel& family, const FreeParams& free_params,
                  const FitOptions& options = {});

}  // namespace tsa
