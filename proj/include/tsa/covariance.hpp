#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tsa/linalg.hpp"
#include "tsa/noise_model.hpp"

namespace tsa {

// Covariance of n consecutive samples. For kinds whose covariance is exactly
// Toeplitz (white noise) the defining first row is kept alongside.
struct CovarianceMatrix {
  SymmetricPacked dense;
  std::optional<std::vector<double>> first_row;

  std::size_t dim() const noexcept { return dense.dim(); }
};

// Exact covariance of the filtered process started at sample 0:
// C(k, l) = sigma^2 sum_i h_i h_{i+l-k}, truncated to the available taps.
// O(n^2) time via per-diagonal cumulative sums.
CovarianceMatrix build_covariance(const NoiseModel& model, std::size_t n);

// Autocovariance row of the fully developed (stationary) process, the
// Toeplitz approximation used by the fast likelihood path: gamma_d is the
// tap autocorrelation accumulated over n + history taps. history = 0 picks n.
// Callers may apply it to a non-stationary model as an approximation.
std::vector<double> stationary_autocovariance(const NoiseModel& model, std::size_t n,
                                              std::size_t history = 0);

// Lower Cholesky factor C = L L^T, packed rows, with the log determinant
// accumulated during factorization: ln det C = 2 sum_i ln L(i,i).
struct CholeskyFactor {
  SymmetricPacked l;
  double ln_det = 0.0;

  std::size_t dim() const noexcept { return l.dim(); }

  // Solve L z = b (forward substitution): the whitening transform.
  void whiten_in_place(std::span<double> b) const;
  std::vector<double> whiten(std::span<const double> b) const;
  Matrix whiten_columns(const Matrix& a) const;

  // Full solve C x = b.
  std::vector<double> solve(std::span<const double> b) const;
};

// Throws FactorizationError (with the failing pivot index) when a pivot drops
// below 1e-12 times the largest diagonal entry.
CholeskyFactor cholesky(const SymmetricPacked& c);
CholeskyFactor cholesky(const CovarianceMatrix& c);

// Levinson solve of the symmetric positive definite Toeplitz system
// T x = b, T defined by its first row. O(n^2) time, O(n) workspace.
std::vector<double> toeplitz_solve(std::span<const double> first_row,
                                   std::span<const double> rhs);

// Shared-recursion variant: solves the same system for every column of rhs
// and reports ln det T from the recursion's beta products.
struct ToeplitzSolution {
  Matrix x;
  double ln_det = 0.0;
};
ToeplitzSolution toeplitz_solve_multi(std::span<const double> first_row, const Matrix& rhs);

}  // namespace tsa
