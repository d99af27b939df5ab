#include "tsa/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsa/errors.hpp"

namespace tsa {

namespace {

// Scaled taps g = amplitude * h so that C = sum_i g_i g_{i+d} directly.
std::vector<double> scaled_taps(const FilterCoefficients& fc, double amplitude) {
  std::vector<double> g(fc.h.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = amplitude * fc.h[i];
  return g;
}

// Fill the packed lower triangle with C(i,j) = sum_{m<=j} g_m g_{m+i-j},
// using the diagonal recurrence C(i,j) = C(i-1,j-1) + g_j g_i.
void fill_filtered_covariance(SymmetricPacked& c, std::span<const double> g) {
  const std::size_t n = c.dim();
  auto& a = c.packed();
  std::size_t row = 0;      // start of row i
  std::size_t prev = 0;     // start of row i-1
  for (std::size_t i = 0; i < n; ++i) {
    prev = row;
    row = i * (i + 1) / 2;
    const double gi = g[i];
    a[row] = g[0] * gi;
    for (std::size_t j = 1; j <= i; ++j) {
      a[row + j] = a[prev + j - 1] + g[j] * gi;
    }
  }
}

}  // namespace

CovarianceMatrix build_covariance(const NoiseModel& model, std::size_t n) {
  model.validate();
  if (n == 0) throw DomainError("build_covariance: empty request (n = 0)");

  CovarianceMatrix c;
  c.dense = SymmetricPacked(n);
  const double s2 = model.sigma * model.sigma;

  if (model.kind == NoiseKind::White) {
    for (std::size_t i = 0; i < n; ++i) c.dense.lower(i, i) = s2;
    std::vector<double> row(n, 0.0);
    row[0] = s2;
    c.first_row = std::move(row);
    return c;
  }

  if (model.kind == NoiseKind::PowerLawPlusWhite) {
    const FilterCoefficients fc = powerlaw_filter(model.kappa, n);
    fill_filtered_covariance(c.dense, scaled_taps(fc, model.sigma_pl()));
    const double w2 = model.sigma_w() * model.sigma_w();
    for (std::size_t i = 0; i < n; ++i) c.dense.lower(i, i) += w2;
    return c;
  }

  const FilterCoefficients fc = filter_coefficients(model, n);
  fill_filtered_covariance(c.dense, scaled_taps(fc, model.sigma));
  return c;
}

std::vector<double> stationary_autocovariance(const NoiseModel& model, std::size_t n,
                                              std::size_t history) {
  model.validate();
  if (n == 0) throw DomainError("stationary_autocovariance: empty request (n = 0)");
  if (history == 0) history = n;

  std::vector<double> gamma(n, 0.0);
  if (model.kind == NoiseKind::White) {
    gamma[0] = model.sigma * model.sigma;
    return gamma;
  }

  const std::size_t len = n + history;
  const bool mixture = model.kind == NoiseKind::PowerLawPlusWhite;
  const FilterCoefficients fc = mixture ? powerlaw_filter(model.kappa, len)
                                        : filter_coefficients(model, len);
  const std::vector<double> g =
      scaled_taps(fc, mixture ? model.sigma_pl() : model.sigma);

  for (std::size_t d = 0; d < n; ++d) {
    double s = 0.0;
    const std::size_t m = len - d;
    for (std::size_t i = 0; i < m; ++i) s += g[i] * g[i + d];
    gamma[d] = s;
  }
  if (mixture) gamma[0] += model.sigma_w() * model.sigma_w();
  return gamma;
}

void CholeskyFactor::whiten_in_place(std::span<double> b) const {
  const std::size_t n = dim();
  const auto& a = l.packed();
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[row + k] * b[k];
    b[i] = s / a[row + i];
    row += i + 1;
  }
}

std::vector<double> CholeskyFactor::whiten(std::span<const double> b) const {
  std::vector<double> z(b.begin(), b.end());
  whiten_in_place(z);
  return z;
}

Matrix CholeskyFactor::whiten_columns(const Matrix& m) const {
  Matrix out = m;
  for (std::size_t j = 0; j < out.cols(); ++j) whiten_in_place(out.col(j));
  return out;
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
  std::vector<double> x = whiten(b);
  const std::size_t n = dim();
  const auto& a = l.packed();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= a[k * (k + 1) / 2 + ii] * x[k];
    x[ii] = s / a[ii * (ii + 1) / 2 + ii];
  }
  return x;
}

CholeskyFactor cholesky(const SymmetricPacked& c) {
  const std::size_t n = c.dim();
  if (n == 0) throw DomainError("cholesky: empty matrix");

  CholeskyFactor f;
  f.l = c;
  auto& a = f.l.packed();

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_diag = std::max(max_diag, a[i * (i + 1) / 2 + i]);
  }
  const double floor = 1e-12 * max_diag;

  double ln_det = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double* ri = a.data() + i * (i + 1) / 2;
    const double* rj = a.data();
    for (std::size_t j = 0; j < i; ++j) {
      double s = ri[j];
      for (std::size_t k = 0; k < j; ++k) s -= ri[k] * rj[k];
      ri[j] = s / rj[j];
      rj += j + 1;
    }
    double s = ri[i];
    for (std::size_t k = 0; k < i; ++k) s -= ri[k] * ri[k];
    if (!(s > floor) || !std::isfinite(s)) {
      throw FactorizationError(
          "covariance not positive definite at pivot " + std::to_string(i), i);
    }
    ri[i] = std::sqrt(s);
    ln_det += std::log(s);
  }
  f.ln_det = ln_det;
  return f;
}

CholeskyFactor cholesky(const CovarianceMatrix& c) { return cholesky(c.dense); }

ToeplitzSolution toeplitz_solve_multi(std::span<const double> first_row,
                                      const Matrix& rhs) {
  const std::size_t n = first_row.size();
  if (n == 0) throw DomainError("toeplitz_solve_multi: empty system");
  if (rhs.rows() != n) throw DomainError("toeplitz_solve_multi: rhs dimension mismatch");
  const double r0 = first_row[0];
  if (!(r0 > 0.0)) throw ConditioningError("toeplitz system: non-positive diagonal");

  const std::size_t m = rhs.cols();
  ToeplitzSolution sol;
  sol.x = Matrix(n, m);
  sol.ln_det = static_cast<double>(n) * std::log(r0);

  // Normalized first row t_k = r_k / r_0; solve the unit-diagonal system for
  // b / r_0 columnwise while sharing the Yule-Walker recursion (Levinson).
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = first_row[k] / r0;

  for (std::size_t j = 0; j < m; ++j) sol.x(0, j) = rhs(0, j) / r0;
  if (n == 1) return sol;

  std::vector<double> y(n, 0.0);
  y[0] = -t[1];
  double alpha = -t[1];
  double beta = 1.0;

  for (std::size_t k = 1; k < n; ++k) {
    beta *= (1.0 - alpha * alpha);
    if (!(beta > 1e-12) || !std::isfinite(beta)) {
      throw ConditioningError("toeplitz system lost positive definiteness at order " +
                              std::to_string(k));
    }
    sol.ln_det += std::log(beta);

    for (std::size_t j = 0; j < m; ++j) {
      double s = rhs(k, j) / r0;
      for (std::size_t i = 0; i < k; ++i) s -= t[k - i] * sol.x(i, j);
      const double mu = s / beta;
      double* xj = sol.x.col(j).data();
      for (std::size_t i = 0; i < k; ++i) xj[i] += mu * y[k - 1 - i];
      xj[k] = mu;
    }

    if (k + 1 < n) {
      double s = -t[k + 1];
      for (std::size_t i = 0; i < k; ++i) s -= t[k - i] * y[i];
      alpha = s / beta;
      for (std::size_t i = 0, jj = k - 1; i < jj; ++i, --jj) {
        const double yi = y[i] + alpha * y[jj];
        y[jj] += alpha * y[i];
        y[i] = yi;
      }
      if ((k & 1) == 1) y[k / 2] += alpha * y[k / 2];
      y[k] = alpha;
    }
  }
  return sol;
}

std::vector<double> toeplitz_solve(std::span<const double> first_row,
                                   std::span<const double> rhs) {
  if (rhs.size() != first_row.size()) {
    throw DomainError("toeplitz_solve: rhs dimension mismatch");
  }
  Matrix b(rhs.size(), 1);
  std::copy(rhs.begin(), rhs.end(), b.col(0).begin());
  ToeplitzSolution sol = toeplitz_solve_multi(first_row, b);
  const auto col = sol.x.col(0);
  return {col.begin(), col.end()};
}

}  // namespace tsa
