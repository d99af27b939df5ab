#include "tsa/linalg.hpp"

#include <cmath>
#include <string>

#include "tsa/errors.hpp"

namespace tsa {

Matrix spd_cholesky_lower(const Matrix& spd) {
  const std::size_t m = spd.rows();
  if (m != spd.cols()) throw DomainError("spd_cholesky_lower: matrix not square");
  Matrix l(m, m);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < m; ++i) max_diag = std::max(max_diag, spd(i, i));
  const double floor = 1e-12 * max_diag;
  for (std::size_t j = 0; j < m; ++j) {
    double s = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
    if (!(s > floor)) {
      throw FactorizationError(
          "cholesky pivot " + std::to_string(j) + " not positive definite", j);
    }
    const double d = std::sqrt(s);
    l(j, j) = d;
    for (std::size_t i = j + 1; i < m; ++i) {
      double v = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / d;
    }
  }
  return l;
}

std::vector<double> spd_solve(const Matrix& spd, std::span<const double> b) {
  const Matrix l = spd_cholesky_lower(spd);
  const std::size_t m = l.rows();
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t i = 0; i < m; ++i) {
    double v = x[i];
    for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x[k];
    x[i] = v / l(i, i);
  }
  for (std::size_t ii = m; ii-- > 0;) {
    double v = x[ii];
    for (std::size_t k = ii + 1; k < m; ++k) v -= l(k, ii) * x[k];
    x[ii] = v / l(ii, ii);
  }
  return x;
}

Matrix spd_inverse(const Matrix& spd) {
  const std::size_t m = spd.rows();
  const Matrix l = spd_cholesky_lower(spd);
  Matrix inv(m, m);
  std::vector<double> e(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    e.assign(m, 0.0);
    e[j] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      double v = e[i];
      for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * e[k];
      e[i] = v / l(i, i);
    }
    for (std::size_t ii = m; ii-- > 0;) {
      double v = e[ii];
      for (std::size_t k = ii + 1; k < m; ++k) v -= l(k, ii) * e[k];
      e[ii] = v / l(ii, ii);
    }
    for (std::size_t i = 0; i < m; ++i) inv(i, j) = e[i];
  }
  return inv;
}

}  // namespace tsa
