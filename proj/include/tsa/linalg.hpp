#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsa {

// Dense column-major matrix. Column-major so that design-matrix columns are
// contiguous for whitening and normal-equation products.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Symmetric matrix, packed lower triangle in row-major order: row i holds the
// i+1 entries (i,0)..(i,i) contiguously. Contiguous rows make the Cholesky
// inner loops plain dot products over adjacent memory.
class SymmetricPacked {
 public:
  SymmetricPacked() = default;
  explicit SymmetricPacked(std::size_t n) : n_(n), a_(n * (n + 1) / 2, 0.0) {}

  std::size_t dim() const noexcept { return n_; }

  double& lower(std::size_t i, std::size_t j) { return a_[tri(i) + j]; }
  double lower(std::size_t i, std::size_t j) const { return a_[tri(i) + j]; }

  // Mirrored access for any (i,j).
  double at(std::size_t i, std::size_t j) const {
    return i >= j ? a_[tri(i) + j] : a_[tri(j) + i];
  }
  double& at(std::size_t i, std::size_t j) {
    return i >= j ? a_[tri(i) + j] : a_[tri(j) + i];
  }

  std::span<double> row(std::size_t i) { return {a_.data() + tri(i), i + 1}; }
  std::span<const double> row(std::size_t i) const { return {a_.data() + tri(i), i + 1}; }

  std::vector<double>& packed() noexcept { return a_; }
  const std::vector<double>& packed() const noexcept { return a_; }

 private:
  static std::size_t tri(std::size_t i) noexcept { return i * (i + 1) / 2; }

  std::size_t n_ = 0;
  std::vector<double> a_;
};

// Helpers for the small (M x M) symmetric positive definite systems that show
// up in the normal equations. Throw FactorizationError on a failed pivot.
Matrix spd_cholesky_lower(const Matrix& spd);
std::vector<double> spd_solve(const Matrix& spd, std::span<const double> b);
Matrix spd_inverse(const Matrix& spd);

}  // namespace tsa
