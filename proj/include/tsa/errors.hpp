#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsa {

// Argument outside its documented domain (bad spectral index, empty request, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed model or run specification (duplicate terms, unknown noise name, ...).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text that violates the series file contract; messages carry line numbers.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failure (unreadable input, unwritable output).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cholesky factorization hit a non-positive pivot; carries the failing index.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, std::size_t pivot)
      : std::runtime_error(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

// Levinson recursion lost positive definiteness (near-singular Toeplitz system).
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rank-deficient normal equations; carries the labels of the implicated columns.
class CollinearityError : public std::runtime_error {
 public:
  CollinearityError(const std::string& what, std::vector<std::string> columns)
      : std::runtime_error(what), columns_(std::move(columns)) {}
  const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::vector<std::string> columns_;
};

}  // namespace tsa
