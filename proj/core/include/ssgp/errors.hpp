#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssgp {

/// Parameter or argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine could not meet its requested tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// Matrix is not positive semidefinite within the jitter budget.
class MatrixError : public std::runtime_error {
 public:
  MatrixError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// An increment has (numerically) zero variance.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(const std::string& what, long n, long j)
      : std::runtime_error(what), n_(n), j_(j) {}
  long n() const noexcept { return n_; }
  long j() const noexcept { return j_; }

 private:
  long n_;
  long j_;
};

class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

class StatisticsError : public std::runtime_error {
 public:
  explicit StatisticsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ssgp
