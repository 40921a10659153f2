#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace l0flow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid problem or parameter configuration (dimension mismatch, a
/// violated parameter-selection condition, nonpositive inputs).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data. `row()` is 1-based; 0 when not tied to a row.
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t row = 0) : Error(what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// The integrator produced a non-finite state.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double t, Eigen::VectorXd last_finite)
      : Error(what), t_(t), last_finite_(std::move(last_finite)) {}
  double time() const { return t_; }
  const Eigen::VectorXd& last_finite_state() const { return last_finite_; }

 private:
  double t_;
  Eigen::VectorXd last_finite_;
};

/// A guarantee that must hold by construction was observed to fail. This
/// points at a misconfigured mu_star or grad_bound rather than bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace l0flow
