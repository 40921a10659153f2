#pragma once

#include "l0flow/model.hpp"

namespace l0flow {

struct BoxLsqResult {
  Vector x;
  double residual = 0.0;  ///< ||x - P[x - 2 A^T (A x - b)]||_inf
  int iterations = 0;
  bool converged = false;
};

/// min ||A x - b||^2 subject to 0 <= x <= upper, by projected Newton steps on
/// the free variables with a projected-gradient fallback.
BoxLsqResult box_least_squares(const Matrix& A, const Vector& b, const Vector& upper,
                               const Eigen::Ref<const Vector>& x_start, double tol = 1e-12,
                               int max_iter = 1000);

}  // namespace l0flow
