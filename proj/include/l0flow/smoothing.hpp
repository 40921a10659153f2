#pragma once

// Piecewise smoothing surrogate of the cardinality function on R_+.
//
//   theta(s, mu) = 3 s / (2 mu)                   s < mu/3
//                = 1 - 9 (s - mu)^2 / (8 mu^2)    mu/3 <= s <= mu
//                = 1                              s > mu
//
// theta is C^1 in s with a 9/(4 mu^2)-Lipschitz derivative, and C^1 in mu.
// Theta(x, mu) = sum_i theta(x_i, mu) tends to ||x||_0 on R^n_+ as mu -> 0.
// Negative s falls in the linear branch; the solver only relies on values
// inside the box.

#include <Eigen/Dense>

#include "l0flow/errors.hpp"

namespace l0flow {

template <typename Scalar>
struct SmoothEval {
  Scalar value;
  Scalar grad_s;
  Scalar grad_mu;
};

namespace detail {
template <typename Scalar>
inline void require_positive_mu(Scalar mu) {
  if (!(mu > Scalar(0))) throw DomainError("smoothing parameter mu must be positive");
}
}  // namespace detail

template <typename Scalar>
Scalar theta(Scalar s, Scalar mu) {
  detail::require_positive_mu(mu);
  if (s < mu / 3) return Scalar(3) * s / (Scalar(2) * mu);
  if (s <= mu) {
    const Scalar d = s - mu;
    return Scalar(1) - Scalar(9) * d * d / (Scalar(8) * mu * mu);
  }
  return Scalar(1);
}

template <typename Scalar>
Scalar theta_grad_s(Scalar s, Scalar mu) {
  detail::require_positive_mu(mu);
  if (s < mu / 3) return Scalar(3) / (Scalar(2) * mu);
  if (s <= mu) return Scalar(9) * (mu - s) / (Scalar(4) * mu * mu);
  return Scalar(0);
}

/// d theta / d mu. Nonpositive for s >= 0.
template <typename Scalar>
Scalar theta_grad_mu(Scalar s, Scalar mu) {
  detail::require_positive_mu(mu);
  if (mu > Scalar(3) * s) return -Scalar(3) * s / (Scalar(2) * mu * mu);
  if (s <= mu) return -Scalar(9) * (mu - s) * s / (Scalar(4) * mu * mu * mu);
  return Scalar(0);
}

template <typename Scalar>
SmoothEval<Scalar> theta_eval(Scalar s, Scalar mu) {
  return {theta(s, mu), theta_grad_s(s, mu), theta_grad_mu(s, mu)};
}

template <typename Derived>
typename Derived::Scalar theta_sum(const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar mu) {
  detail::require_positive_mu(mu);
  typename Derived::Scalar total(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) total += theta(x(i), mu);
  return total;
}

template <typename Derived>
typename Derived::PlainObject theta_sum_grad_x(const Eigen::MatrixBase<Derived>& x,
                                               typename Derived::Scalar mu) {
  detail::require_positive_mu(mu);
  typename Derived::PlainObject g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = theta_grad_s(x(i), mu);
  return g;
}

template <typename Derived>
typename Derived::Scalar theta_sum_grad_mu(const Eigen::MatrixBase<Derived>& x,
                                           typename Derived::Scalar mu) {
  detail::require_positive_mu(mu);
  typename Derived::Scalar total(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) total += theta_grad_mu(x(i), mu);
  return total;
}

/// sup over s in [0, cap] of |d theta / d mu|. The supremum over all s >= 0
/// is 9 / (16 mu), reached at s = mu / 2.
template <typename Scalar>
Scalar theta_grad_mu_sup(Scalar cap, Scalar mu) {
  detail::require_positive_mu(mu);
  if (cap <= Scalar(0)) return Scalar(0);
  const Scalar s = cap < mu / 2 ? cap : mu / 2;
  return -theta_grad_mu(s, mu);
}

}  // namespace l0flow
