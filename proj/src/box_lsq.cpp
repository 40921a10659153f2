#include "l0flow/box_lsq.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace l0flow {

namespace {

double spectral_sq_bound(const Matrix& A) {
  // Power iteration on A^T A, padded; exactness is not needed for a step size.
  const Index n = A.cols();
  if (n == 0 || A.rows() == 0) return 0.0;
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double lam = 0;
  for (int it = 0; it < 100; ++it) {
    Vector w = A.transpose() * (A * v);
    const double nw = w.norm();
    if (nw == 0) break;
    const double next = v.dot(w);
    v = w / nw;
    if (std::abs(next - lam) <= 1e-10 * next) {
      lam = next;
      break;
    }
    lam = next;
  }
  return std::min(1.05 * lam + 1e-300, A.squaredNorm());
}

}  // namespace

BoxLsqResult box_least_squares(const Matrix& A, const Vector& b, const Vector& upper,
                               const Eigen::Ref<const Vector>& x_start, double tol, int max_iter) {
  const Index n = A.cols();
  if (A.rows() != b.size() || upper.size() != n || x_start.size() != n) {
    throw ConfigError("box_least_squares: dimension mismatch");
  }
  BoxLsqResult out;
  Vector x = x_start.cwiseMax(0.0).cwiseMin(upper);
  if (n == 0) {
    out.x = x;
    out.converged = true;
    return out;
  }

  const double L = 2 * spectral_sq_bound(A);
  const Vector atb = A.transpose() * b;
  const double scale = 2 * (A.squaredNorm() * std::max(1.0, upper.lpNorm<Eigen::Infinity>()) +
                            atb.lpNorm<Eigen::Infinity>());
  const double eff_tol = std::max(tol, 1e-14 * scale);

  auto value = [&](const Vector& z) { return (A * z - b).squaredNorm(); };
  auto grad = [&](const Vector& z) -> Vector { return 2 * (A.transpose() * (A * z - b)); };
  auto clamp = [&](const Vector& z) -> Vector { return z.cwiseMax(0.0).cwiseMin(upper); };
  auto pg_residual = [&](const Vector& z) { return (z - clamp(z - grad(z))).lpNorm<Eigen::Infinity>(); };

  double fx = value(x);
  for (int it = 0; it < max_iter; ++it) {
    const Vector g = grad(x);
    out.residual = (x - clamp(x - g)).lpNorm<Eigen::Infinity>();
    out.iterations = it;
    if (out.residual <= eff_tol) {
      out.converged = true;
      break;
    }

    std::vector<Index> free;
    for (Index i = 0; i < n; ++i) {
      const bool at_lower = x(i) <= 0 && g(i) > 0;
      const bool at_upper = x(i) >= upper(i) && g(i) < 0;
      if (!at_lower && !at_upper) free.push_back(i);
    }

    Vector candidate = x;
    double fc = fx;
    bool refined = false;
    if (!free.empty()) {
      Matrix AF(A.rows(), static_cast<Index>(free.size()));
      for (std::size_t j = 0; j < free.size(); ++j) AF.col(static_cast<Index>(j)) = A.col(free[j]);
      // minimum-norm step, so rank-deficient blocks move as little as possible
      const Vector dF = AF.completeOrthogonalDecomposition().solve(b - A * x);
      Vector d = Vector::Zero(n);
      for (std::size_t j = 0; j < free.size(); ++j) d(free[j]) = dF(static_cast<Index>(j));

      // near the solution the decrease in f drops below its rounding error;
      // a full step that shrinks the residual is then taken on that basis
      const Vector xfull = clamp(x + d);
      const double ffull = value(xfull);
      if (ffull <= fx + 1e-15 * (1 + fx) && pg_residual(xfull) < 0.5 * out.residual) {
        candidate = xfull;
        fc = ffull;
        refined = true;
      }

      double alpha = 1;
      for (int ls = 0; ls < 40 && !refined; ++ls, alpha *= 0.5) {
        const Vector xn = clamp(x + alpha * d);
        const double fn = value(xn);
        if (fn <= fx + 1e-4 * g.dot(xn - x) && fn < fc) {
          candidate = xn;
          fc = fn;
          break;
        }
      }
    }

    const Vector xpg = clamp(x - g / L);
    const double fpg = value(xpg);
    if (!refined && fpg < fc) {
      candidate = xpg;
      fc = fpg;
    }
    if ((!refined && !(fc < fx)) || candidate == x) {
      out.converged = out.residual <= std::max(eff_tol, 1e-10 * scale);
      break;
    }
    x = candidate;
    fx = fc;
  }
  out.x = x;
  out.residual = pg_residual(x);
  if (out.residual <= eff_tol) out.converged = true;
  return out;
}

}  // namespace l0flow
