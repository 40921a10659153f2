#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>

#include "l0flow/errors.hpp"

namespace l0flow {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Componentwise median(lower, x, upper), i.e. the Euclidean projection onto
/// the box [lower, upper]. Requires lower <= upper.
template <typename DerivedX, typename DerivedL, typename DerivedU>
typename DerivedX::PlainObject project_box(const Eigen::MatrixBase<DerivedX>& x,
                                           const Eigen::MatrixBase<DerivedL>& lower,
                                           const Eigen::MatrixBase<DerivedU>& upper) {
  if (x.size() != lower.size() || x.size() != upper.size()) {
    throw ConfigError("project_box: dimension mismatch");
  }
  return x.cwiseMax(lower).cwiseMin(upper);
}

/// Gradient 2 A^T (A x - b) of the least-squares loss ||Ax - b||^2.
template <typename DerivedA, typename DerivedB, typename DerivedX>
VectorX<typename DerivedX::Scalar> quadratic_gradient(const Eigen::MatrixBase<DerivedA>& A,
                                                     const Eigen::MatrixBase<DerivedB>& b,
                                                     const Eigen::MatrixBase<DerivedX>& x) {
  if (A.cols() != x.size() || A.rows() != b.size()) {
    throw ConfigError("quadratic_gradient: A is " + std::to_string(A.rows()) + "x" +
                      std::to_string(A.cols()) + ", b has " + std::to_string(b.size()) +
                      " entries, x has " + std::to_string(x.size()));
  }
  return 2 * (A.transpose() * (A * x - b));
}

/// Feasible box {x : lower <= x <= upper}.
///
/// The penalized problem is posed on a one-sided box [0, upper]; two-sided
/// boxes only appear before variable splitting.
class BoxSet {
 public:
  BoxSet(Vector lower, Vector upper);

  static BoxSet one_sided(Vector upper);
  static BoxSet uniform(Index n, double k);

  Index size() const { return upper_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  bool is_one_sided() const;

  /// ||upper||_inf.
  double upper_max() const;
  /// Smallest nonzero upper bound; zero bounds pin a variable and are skipped.
  /// Returns +inf when every bound is zero.
  double upper_min_nonzero() const;

  bool contains(const Eigen::Ref<const Vector>& x, double tol = 0.0) const;
  Vector project(const Eigen::Ref<const Vector>& x) const { return project_box(x, lower_, upper_); }

 private:
  Vector lower_;
  Vector upper_;
};

inline Vector project_box(const Eigen::Ref<const Vector>& x, const BoxSet& box) {
  return box.project(x);
}

/// Smooth convex loss f with locally Lipschitz gradient. Implementations must
/// be convex; this is a documented contract and is not checked.
class LossModel {
 public:
  virtual ~LossModel() = default;
  virtual Index dimension() const = 0;
  virtual double value(const Eigen::Ref<const Vector>& x) const = 0;
  virtual Vector gradient(const Eigen::Ref<const Vector>& x) const = 0;
};

/// f(x) = ||A x - b||^2.
class QuadraticLoss final : public LossModel {
 public:
  QuadraticLoss(Matrix A, Vector b);

  Index dimension() const override { return A_.cols(); }
  double value(const Eigen::Ref<const Vector>& x) const override;
  Vector gradient(const Eigen::Ref<const Vector>& x) const override;

  const Matrix& matrix() const { return A_; }
  const Vector& rhs() const { return b_; }

 private:
  Matrix A_;
  Vector b_;
};

enum class GradBoundBranch {
  Auto,     ///< sign-aware shortcut when A and b are entrywise nonnegative
  General,  ///< always max(||C1||_inf, ||C2||_inf)
};

/// Upper bound on sup ||grad f(x)||_inf over [0, k]^n for f = ||Ax - b||^2.
///
/// With W = |A|, C1 = 2(W^T W k 1 - A^T b) and C2 = 2(-W^T W k 1 - A^T b),
/// the general branch returns max(||C1||_inf, ||C2||_inf). For nonnegative
/// data the gradient's j-th entry ranges over [-2(A^T b)_j, C1_j], so the
/// shortcut returns max(||C1||_inf, ||2 A^T b||_inf); the second term only
/// matters when b dominates A k 1.
double estimate_grad_bound(const Matrix& A, const Vector& b, double k,
                           GradBoundBranch branch = GradBoundBranch::Auto);

/// 0.9 * min{k, 3 lambda / (2 (k + L_f)), 2 lambda / (n L_f)}.
///
/// Uses the common bound k in place of both the smallest and largest box
/// bound, so the result satisfies the mu_star condition only when every
/// nonzero upper bound equals k. See select_mu_star(const BoxSet&, ...) for
/// heterogeneous boxes.
double select_mu_star(double k, double lambda, Index n, double grad_bound);

/// Same rule with the true smallest nonzero and largest bounds of `box`.
double select_mu_star(const BoxSet& box, double lambda, double grad_bound);

/// Throws ConfigError naming the violated term unless
/// 0 < mu_star < min{v_min, 3 lambda / (2 (v_max + L_f)), 2 lambda / (n L_f)}.
void check_mu_star(const BoxSet& box, double lambda, double grad_bound, double mu_star);

/// The penalized problem min f(x) + lambda ||x||_0 over a one-sided box.
///
/// Immutable after construction; copies share the loss.
class ProblemSpec {
 public:
  /// Validates dimensions, lambda > 0, and that `grad_bound` dominates
  /// ||grad f||_inf on a deterministic sample of box points (all corners for
  /// n <= 10, random corners and interior points otherwise).
  ProblemSpec(std::shared_ptr<const LossModel> loss, BoxSet box, double lambda, double grad_bound);

  /// Quadratic problem with the gradient bound computed by
  /// estimate_grad_bound on [0, ||upper||_inf]^n.
  static ProblemSpec quadratic(Matrix A, Vector b, BoxSet box, double lambda,
                               GradBoundBranch branch = GradBoundBranch::Auto);

  Index dimension() const { return box_.size(); }
  const LossModel& loss() const { return *loss_; }
  std::shared_ptr<const LossModel> loss_ptr() const { return loss_; }
  /// Non-null when the loss is a QuadraticLoss.
  const QuadraticLoss* quadratic_loss() const;
  const BoxSet& box() const { return box_; }
  double lambda() const { return lambda_; }
  double grad_bound() const { return grad_bound_; }

  /// f(x) + lambda * Theta(x, mu).
  double objective_smooth(const Eigen::Ref<const Vector>& x, double mu) const;
  /// f(x) + lambda * #{i : |x_i| > zero_tol}.
  double objective_true(const Eigen::Ref<const Vector>& x, double zero_tol = 0.0) const;

 private:
  std::shared_ptr<const LossModel> loss_;
  BoxSet box_;
  double lambda_;
  double grad_bound_;
};

/// #{i : |x_i| > zero_tol}.
Index cardinality(const Eigen::Ref<const Vector>& x, double zero_tol = 0.0);

}  // namespace l0flow
