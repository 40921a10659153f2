#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "l0flow/model.hpp"

namespace l0flow {

/// min f(y) + lambda ||y||_0 subject to -lower_mag <= y <= upper.
struct TwoSidedSpec {
  std::shared_ptr<const LossModel> loss;
  Vector lower_mag;
  Vector upper;
  double lambda = 1.0;
  /// Required for non-quadratic losses; quadratic losses get it computed.
  std::optional<double> grad_bound;

  static TwoSidedSpec quadratic(Matrix A, Vector b, Vector lower_mag, Vector upper, double lambda);

  Index dimension() const { return upper.size(); }
  void validate() const;
};

/// g(x+, x-) = f(x+ - x-) on R^{2n}.
class SplitLoss final : public LossModel {
 public:
  explicit SplitLoss(std::shared_ptr<const LossModel> base);
  Index dimension() const override { return 2 * base_->dimension(); }
  double value(const Eigen::Ref<const Vector>& z) const override;
  Vector gradient(const Eigen::Ref<const Vector>& z) const override;

 private:
  std::shared_ptr<const LossModel> base_;
};

/// One-sided problem over (x+, x-) in [0, u] x [0, l]. Quadratic losses
/// become ||[A, -A] z - b||^2 with the bound from the general branch of
/// estimate_grad_bound at k = max(||u||_inf, ||l||_inf).
ProblemSpec split(const TwoSidedSpec& spec);

/// (max(y, 0), max(-y, 0)) stacked into one 2n vector.
Vector split_point(const Eigen::Ref<const Vector>& y);

/// x+ - x-.
Vector recombine(const Eigen::Ref<const Vector>& x_plus, const Eigen::Ref<const Vector>& x_minus);

struct Recombined {
  Vector raw;
  /// From x+ - m and x- - m with m = min(x+, x-).
  Vector cleaned;
  Vector x_plus;
  Vector x_minus;
  /// Indices with min(x+_i, x-_i) >= zero_tol.
  std::vector<Index> complementarity_violations;
};

/// Recombines a stacked 2n point.
Recombined recombine_stacked(const Eigen::Ref<const Vector>& z, double zero_tol);

}  // namespace l0flow
