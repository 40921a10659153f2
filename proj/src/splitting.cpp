#include "l0flow/splitting.hpp"

#include <algorithm>

namespace l0flow {

TwoSidedSpec TwoSidedSpec::quadratic(Matrix A, Vector b, Vector lower_mag, Vector upper, double lambda) {
  TwoSidedSpec s;
  s.loss = std::make_shared<QuadraticLoss>(std::move(A), std::move(b));
  s.lower_mag = std::move(lower_mag);
  s.upper = std::move(upper);
  s.lambda = lambda;
  return s;
}

void TwoSidedSpec::validate() const {
  if (!loss) throw ConfigError("two-sided problem: loss is null");
  if (lower_mag.size() != upper.size() || loss->dimension() != upper.size()) {
    throw ConfigError("two-sided problem: lower, upper and loss dimensions differ");
  }
  if ((lower_mag.array() < 0).any()) throw ConfigError("two-sided problem: lower magnitudes must be >= 0");
  if ((upper.array() < 0).any()) throw ConfigError("two-sided problem: upper bounds must be >= 0");
  if (!(lambda > 0)) throw ConfigError("two-sided problem: lambda must be positive");
}

SplitLoss::SplitLoss(std::shared_ptr<const LossModel> base) : base_(std::move(base)) {
  if (!base_) throw ConfigError("split loss: base loss is null");
}

double SplitLoss::value(const Eigen::Ref<const Vector>& z) const {
  const Index n = base_->dimension();
  if (z.size() != 2 * n) throw ConfigError("split loss: dimension mismatch");
  return base_->value(z.head(n) - z.tail(n));
}

Vector SplitLoss::gradient(const Eigen::Ref<const Vector>& z) const {
  const Index n = base_->dimension();
  if (z.size() != 2 * n) throw ConfigError("split loss: dimension mismatch");
  const Vector g = base_->gradient(z.head(n) - z.tail(n));
  Vector out(2 * n);
  out << g, -g;
  return out;
}

ProblemSpec split(const TwoSidedSpec& spec) {
  spec.validate();
  const Index n = spec.dimension();
  Vector up(2 * n);
  up << spec.upper, spec.lower_mag;
  BoxSet box = BoxSet::one_sided(up);

  if (const auto* q = dynamic_cast<const QuadraticLoss*>(spec.loss.get())) {
    Matrix A2(q->matrix().rows(), 2 * n);
    A2 << q->matrix(), -q->matrix();
    if (spec.grad_bound) {
      auto loss = std::make_shared<QuadraticLoss>(std::move(A2), q->rhs());
      return ProblemSpec(std::move(loss), std::move(box), spec.lambda, *spec.grad_bound);
    }
    return ProblemSpec::quadratic(std::move(A2), q->rhs(), std::move(box), spec.lambda,
                                  GradBoundBranch::General);
  }
  if (!spec.grad_bound) {
    throw ConfigError("two-sided problem: non-quadratic losses need an explicit grad_bound");
  }
  return ProblemSpec(std::make_shared<SplitLoss>(spec.loss), std::move(box), spec.lambda,
                     *spec.grad_bound);
}

Vector split_point(const Eigen::Ref<const Vector>& y) {
  Vector z(2 * y.size());
  z << y.cwiseMax(0.0), (-y).cwiseMax(0.0);
  return z;
}

Vector recombine(const Eigen::Ref<const Vector>& x_plus, const Eigen::Ref<const Vector>& x_minus) {
  if (x_plus.size() != x_minus.size()) {
    throw ConfigError("recombine: x_plus has " + std::to_string(x_plus.size()) + " entries, x_minus has " +
                      std::to_string(x_minus.size()));
  }
  return x_plus - x_minus;
}

Recombined recombine_stacked(const Eigen::Ref<const Vector>& z, double zero_tol) {
  if (z.size() % 2 != 0) throw ConfigError("recombine: stacked vector has odd length");
  const Index n = z.size() / 2;
  Recombined r;
  r.x_plus = z.head(n);
  r.x_minus = z.tail(n);
  r.raw = recombine(r.x_plus, r.x_minus);
  const Vector m = r.x_plus.cwiseMin(r.x_minus);
  r.cleaned = recombine(r.x_plus - m, r.x_minus - m);
  for (Index i = 0; i < n; ++i) {
    if (m(i) >= zero_tol) r.complementarity_violations.push_back(i);
  }
  return r;
}

}  // namespace l0flow
