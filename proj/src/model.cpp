#include "l0flow/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "l0flow/smoothing.hpp"

namespace l0flow {

BoxSet::BoxSet(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw ConfigError("box: lower has " + std::to_string(lower_.size()) + " entries, upper has " +
                      std::to_string(upper_.size()));
  }
  for (Index i = 0; i < upper_.size(); ++i) {
    if (!std::isfinite(lower_(i)) || !std::isfinite(upper_(i))) {
      throw ConfigError("box: bound " + std::to_string(i) + " is not finite");
    }
    if (lower_(i) > upper_(i)) {
      throw ConfigError("box: lower bound exceeds upper bound at index " + std::to_string(i));
    }
  }
}

BoxSet BoxSet::one_sided(Vector upper) {
  if ((upper.array() < 0).any()) throw ConfigError("box: upper bounds must be nonnegative");
  Vector lower = Vector::Zero(upper.size());
  return BoxSet(std::move(lower), std::move(upper));
}

BoxSet BoxSet::uniform(Index n, double k) {
  if (!(k >= 0)) throw ConfigError("box: common bound k must be nonnegative");
  return one_sided(Vector::Constant(n, k));
}

bool BoxSet::is_one_sided() const { return (lower_.array() == 0).all(); }

double BoxSet::upper_max() const { return upper_.size() == 0 ? 0.0 : upper_.cwiseAbs().maxCoeff(); }

double BoxSet::upper_min_nonzero() const {
  double v = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < upper_.size(); ++i) {
    if (upper_(i) != 0) v = std::min(v, upper_(i));
  }
  return v;
}

bool BoxSet::contains(const Eigen::Ref<const Vector>& x, double tol) const {
  if (x.size() != size()) return false;
  return ((x - lower_).array() >= -tol).all() && ((upper_ - x).array() >= -tol).all();
}

QuadraticLoss::QuadraticLoss(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) {
    throw ConfigError("quadratic loss: A has " + std::to_string(A_.rows()) + " rows but b has " +
                      std::to_string(b_.size()) + " entries");
  }
  if (!A_.allFinite() || !b_.allFinite()) throw ConfigError("quadratic loss: non-finite data");
}

double QuadraticLoss::value(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != A_.cols()) throw ConfigError("quadratic loss: dimension mismatch");
  return (A_ * x - b_).squaredNorm();
}

Vector QuadraticLoss::gradient(const Eigen::Ref<const Vector>& x) const {
  return quadratic_gradient(A_, b_, x);
}

double estimate_grad_bound(const Matrix& A, const Vector& b, double k, GradBoundBranch branch) {
  if (!(k > 0)) throw ConfigError("estimate_grad_bound: k must be positive");
  if (A.rows() != b.size()) throw ConfigError("estimate_grad_bound: dimension mismatch");
  if (A.size() == 0) return 0.0;

  const Matrix W = A.cwiseAbs();
  const Vector spread = W.transpose() * (W * Vector::Constant(A.cols(), k));
  const Vector atb = A.transpose() * b;
  const Vector c1 = 2 * (spread - atb);

  const bool nonnegative = (A.array() >= 0).all() && (b.array() >= 0).all();
  if (branch == GradBoundBranch::Auto && nonnegative) {
    return std::max(c1.lpNorm<Eigen::Infinity>(), 2 * atb.lpNorm<Eigen::Infinity>());
  }
  const Vector c2 = 2 * (-spread - atb);
  return std::max(c1.lpNorm<Eigen::Infinity>(), c2.lpNorm<Eigen::Infinity>());
}

namespace {

double min_of_terms(double v_min, double v_max, double lambda, Index n, double grad_bound) {
  const double inf = std::numeric_limits<double>::infinity();
  const double t2 = 3 * lambda / (2 * (v_max + grad_bound));
  const double t3 = grad_bound > 0 ? 2 * lambda / (static_cast<double>(n) * grad_bound) : inf;
  return std::min({v_min, t2, t3});
}

}  // namespace

double select_mu_star(double k, double lambda, Index n, double grad_bound) {
  if (!(k > 0) || !(lambda > 0) || n <= 0 || !(grad_bound > 0)) {
    throw ConfigError("select_mu_star: k, lambda, n and grad_bound must all be positive");
  }
  return 0.9 * min_of_terms(k, k, lambda, n, grad_bound);
}

double select_mu_star(const BoxSet& box, double lambda, double grad_bound) {
  if (!(lambda > 0) || !(grad_bound >= 0)) {
    throw ConfigError("select_mu_star: lambda must be positive and grad_bound nonnegative");
  }
  const double v_min = box.upper_min_nonzero();
  if (!std::isfinite(v_min)) throw ConfigError("select_mu_star: every variable is pinned to zero");
  return 0.9 * min_of_terms(v_min, box.upper_max(), lambda, box.size(), grad_bound);
}

void check_mu_star(const BoxSet& box, double lambda, double grad_bound, double mu_star) {
  if (!(mu_star > 0)) throw ConfigError("mu_star must be positive");
  const double v_min = box.upper_min_nonzero();
  const double v_max = box.upper_max();
  auto fail = [&](const std::string& term, double bound) {
    std::ostringstream os;
    os.precision(6);
    os << "mu_star = " << mu_star << " violates mu_star < " << term << " = " << bound;
    throw ConfigError(os.str());
  };
  if (!(mu_star < v_min)) fail("v_min (smallest nonzero upper bound)", v_min);
  const double t2 = 3 * lambda / (2 * (v_max + grad_bound));
  if (!(mu_star < t2)) fail("3*lambda/(2*(v_max+L_f))", t2);
  if (grad_bound > 0) {
    const double t3 = 2 * lambda / (static_cast<double>(box.size()) * grad_bound);
    if (!(mu_star < t3)) fail("2*lambda/(n*L_f)", t3);
  }
}

namespace {

// Deterministic sample of box points for the gradient-bound sanity check.
// Quadratic gradients are affine, so their sup-norm peaks at corners.
void check_grad_bound(const LossModel& loss, const BoxSet& box, double grad_bound) {
  const Index n = box.size();
  auto probe = [&](const Vector& x) {
    const double g = loss.gradient(x).lpNorm<Eigen::Infinity>();
    if (g > grad_bound * (1 + 1e-12) + 1e-12) {
      std::ostringstream os;
      os << "grad_bound = " << grad_bound << " is below ||grad f(x)||_inf = " << g
         << " at a sampled box point";
      throw ConfigError(os.str());
    }
  };
  if (n == 0) return;
  if (n <= 10) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Vector x(n);
      for (Index i = 0; i < n; ++i) x(i) = (mask >> i) & 1u ? box.upper()(i) : box.lower()(i);
      probe(x);
    }
    return;
  }
  std::mt19937_64 gen(0x6c30666c6f77ULL);
  for (int s = 0; s < 64; ++s) {
    Vector x(n);
    for (Index i = 0; i < n; ++i) {
      const std::uint64_t r = gen();
      if (s % 2 == 0) {
        x(i) = (r & 1u) ? box.upper()(i) : box.lower()(i);
      } else {
        const double u = static_cast<double>(r >> 11) * 0x1.0p-53;
        x(i) = box.lower()(i) + u * (box.upper()(i) - box.lower()(i));
      }
    }
    probe(x);
  }
}

}  // namespace

ProblemSpec::ProblemSpec(std::shared_ptr<const LossModel> loss, BoxSet box, double lambda,
                         double grad_bound)
    : loss_(std::move(loss)), box_(std::move(box)), lambda_(lambda), grad_bound_(grad_bound) {
  if (!loss_) throw ConfigError("problem: loss is null");
  if (loss_->dimension() != box_.size()) {
    throw ConfigError("problem: loss dimension " + std::to_string(loss_->dimension()) +
                      " does not match box dimension " + std::to_string(box_.size()));
  }
  if (!box_.is_one_sided()) {
    throw ConfigError("problem: box must have zero lower bounds; split two-sided problems first");
  }
  if (!(lambda_ > 0) || !std::isfinite(lambda_)) throw ConfigError("problem: lambda must be positive");
  if (!(grad_bound_ >= 0) || !std::isfinite(grad_bound_)) {
    throw ConfigError("problem: grad_bound must be finite and nonnegative");
  }
  check_grad_bound(*loss_, box_, grad_bound_);
}

ProblemSpec ProblemSpec::quadratic(Matrix A, Vector b, BoxSet box, double lambda,
                                   GradBoundBranch branch) {
  const double k = box.upper_max();
  const double bound = k > 0 ? estimate_grad_bound(A, b, k, branch) : 0.0;
  auto loss = std::make_shared<QuadraticLoss>(std::move(A), std::move(b));
  return ProblemSpec(std::move(loss), std::move(box), lambda, bound);
}

const QuadraticLoss* ProblemSpec::quadratic_loss() const {
  return dynamic_cast<const QuadraticLoss*>(loss_.get());
}

double ProblemSpec::objective_smooth(const Eigen::Ref<const Vector>& x, double mu) const {
  return loss_->value(x) + lambda_ * theta_sum(x, mu);
}

double ProblemSpec::objective_true(const Eigen::Ref<const Vector>& x, double zero_tol) const {
  return loss_->value(x) + lambda_ * static_cast<double>(cardinality(x, zero_tol));
}

Index cardinality(const Eigen::Ref<const Vector>& x, double zero_tol) {
  return (x.array().abs() > zero_tol).count();
}

}  // namespace l0flow
