#include "l0flow/correction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "l0flow/box_lsq.hpp"

namespace l0flow {

SupportPartition partition(const Eigen::Ref<const Vector>& x, double mu_star, const BoxSet& box) {
  if (!(mu_star > 0)) throw DomainError("partition: mu_star must be positive");
  if (!box.is_one_sided()) throw DomainError("partition: box must be one-sided");
  if (!box.contains(x)) throw DomainError("partition: point lies outside the box");
  SupportPartition p;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) < mu_star / 6) {
      p.I.push_back(i);
    } else if (x(i) < mu_star / 2) {
      p.J.push_back(i);
    } else {
      p.K.push_back(i);
    }
  }
  return p;
}

SupportPartition banded_partition(const Eigen::Ref<const Vector>& x, double mu_star) {
  if (!(mu_star > 0)) throw DomainError("partition: mu_star must be positive");
  const double tol = num_zero_tol(mu_star);
  SupportPartition p;
  for (Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i));
    if (a < tol) {
      p.I.push_back(i);
    } else if (a < mu_star / 2) {
      p.J.push_back(i);
    } else {
      p.K.push_back(i);
    }
  }
  return p;
}

Vector mu_update_point(const Eigen::Ref<const Vector>& x, double mu_star) {
  Vector u = x;
  for (Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) < mu_star / 2) u(i) = 0;
  }
  return u;
}

namespace {

double restricted_residual(const ProblemSpec& spec, const Vector& x, const std::vector<Index>& idx) {
  if (idx.empty()) return 0.0;
  const Vector g = spec.loss().gradient(x);
  const Vector& up = spec.box().upper();
  double r = 0;
  for (Index i : idx) {
    const double target = std::clamp(x(i) - g(i), 0.0, up(i));
    r = std::max(r, std::abs(x(i) - target));
  }
  return r;
}

Vector correction_flow(const ProblemSpec& spec, const std::vector<Index>& free, Vector x,
                       double gamma1, double h, double max_time, double target) {
  const Vector& up = spec.box().upper();
  const Index nf = static_cast<Index>(free.size());
  auto field = [&](const Vector& xf) -> Vector {
    Vector full = x;
    for (Index j = 0; j < nf; ++j) full(free[j]) = xf(j);
    const Vector g = spec.loss().gradient(full);
    Vector d(nf);
    for (Index j = 0; j < nf; ++j) {
      const Index i = free[j];
      d(j) = gamma1 * (std::clamp(xf(j) - g(i), 0.0, up(i)) - xf(j));
    }
    return d;
  };
  Vector xf(nf);
  for (Index j = 0; j < nf; ++j) xf(j) = x(free[j]);
  double t = 0;
  while (t < max_time) {
    const Vector k1 = field(xf);
    if (k1.lpNorm<Eigen::Infinity>() / gamma1 <= target) break;
    const Vector k2 = field(xf + 0.5 * h * k1);
    const Vector k3 = field(xf + 0.5 * h * k2);
    const Vector k4 = field(xf + h * k3);
    Vector next = xf + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    for (Index j = 0; j < nf; ++j) {
      next(j) = std::clamp(next(j), 0.0, up(free[j]));
      if (std::abs(next(j)) < std::numeric_limits<double>::min()) next(j) = 0;
    }
    if (!next.allFinite()) {
      for (Index j = 0; j < nf; ++j) x(free[j]) = xf(j);
      throw DivergenceError("correction flow diverged", t, x);
    }
    xf = next;
    t += h;
  }
  for (Index j = 0; j < nf; ++j) x(free[j]) = xf(j);
  return x;
}

}  // namespace

Vector correction_solve(const ProblemSpec& spec, const std::vector<Index>& free,
                        const Eigen::Ref<const Vector>& x_start, const DynamicsParams& params,
                        const CorrectionSolveOptions& options) {
  const Index n = spec.dimension();
  if (x_start.size() != n) throw ConfigError("correction_solve: x_start has wrong dimension");
  std::vector<bool> is_free(static_cast<std::size_t>(n), false);
  for (Index i : free) {
    if (i < 0 || i >= n) throw ConfigError("correction_solve: free index out of range");
    is_free[static_cast<std::size_t>(i)] = true;
  }
  Vector x = spec.box().project(x_start);
  for (Index i = 0; i < n; ++i) {
    if (!is_free[static_cast<std::size_t>(i)]) x(i) = 0;
  }
  if (free.empty()) return x;

  const QuadraticLoss* q = spec.quadratic_loss();
  if (q && !options.force_ode) {
    const Index nf = static_cast<Index>(free.size());
    Matrix AF(q->matrix().rows(), nf);
    Vector uF(nf), xF(nf);
    for (Index j = 0; j < nf; ++j) {
      AF.col(j) = q->matrix().col(free[j]);
      uF(j) = spec.box().upper()(free[j]);
      xF(j) = x(free[j]);
    }
    const BoxLsqResult r = box_least_squares(AF, q->rhs(), uF, xF, 1e-12, 5000);
    for (Index j = 0; j < nf; ++j) x(free[j]) = r.x(j);
    return x;
  }

  const double gamma1 = options.gamma1 > 0 ? options.gamma1 : params.gamma;
  const double h = params.step * params.gamma / gamma1;
  const double max_time = options.max_time > 0 ? options.max_time : 100 * params.horizon;
  return correction_flow(spec, free, x, gamma1, h, max_time * params.gamma / gamma1,
                         0.1 * params.residual_tol);
}

Certificate certify_local_min(const ProblemSpec& spec, const Eigen::Ref<const Vector>& x,
                              double mu_star, double residual_tol) {
  const SupportPartition p = banded_partition(x, mu_star);
  if (!p.J.empty()) return Certificate::NeedsCorrection;
  Vector xt = x;
  for (Index i : p.I) {
    if (std::abs(xt(i)) > residual_tol) return Certificate::NeedsCorrection;
    xt(i) = 0;
  }
  return restricted_residual(spec, xt, p.K) <= residual_tol ? Certificate::CertifiedLocalMin
                                                             : Certificate::NeedsCorrection;
}

double rounded_objective(const ProblemSpec& spec, const Eigen::Ref<const Vector>& x, double mu_star) {
  return spec.loss().value(x) +
         spec.lambda() * static_cast<double>(rounded_support(x, mu_star).size());
}

CorrectionReport correct(const ProblemSpec& spec, const DynamicsParams& params,
                         const Eigen::Ref<const Vector>& x_bar, const CorrectionSolveOptions& options) {
  const double mu = params.mu_star;
  CorrectionReport rep;
  rep.cardinality_before = static_cast<Index>(rounded_support(x_bar, mu).size());
  rep.objective_before = rounded_objective(spec, x_bar, mu);
  rep.j_nonempty = !banded_partition(x_bar, mu).J.empty();

  if (certify_local_min(spec, x_bar, mu, params.residual_tol) == Certificate::CertifiedLocalMin) {
    rep.x = x_bar;
    rep.certificate = Certificate::CertifiedLocalMin;
    rep.cardinality_after = rep.cardinality_before;
    rep.objective_after = rep.objective_before;
    return rep;
  }

  rep.applied = true;
  Vector x = x_bar;
  const int max_rounds = static_cast<int>(spec.dimension()) + 2;
  for (int round = 0; round < max_rounds; ++round) {
    const Vector u = mu_update_point(x, mu);
    const auto card_x = rounded_support(x, mu).size();
    const auto card_u = rounded_support(u, mu).size();
    const double fx = rounded_objective(spec, x, mu);
    const double fu = rounded_objective(spec, u, mu);
    if (card_u > card_x || fu > fx + 1e-12 * (1 + std::abs(fx))) {
      rep.update_point_monotone = false;
      std::ostringstream os;
      os << "update point raised the objective from " << fx << " to " << fu;
      rep.warnings.push_back(os.str());
    }

    std::vector<Index> free;
    for (Index i = 0; i < u.size(); ++i) {
      if (u(i) != 0) free.push_back(i);
    }
    x = correction_solve(spec, free, u, params, options);
    ++rep.rounds;
    if (certify_local_min(spec, x, mu, params.residual_tol) == Certificate::CertifiedLocalMin) {
      rep.certificate = Certificate::CertifiedLocalMin;
      break;
    }
  }
  if (rep.certificate != Certificate::CertifiedLocalMin) {
    rep.warnings.push_back("correction did not reach a certified point");
  }
  rep.x = x;
  rep.cardinality_after = static_cast<Index>(rounded_support(x, mu).size());
  rep.objective_after = rounded_objective(spec, x, mu);

  if (rep.j_nonempty && (rep.cardinality_after >= rep.cardinality_before ||
                         !(rep.objective_after < rep.objective_before - 1e-12))) {
    std::ostringstream os;
    os << "correction failed to decrease the objective: ||x||_0 " << rep.cardinality_before << " -> "
       << rep.cardinality_after << ", objective " << rep.objective_before << " -> "
       << rep.objective_after << "; mu_star or grad_bound is likely misconfigured";
    throw ConsistencyError(os.str());
  }
  return rep;
}

}  // namespace l0flow
