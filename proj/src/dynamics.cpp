#include "l0flow/dynamics.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "l0flow/correction.hpp"
#include "l0flow/smoothing.hpp"

namespace l0flow {

std::string to_string(ScheduleKind kind) {
  return kind == ScheduleKind::PowerLaw ? "power" : "exponential";
}

ScheduleKind schedule_from_string(const std::string& name) {
  if (name == "power" || name == "powerlaw" || name == "PowerLaw") return ScheduleKind::PowerLaw;
  if (name == "exponential" || name == "exp" || name == "Exponential") return ScheduleKind::Exponential;
  throw ConfigError("unknown schedule '" + name + "' (expected power or exponential)");
}

double mu_at(const MuSchedule& s, double t) {
  if (!(t >= 0)) throw DomainError("mu_at: time must be nonnegative");
  const double alpha = s.kind == ScheduleKind::PowerLaw ? s.alpha0 / std::pow(1.0 + t, s.beta)
                                                        : s.alpha0 * std::exp(-s.beta * t);
  return 0.5 * (alpha + s.mu_star);
}

void DynamicsParams::validate(const ProblemSpec& spec) const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(gamma, "gamma");
  positive(alpha0, "alpha0");
  positive(beta, "beta");
  positive(step, "step");
  positive(horizon, "horizon");
  if (!(residual_tol >= 0)) throw ConfigError("residual_tol must be nonnegative");
  check_mu_star(spec.box(), spec.lambda(), spec.grad_bound(), mu_star);
}

DynamicsParams make_dynamics_params(const ProblemSpec& spec, const ParamOverrides& o) {
  DynamicsParams p;
  if (o.gamma) p.gamma = *o.gamma;
  if (o.alpha0) p.alpha0 = *o.alpha0;
  if (o.beta) p.beta = *o.beta;
  if (o.schedule) p.schedule = *o.schedule;
  if (o.horizon) p.horizon = *o.horizon;
  if (o.residual_tol) p.residual_tol = *o.residual_tol;
  p.step = o.step ? *o.step : 0.01 / p.gamma;
  p.mu_star = o.mu_star ? *o.mu_star : select_mu_star(spec.box(), spec.lambda(), spec.grad_bound());
  p.validate(spec);
  return p;
}

std::vector<Index> rounded_support(const Eigen::Ref<const Vector>& x, double mu_star) {
  std::vector<Index> s;
  const double tol = num_zero_tol(mu_star);
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) >= tol) s.push_back(i);
  }
  return s;
}

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::CertifiedLocalMin: return "CertifiedLocalMin";
    case Certificate::NeedsCorrection: return "NeedsCorrection";
    case Certificate::MaxHorizon: return "MaxHorizon";
  }
  return "?";
}

Certificate certificate_from_string(const std::string& name) {
  if (name == "CertifiedLocalMin") return Certificate::CertifiedLocalMin;
  if (name == "NeedsCorrection") return Certificate::NeedsCorrection;
  if (name == "MaxHorizon") return Certificate::MaxHorizon;
  throw DataError("unknown certificate '" + name + "'");
}

namespace {

Vector projected_target(const ProblemSpec& spec, const Eigen::Ref<const Vector>& x, double mu) {
  Vector y = x - spec.loss().gradient(x) - spec.lambda() * theta_sum_grad_x(x, mu);
  return spec.box().project(y);
}

}  // namespace

Vector rhs(const ProblemSpec& spec, const DynamicsParams& params, const Eigen::Ref<const Vector>& x,
           double t) {
  if (x.size() != spec.dimension()) throw ConfigError("rhs: state has wrong dimension");
  const double mu = mu_at(params.mu_schedule(), t);
  return params.gamma * (projected_target(spec, x, mu) - x);
}

double stationarity_residual(const ProblemSpec& spec, const Eigen::Ref<const Vector>& x, double mu) {
  if (x.size() == 0) return 0.0;
  return (x - projected_target(spec, x, mu)).lpNorm<Eigen::Infinity>();
}

namespace {

// Residuals at mu_star / 2 and at mu(t) from one gradient evaluation.
void update_residuals(const ProblemSpec& spec, const DynamicsParams& params, SolverState& s) {
  if (s.x.size() == 0) {
    s.residual = s.flow_residual = 0;
    return;
  }
  const Vector y = s.x - spec.loss().gradient(s.x);
  const BoxSet& box = spec.box();
  const double lam = spec.lambda();
  s.residual = (s.x - box.project(y - lam * theta_sum_grad_x(s.x, params.mu_star / 2)))
                   .lpNorm<Eigen::Infinity>();
  s.flow_residual = (s.x - box.project(y - lam * theta_sum_grad_x(s.x, s.mu))).lpNorm<Eigen::Infinity>();
}

}  // namespace

double merit_rho(const BoxSet& box, double mu_star) {
  double rho = 0;
  for (Index i = 0; i < box.size(); ++i) rho += theta_grad_mu_sup(box.upper()(i), mu_star / 2);
  return rho;
}

SolverState step(const ProblemSpec& spec, const DynamicsParams& params, const SolverState& state,
                 double h) {
  const double t = state.t;
  const Vector& x = state.x;
  const Vector k1 = rhs(spec, params, x, t);
  const Vector k2 = rhs(spec, params, x + 0.5 * h * k1, t + 0.5 * h);
  const Vector k3 = rhs(spec, params, x + 0.5 * h * k2, t + 0.5 * h);
  const Vector k4 = rhs(spec, params, x + h * k3, t + h);

  SolverState next;
  next.t = t + h;
  next.x = spec.box().project(x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4));
  if (!next.x.allFinite()) {
    std::ostringstream os;
    os << "integrator diverged at t = " << next.t;
    throw DivergenceError(os.str(), next.t, x);
  }
  // decaying coordinates would otherwise sit in subnormal range, which is slow
  next.x = (next.x.array().abs() < std::numeric_limits<double>::min()).select(0.0, next.x);
  next.mu = mu_at(params.mu_schedule(), next.t);
  update_residuals(spec, params, next);
  return next;
}

SolveReport solve(const ProblemSpec& spec, const DynamicsParams& params,
                  const Eigen::Ref<const Vector>& x0, const SolveOptions& options) {
  if (x0.size() != spec.dimension()) {
    throw ConfigError("solve: x0 has " + std::to_string(x0.size()) + " entries, problem has " +
                      std::to_string(spec.dimension()));
  }
  if (!x0.allFinite()) throw ConfigError("solve: x0 is not finite");

  SolveReport report;
  SolverState state;
  state.x = spec.box().project(x0);
  if (!spec.box().contains(x0)) {
    report.warnings.push_back("starting point outside the box was projected onto it");
  }
  state.t = 0;
  state.mu = mu_at(params.mu_schedule(), 0);
  update_residuals(spec, params, state);

  const MuSchedule sched = params.mu_schedule();
  const double rho = options.track_merit ? merit_rho(spec.box(), params.mu_star) : 0.0;
  auto merit = [&](const SolverState& s) {
    return spec.objective_smooth(s.x, s.mu) + spec.lambda() * rho * s.mu;
  };

  if (options.trajectory_csv) *options.trajectory_csv << "t,objective_smooth,residual,mu\n";
  auto sample = [&](const SolverState& s) {
    TrajectorySample ts{s.t, spec.objective_smooth(s.x, s.mu), s.residual, s.mu};
    report.trajectory_samples.push_back(ts);
    if (options.trajectory_csv) {
      auto& os = *options.trajectory_csv;
      os.precision(17);
      os << ts.t << ',' << ts.objective_smooth << ',' << ts.residual << ',' << ts.mu << '\n';
    }
  };

  const bool sampling = options.sample_stride > 0;
  if (sampling) sample(state);

  double m_prev = options.track_merit ? merit(state) : 0.0;
  auto settled = [&](const SolverState& s) {
    return s.residual <= params.residual_tol && s.flow_residual <= params.residual_tol;
  };
  bool converged = settled(state);
  long k = 0;
  bool last_sampled = true;
  while (!converged && state.t < params.horizon) {
    double t_next = static_cast<double>(k + 1) * params.step;
    if (t_next > params.horizon || params.horizon - t_next < 1e-12 * params.horizon) {
      t_next = params.horizon;
    }
    state = step(spec, params, state, t_next - state.t);
    if (state.t != t_next) {
      state.t = t_next;
      state.mu = mu_at(sched, t_next);
      update_residuals(spec, params, state);
    }
    ++k;

    if (options.track_merit) {
      const double m = merit(state);
      const double inc = m - m_prev;
      if (inc > 1e-8) {
        ++report.merit_violations;
        report.max_merit_increase = std::max(report.max_merit_increase, inc);
      }
      m_prev = m;
    }
    converged = settled(state);
    last_sampled = false;
    if (sampling && k % options.sample_stride == 0) {
      sample(state);
      last_sampled = true;
    }
  }
  if (sampling && !last_sampled) sample(state);
  if (report.merit_violations > 0) {
    std::ostringstream os;
    os << "merit increased on " << report.merit_violations << " steps (max " << report.max_merit_increase
       << ")";
    report.warnings.push_back(os.str());
  }

  report.final_x = state.x;
  report.final_time = state.t;
  report.final_residual = state.residual;
  report.final_flow_residual = state.flow_residual;
  report.iterations = k;
  report.objective_smooth = spec.objective_smooth(state.x, state.mu);
  report.objective_true = spec.objective_true(state.x, num_zero_tol(params.mu_star));
  report.support = rounded_support(state.x, params.mu_star);
  if (converged) {
    report.certificate = certify_local_min(spec, state.x, params.mu_star, params.residual_tol);
  } else {
    report.certificate = Certificate::MaxHorizon;
  }
  return report;
}

}  // namespace l0flow
