#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "l0flow/model.hpp"

namespace l0flow {

enum class ScheduleKind { PowerLaw, Exponential };

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_from_string(const std::string& name);

/// mu(t) = (alpha(t) + mu_star) / 2 with alpha(t) = alpha0 / (1 + t)^beta
/// (PowerLaw) or alpha0 * exp(-beta t) (Exponential). Decreases strictly
/// from (alpha0 + mu_star) / 2 toward mu_star / 2.
struct MuSchedule {
  ScheduleKind kind = ScheduleKind::PowerLaw;
  double alpha0 = 1.0;
  double beta = 1.0;
  double mu_star = 0.0;
};

double mu_at(const MuSchedule& schedule, double t);

struct DynamicsParams {
  double gamma = 1.0;
  double alpha0 = 1.0;
  double beta = 1.0;
  double mu_star = 0.0;
  ScheduleKind schedule = ScheduleKind::PowerLaw;
  double step = 0.01;
  double horizon = 100.0;
  double residual_tol = 1e-8;

  MuSchedule mu_schedule() const { return {schedule, alpha0, beta, mu_star}; }

  /// Throws ConfigError on nonpositive rates or a mu_star that breaks the
  /// parameter condition against `spec`.
  void validate(const ProblemSpec& spec) const;
};

struct ParamOverrides {
  std::optional<double> gamma;
  std::optional<double> alpha0;
  std::optional<double> beta;
  std::optional<double> mu_star;
  std::optional<ScheduleKind> schedule;
  std::optional<double> step;
  std::optional<double> horizon;
  std::optional<double> residual_tol;
};

/// Defaults with overrides applied. mu_star defaults to
/// select_mu_star(spec.box(), lambda, grad_bound) and step to 0.01 / gamma.
/// The result is validated.
DynamicsParams make_dynamics_params(const ProblemSpec& spec, const ParamOverrides& overrides = {});

/// Threshold separating numerical zeros from nonzeros: mu_star / 12, halfway
/// between 0 and the mu_star / 6 lower bound on nonzero limit entries.
inline double num_zero_tol(double mu_star) { return mu_star / 12; }

/// {i : x_i >= num_zero_tol(mu_star)}.
std::vector<Index> rounded_support(const Eigen::Ref<const Vector>& x, double mu_star);

enum class Certificate { CertifiedLocalMin, NeedsCorrection, MaxHorizon };

std::string to_string(Certificate c);
Certificate certificate_from_string(const std::string& name);

struct SolverState {
  double t = 0.0;
  Vector x;
  double mu = 0.0;
  /// Stationarity residual at the limiting parameter mu_star / 2.
  double residual = 0.0;
  /// Stationarity residual at mu(t), i.e. ||x'|| / gamma.
  double flow_residual = 0.0;
};

struct TrajectorySample {
  double t;
  double objective_smooth;
  double residual;
  double mu;
};

struct SolveReport {
  Vector final_x;
  double final_time = 0.0;
  double final_residual = 0.0;
  double final_flow_residual = 0.0;
  double objective_smooth = 0.0;
  double objective_true = 0.0;
  std::vector<Index> support;
  long iterations = 0;
  std::vector<TrajectorySample> trajectory_samples;
  Certificate certificate = Certificate::MaxHorizon;
  /// Steps where f + lambda Theta + lambda rho_hat mu grew by more than 1e-8.
  long merit_violations = 0;
  double max_merit_increase = 0.0;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  /// Record a sample every `sample_stride` steps (plus the first and last);
  /// 0 disables sampling.
  long sample_stride = 100;
  /// Optional CSV sink with header t,objective_smooth,residual,mu.
  std::ostream* trajectory_csv = nullptr;
  /// Evaluate the merit-decrease diagnostic.
  bool track_merit = true;
};

/// gamma * (-x + P[x - grad f(x) - lambda grad_x Theta(x, mu(t))]).
Vector rhs(const ProblemSpec& spec, const DynamicsParams& params, const Eigen::Ref<const Vector>& x,
           double t);

/// ||x - P[x - grad f(x) - lambda grad_x Theta(x, mu)]||_inf.
double stationarity_residual(const ProblemSpec& spec, const Eigen::Ref<const Vector>& x, double mu);

/// Sum over coordinates of sup_{0 <= s <= upper_i} |d theta / d mu| at
/// mu_star / 2, which bounds |grad_mu Theta| on the box for every
/// mu >= mu_star / 2.
double merit_rho(const BoxSet& box, double mu_star);

/// One classical RK4 step of length h followed by projection onto the box.
/// Subnormal entries are flushed to zero. Throws DivergenceError if the new
/// state is not finite.
SolverState step(const ProblemSpec& spec, const DynamicsParams& params, const SolverState& state,
                 double h);
inline SolverState step(const ProblemSpec& spec, const DynamicsParams& params,
                        const SolverState& state) {
  return step(spec, params, state, params.step);
}

/// Integrates until both the residual at mu_star / 2 and the residual at
/// mu(t) are at most residual_tol, or t reaches the horizon. Starting points
/// outside the box are projected and a warning is recorded.
SolveReport solve(const ProblemSpec& spec, const DynamicsParams& params,
                  const Eigen::Ref<const Vector>& x0, const SolveOptions& options = {});

}  // namespace l0flow
