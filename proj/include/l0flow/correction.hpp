#pragma once

#include <string>
#include <vector>

#include "l0flow/dynamics.hpp"

namespace l0flow {

/// Index sets I = {x_i < mu*/6}, J = {mu*/6 <= x_i < mu*/2}, K = {x_i >= mu*/2}.
struct SupportPartition {
  std::vector<Index> I;
  std::vector<Index> J;
  std::vector<Index> K;
};

/// Exact half-open classification. Throws DomainError if x is outside the box
/// or the box is not one-sided.
SupportPartition partition(const Eigen::Ref<const Vector>& x, double mu_star, const BoxSet& box);

/// Classification used for certification: entries below num_zero_tol count as
/// zero (I), [num_zero_tol, mu*/2) is J and [mu*/2, inf) is K.
SupportPartition banded_partition(const Eigen::Ref<const Vector>& x, double mu_star);

/// Zeroes every entry with |x_i| < mu_star / 2.
Vector mu_update_point(const Eigen::Ref<const Vector>& x, double mu_star);

struct CorrectionSolveOptions {
  /// Rate of the correction flow; <= 0 means params.gamma.
  double gamma1 = 0.0;
  /// Integrate the flow even for quadratic losses.
  bool force_ode = false;
  /// Time limit for the flow; <= 0 means 100 * params.horizon.
  double max_time = 0.0;
};

/// Minimizes f over {x in box : x_i = 0 for i not in `free`} starting from
/// x_start. Quadratic losses are solved directly as a bounded least-squares
/// problem; other losses integrate x' = gamma1 (-x + P[x - grad f(x)]) on
/// the free coordinates only.
Vector correction_solve(const ProblemSpec& spec, const std::vector<Index>& free,
                        const Eigen::Ref<const Vector>& x_start, const DynamicsParams& params,
                        const CorrectionSolveOptions& options = {});

/// CertifiedLocalMin iff the banded J set is empty, every I entry is at most
/// residual_tol, and with the I entries zeroed the restricted residual
/// ||x_K - P[x_K - grad f(x)_K]||_inf is at most residual_tol.
Certificate certify_local_min(const ProblemSpec& spec, const Eigen::Ref<const Vector>& x,
                              double mu_star, double residual_tol = 1e-8);

struct CorrectionReport {
  Vector x;
  Certificate certificate = Certificate::NeedsCorrection;
  bool applied = false;
  bool j_nonempty = false;
  int rounds = 0;
  Index cardinality_before = 0;
  Index cardinality_after = 0;
  double objective_before = 0.0;
  double objective_after = 0.0;
  /// The update point never raised ||.||_0 or f + lambda ||.||_0.
  bool update_point_monotone = true;
  std::vector<std::string> warnings;
};

/// Rounded objective f(x) + lambda * |rounded_support(x)|.
double rounded_objective(const ProblemSpec& spec, const Eigen::Ref<const Vector>& x, double mu_star);

/// Alternates update point and correction_solve until the point certifies.
/// When J(x_bar) is nonempty the result must have strictly smaller rounded
/// cardinality and objective; otherwise ConsistencyError is thrown.
CorrectionReport correct(const ProblemSpec& spec, const DynamicsParams& params,
                         const Eigen::Ref<const Vector>& x_bar,
                         const CorrectionSolveOptions& options = {});

}  // namespace l0flow
