#pragma once

#include <optional>

#include "l0flow/correction.hpp"

namespace l0flow {

struct PipelineOptions {
  /// Also correct points that stopped at the horizon without converging.
  bool correct_at_horizon = false;
  SolveOptions solve;
  CorrectionSolveOptions correction;
};

struct PipelineReport {
  SolveReport solve;
  std::optional<CorrectionReport> correction;
  Vector final_x;
  Certificate certificate = Certificate::MaxHorizon;
  std::vector<Index> support;
  double objective_true = 0.0;
};

/// solve, then correct when the solve ends at NeedsCorrection (or at the
/// horizon if requested).
PipelineReport run_pipeline(const ProblemSpec& spec, const DynamicsParams& params,
                            const Eigen::Ref<const Vector>& x0, const PipelineOptions& options = {});

}  // namespace l0flow
