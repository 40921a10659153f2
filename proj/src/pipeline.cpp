#include "l0flow/pipeline.hpp"

namespace l0flow {

PipelineReport run_pipeline(const ProblemSpec& spec, const DynamicsParams& params,
                            const Eigen::Ref<const Vector>& x0, const PipelineOptions& options) {
  PipelineReport out;
  out.solve = solve(spec, params, x0, options.solve);
  out.final_x = out.solve.final_x;
  out.certificate = out.solve.certificate;

  const bool needs = out.solve.certificate == Certificate::NeedsCorrection ||
                     (options.correct_at_horizon && out.solve.certificate == Certificate::MaxHorizon);
  if (needs) {
    out.correction = correct(spec, params, out.solve.final_x, options.correction);
    out.final_x = out.correction->x;
    out.certificate = out.correction->certificate;
  }
  out.support = rounded_support(out.final_x, params.mu_star);
  out.objective_true = rounded_objective(spec, out.final_x, params.mu_star);
  return out;
}

}  // namespace l0flow
