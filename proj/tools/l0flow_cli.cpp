// l0flow: solve box-constrained L0-penalized least squares and run the
// benchmark experiments.
//
// Exit codes: 0 certified / success, 1 usage or data error, 2 not
// converged, 3 numerical divergence.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "l0flow/bench.hpp"
#include "l0flow/check.hpp"
#include "l0flow/pipeline.hpp"
#include "l0flow/problem_io.hpp"
#include "l0flow/splitting.hpp"

using namespace l0flow;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitDiverged = 3;

struct Overrides {
  std::optional<double> gamma, alpha0, beta, mu_star, step, horizon, tol;
  std::optional<std::string> schedule;

  void add_to(CLI::App* app) {
    app->add_option("--gamma", gamma, "network rate gamma");
    app->add_option("--alpha0", alpha0, "schedule amplitude alpha0");
    app->add_option("--beta", beta, "schedule decay beta");
    app->add_option("--mu-star", mu_star, "limiting smoothing level mu* (default: 0.9 x the parameter bound)");
    app->add_option("--schedule", schedule, "power or exponential");
    app->add_option("--step", step, "RK4 step h (default 0.01/gamma)");
    app->add_option("--horizon", horizon, "final time T_max");
    app->add_option("--tol", tol, "stationarity residual tolerance");
  }

  ParamOverrides apply(ParamOverrides p) const {
    if (gamma) p.gamma = gamma;
    if (alpha0) p.alpha0 = alpha0;
    if (beta) p.beta = beta;
    if (mu_star) p.mu_star = mu_star;
    if (schedule) p.schedule = schedule_from_string(*schedule);
    if (step) p.step = step;
    if (horizon) p.horizon = horizon;
    if (tol) p.residual_tol = tol;
    return p;
  }
};

json vec(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json params_json(const DynamicsParams& p) {
  return {{"gamma", p.gamma},         {"alpha0", p.alpha0}, {"beta", p.beta},
          {"mu_star", p.mu_star},     {"schedule", to_string(p.schedule)},
          {"step", p.step},           {"horizon", p.horizon},
          {"residual_tol", p.residual_tol}};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw DataError("cannot write '" + out_path + "'");
  f << text << '\n';
}

int cmd_solve(const std::string& path, const Overrides& ov, const std::string& out,
              const std::string& traj, int verbosity) {
  const ProblemFile file = load_problem(path);
  const LoadedProblem lp = build_problem(file);
  const DynamicsParams params = make_dynamics_params(lp.spec, ov.apply({}));
  if (verbosity > 0) {
    std::cerr << "n = " << lp.spec.dimension() << (lp.split ? " (split)" : "")
              << ", L_f = " << lp.spec.grad_bound() << ", mu* = " << params.mu_star << '\n';
  }

  const Vector x0 = lp.spec.box().upper().cwiseMin(1.0);
  std::ofstream traj_file;
  PipelineOptions opts;
  if (!traj.empty()) {
    traj_file.open(traj);
    if (!traj_file) throw DataError("cannot write '" + traj + "'");
    opts.solve.trajectory_csv = &traj_file;
  }
  const PipelineReport rep = run_pipeline(lp.spec, params, x0, opts);
  const double tol = num_zero_tol(params.mu_star);

  json j;
  if (lp.split) {
    const Recombined rc = recombine_stacked(rep.final_x, tol);
    j["x"] = vec(rc.cleaned);
    j["x_raw"] = vec(rc.raw);
    j["complementarity_violations"] = rc.complementarity_violations.size();
    std::vector<Index> supp;
    for (Index i = 0; i < rc.cleaned.size(); ++i) {
      if (std::abs(rc.cleaned(i)) >= tol) supp.push_back(i);
    }
    j["support"] = supp;
  } else {
    j["x"] = vec(rep.final_x);
    j["support"] = rep.support;
  }
  j["split"] = lp.split;
  j["certificate"] = to_string(rep.certificate);
  j["solve_certificate"] = to_string(rep.solve.certificate);
  j["objective_true"] = rep.objective_true;
  j["objective_smooth"] = rep.solve.objective_smooth;
  j["final_residual"] = rep.solve.final_residual;
  j["iterations"] = rep.solve.iterations;
  j["final_time"] = rep.solve.final_time;
  j["grad_bound"] = lp.spec.grad_bound();
  j["params"] = params_json(params);
  j["merit_violations"] = rep.solve.merit_violations;
  json warnings = rep.solve.warnings;
  if (rep.correction) {
    j["correction"] = {{"applied", rep.correction->applied},
                       {"rounds", rep.correction->rounds},
                       {"cardinality_before", rep.correction->cardinality_before},
                       {"cardinality_after", rep.correction->cardinality_after},
                       {"objective_before", rep.correction->objective_before},
                       {"objective_after", rep.correction->objective_after}};
    for (const auto& w : rep.correction->warnings) warnings.push_back(w);
  }
  j["warnings"] = warnings;
  emit(j.dump(2), out);
  return rep.certificate == Certificate::CertifiedLocalMin ? kExitOk : kExitNotConverged;
}

int cmd_bench(const std::string& kind_name, std::optional<int> seeds, const std::string& scale,
              const Overrides& ov, const std::string& out, const std::string& data, bool as_json) {
  const ExperimentKind kind = experiment_from_string(kind_name);
  ExperimentConfig cfg = ExperimentConfig::defaults(kind, scale_from_string(scale));
  if (seeds) {
    if (*seeds < 1) throw ConfigError("--seeds must be at least 1");
    cfg.seeds.clear();
    for (int i = 1; i <= *seeds; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
  }
  if (!data.empty()) cfg.data_path = data;
  cfg.params = ov.apply(cfg.params);

  const ExperimentReport rep = run_experiment(cfg);
  const std::string report = to_json(rep).dump(2);
  if (!out.empty()) emit(report, out);
  if (as_json) {
    std::cout << report << '\n';
  } else {
    std::cout << to_string(kind) << " (" << scale << ", " << cfg.seeds.size() << " seeds)\n"
              << format_table(rep);
  }
  for (const auto& s : rep.per_seed) {
    if (s.ok) return kExitOk;
  }
  return kExitError;
}

json defaults_json() {
  json j;
  DynamicsParams d;
  j["dynamics"] = {{"gamma", d.gamma},
                   {"alpha0", d.alpha0},
                   {"beta", d.beta},
                   {"mu_star", "0.9 * min{v_min, 3 lambda / (2 (v_max + L_f)), 2 lambda / (n L_f)}"},
                   {"schedule", to_string(d.schedule)},
                   {"step", "0.01 / gamma"},
                   {"horizon", d.horizon},
                   {"residual_tol", d.residual_tol}};
  for (auto kind : {ExperimentKind::TestExample, ExperimentKind::CompressedSensing,
                    ExperimentKind::VariableSelection, ExperimentKind::Prostate}) {
    j["bench"][to_string(kind)]["desk"] = to_json(ExperimentConfig::defaults(kind, Scale::Desk));
    j["bench"][to_string(kind)]["paper"] = to_json(ExperimentConfig::defaults(kind, Scale::Paper));
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse regression with an exact cardinality penalty via smoothed projection dynamics"};
  app.require_subcommand(0, 1);
  bool show_defaults = false;
  app.add_flag("--defaults", show_defaults, "print all default parameters as JSON and exit");

  Overrides solve_ov, bench_ov;
  std::string problem, out, traj, data;
  int verbosity = 0;
  bool as_json = false;

  auto* solve = app.add_subcommand("solve", "solve a problem file; prints a JSON report");
  solve->add_option("problem", problem, "problem JSON")->required()->check(CLI::ExistingFile);
  solve_ov.add_to(solve);
  solve->add_option("--out", out, "write the report here instead of stdout");
  solve->add_option("--traj", traj, "trajectory CSV (t, objective_smooth, residual, mu)");
  solve->add_flag("--json", as_json, "JSON report (always on for solve)");
  solve->add_flag("-v,--verbose", verbosity, "progress on stderr");

  std::string kind, scale = "desk";
  std::optional<int> seeds;
  auto* bench = app.add_subcommand("bench", "run an experiment: test-example, cs, vs or prostate");
  bench->add_option("kind", kind, "experiment kind")
      ->required()
      ->check(CLI::IsMember({"test-example", "cs", "vs", "prostate"}));
  bench->add_option("--seeds", seeds, "number of seeds (1..N)");
  bench->add_option("--scale", scale, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  bench_ov.add_to(bench);
  bench->add_option("--out", out, "write the JSON report here");
  bench->add_option("--data", data, "prostate CSV path");
  bench->add_flag("--json", as_json, "print the JSON report instead of the table");
  bench->add_flag("-v,--verbose", verbosity, "more output");

  bool inject_fault = false;
  auto* check = app.add_subcommand("check", "run the fast invariant suite");
  check->add_flag("--json", as_json, "machine-readable results");
  check->add_flag("--inject-fault", inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (show_defaults) {
      std::cout << defaults_json().dump(2) << '\n';
      return kExitOk;
    }
    if (solve->parsed()) return cmd_solve(problem, solve_ov, out, traj, verbosity);
    if (bench->parsed()) return cmd_bench(kind, seeds, scale, bench_ov, out, data, as_json);
    if (check->parsed()) {
      CheckOptions o;
      o.inject_fault = inject_fault;
      const auto results = run_invariant_checks(o);
      print_checks(results, std::cout, as_json);
      for (const auto& r : results) {
        if (!r.passed) return kExitError;
      }
      return kExitOk;
    }
    std::cerr << app.help();
    return kExitError;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
