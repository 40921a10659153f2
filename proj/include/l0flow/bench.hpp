#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "l0flow/dynamics.hpp"
#include "l0flow/rng.hpp"
#include "l0flow/splitting.hpp"

namespace l0flow {

enum class ExperimentKind { TestExample, CompressedSensing, VariableSelection, Prostate };
enum class Scale { Desk, Paper };
enum class StartKind { Ones, RandomBox, RandomUnit };

std::string to_string(ExperimentKind kind);
/// Accepts test-example, cs, vs, prostate and the long names.
ExperimentKind experiment_from_string(const std::string& name);
std::string to_string(StartKind kind);
StartKind start_from_string(const std::string& name);
Scale scale_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::TestExample;
  Index n = 2;
  Index m = 3;
  Index sparsity = 1;
  double lambda = 1.0;
  double box_bound = 5.0;
  double noise_scale = 0.0;
  std::vector<std::uint64_t> seeds;
  ParamOverrides params;
  StartKind start = StartKind::RandomBox;
  /// When set, every seed solves this one instance and the seed only draws
  /// the starting point.
  std::optional<std::uint64_t> instance_seed;
  bool correct_at_horizon = true;
  std::string data_path;

  static ExperimentConfig defaults(ExperimentKind kind, Scale scale = Scale::Desk);
};

/// m x n matrix with orthonormal rows from the QR factor of an n x m
/// Gaussian draw.
Matrix orthonormal_rows(Index m, Index n, Rng& rng);

struct SensingInstance {
  Matrix A;
  Vector b;
  Vector signal;
};

/// Noiseless sensing data b = A s with a standard-normal s on a random
/// support, posed on the box [-box_bound, box_bound]^n.
std::pair<TwoSidedSpec, Vector> gen_compressed_sensing(Index n, Index m, Index sparsity,
                                                       std::uint64_t seed, double lambda = 0.1,
                                                       double box_bound = 5.0);

/// b = A s + noise_scale * N(0, I) with s uniform on [1, 10] over a random
/// support, posed on [0, box_bound]^n.
std::pair<ProblemSpec, Vector> gen_variable_selection(Index n, Index m, Index sparsity,
                                                      double noise_scale, std::uint64_t seed,
                                                      double lambda = 1.0, double box_bound = 10.0);

SensingInstance sensing_data(Index n, Index m, Index sparsity, std::uint64_t seed);
SensingInstance selection_data(Index n, Index m, Index sparsity, double noise_scale,
                               std::uint64_t seed);

/// The fixed 3 x 2 example on [0, 5]^2 with lambda = 1.
ProblemSpec test_example_spec();
/// Its global minimizer (0, 23/38).
Vector test_example_solution();

struct ProstateData {
  std::vector<std::string> feature_names;
  Matrix train_X;
  Vector train_y;
  Matrix test_X;
  Vector test_y;
  Vector feature_mean;
  Vector feature_sd;
  double response_mean = 0.0;
};

/// Parses the prostate table (header with lcavol ... pgg45, lpsa, train),
/// standardizes predictors with training mean and sample standard deviation
/// and centers the response on the training mean. Comma or tab separated;
/// a leading row-index column is ignored.
ProstateData parse_prostate(const std::string& text);
ProstateData load_prostate(const std::string& path);
/// Location of the bundled table.
std::string default_prostate_path();

/// Mean squared test error of coefficients on standardized predictors, with
/// the training mean as intercept.
double prostate_test_error(const ProstateData& d, const Eigen::Ref<const Vector>& coef);

/// ||x - s||^2 / n.
double mse(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& s);

struct SeedResult {
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  double mse = 0.0;
  /// MSE of the point returned by the network before correction.
  double mse_network = 0.0;
  std::vector<Index> support;
  bool support_recovered = false;
  double objective = 0.0;
  Certificate certificate = Certificate::MaxHorizon;
  Certificate solve_certificate = Certificate::MaxHorizon;
  double mu_star = 0.0;
  long iterations = 0;
  double final_time = 0.0;
  double wall_ms = 0.0;
  long complementarity_violations = 0;
  std::optional<double> test_error;
  Vector x;
  Vector x_network;
};

struct Aggregate {
  double mean_mse = 0, max_mse = 0, min_mse = 0;
  double mean_ms = 0, max_ms = 0, min_ms = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SeedResult> per_seed;
  Aggregate aggregate;
};

/// Number of workers: hardware concurrency capped by L0FLOW_THREADS.
unsigned worker_count();

/// Calls fn(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

/// Runs every seed; failures are recorded per seed and the run continues.
ExperimentReport run_experiment(const ExperimentConfig& config, unsigned workers = 0);

Aggregate aggregate(const std::vector<SeedResult>& results);

nlohmann::json to_json(const ExperimentConfig& c);
nlohmann::json to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const nlohmann::json& j);

/// Per-seed rows followed by a Mean/Max/Min summary.
std::string format_table(const ExperimentReport& r);

}  // namespace l0flow
