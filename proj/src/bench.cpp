#include "l0flow/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "l0flow/pipeline.hpp"

#ifndef L0FLOW_DATA_DIR
#define L0FLOW_DATA_DIR "data"
#endif

namespace l0flow {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::TestExample: return "test-example";
    case ExperimentKind::CompressedSensing: return "cs";
    case ExperimentKind::VariableSelection: return "vs";
    case ExperimentKind::Prostate: return "prostate";
  }
  return "?";
}

ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "test-example" || name == "test_example") return ExperimentKind::TestExample;
  if (name == "cs" || name == "compressed-sensing") return ExperimentKind::CompressedSensing;
  if (name == "vs" || name == "variable-selection") return ExperimentKind::VariableSelection;
  if (name == "prostate") return ExperimentKind::Prostate;
  throw ConfigError("unknown experiment kind '" + name + "' (expected test-example, cs, vs or prostate)");
}

std::string to_string(StartKind kind) {
  switch (kind) {
    case StartKind::Ones: return "ones";
    case StartKind::RandomBox: return "random-box";
    case StartKind::RandomUnit: return "random-unit";
  }
  return "?";
}

StartKind start_from_string(const std::string& name) {
  if (name == "ones") return StartKind::Ones;
  if (name == "random-box") return StartKind::RandomBox;
  if (name == "random-unit") return StartKind::RandomUnit;
  throw ConfigError("unknown start '" + name + "' (expected ones, random-box or random-unit)");
}

Scale scale_from_string(const std::string& name) {
  if (name == "desk") return Scale::Desk;
  if (name == "paper") return Scale::Paper;
  throw ConfigError("unknown scale '" + name + "' (expected desk or paper)");
}

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::uint64_t i = 0; i < count; ++i) s[i] = i + 1;
  return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind, Scale scale) {
  ExperimentConfig c;
  c.kind = kind;
  const bool paper = scale == Scale::Paper;
  switch (kind) {
    case ExperimentKind::TestExample:
      c.n = 2;
      c.m = 3;
      c.sparsity = 1;
      c.lambda = 1;
      c.box_bound = 5;
      c.seeds = seed_range(6);
      c.start = StartKind::RandomBox;
      c.params.gamma = 1;
      c.params.alpha0 = 1;
      c.params.beta = 1;
      c.params.horizon = 10;
      c.params.step = 0.01;
      break;
    case ExperimentKind::CompressedSensing:
      c.n = paper ? 1000 : 256;
      c.m = paper ? 200 : 80;
      c.sparsity = paper ? 10 : 8;
      c.lambda = 0.1;
      c.box_bound = 5;
      c.seeds = seed_range(10);
      c.start = StartKind::Ones;
      c.params.gamma = 1;
      c.params.alpha0 = 700;
      c.params.beta = 0.1;
      c.params.horizon = 2500;
      c.params.step = 0.2;
      break;
    case ExperimentKind::VariableSelection:
      c.n = paper ? 1500 : 384;
      c.m = paper ? 600 : 160;
      c.sparsity = paper ? 50 : 16;
      c.lambda = 1;
      c.box_bound = 10;
      c.noise_scale = 0.01;
      c.seeds = seed_range(10);
      c.start = StartKind::Ones;
      c.params.gamma = 1;
      c.params.alpha0 = 700;
      c.params.beta = 0.1;
      c.params.horizon = 2500;
      c.params.step = 0.2;
      break;
    case ExperimentKind::Prostate:
      c.n = 8;
      c.m = 67;
      c.sparsity = 3;
      c.lambda = 2;
      c.box_bound = 10;
      c.seeds = {0};
      c.start = StartKind::Ones;
      c.params.gamma = 1;
      c.params.alpha0 = 20;
      c.params.beta = 2;
      c.params.horizon = 25;
      c.params.step = 0.01;
      c.data_path = default_prostate_path();
      break;
  }
  return c;
}

Matrix orthonormal_rows(Index m, Index n, Rng& rng) {
  if (m > n) throw ConfigError("orthonormal_rows: need m <= n");
  const Matrix G = rng.normal_matrix(n, m);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, m);
  return Q.transpose();
}

SensingInstance sensing_data(Index n, Index m, Index sparsity, std::uint64_t seed) {
  if (!(m < n)) throw ConfigError("compressed sensing: need m < n");
  if (sparsity > n || sparsity < 0) throw ConfigError("compressed sensing: sparsity exceeds n");
  Rng rng(seed);
  SensingInstance inst;
  inst.A = orthonormal_rows(m, n, rng);
  inst.signal = Vector::Zero(n);
  for (Index i : rng.sample_indices(n, sparsity)) inst.signal(i) = rng.normal();
  inst.b = inst.A * inst.signal;
  return inst;
}

SensingInstance selection_data(Index n, Index m, Index sparsity, double noise_scale,
                               std::uint64_t seed) {
  if (!(m < n)) throw ConfigError("variable selection: need m < n");
  if (sparsity > n || sparsity < 0) throw ConfigError("variable selection: sparsity exceeds n");
  Rng rng(seed);
  SensingInstance inst;
  inst.A = orthonormal_rows(m, n, rng);
  inst.signal = Vector::Zero(n);
  for (Index i : rng.sample_indices(n, sparsity)) inst.signal(i) = rng.uniform(1.0, 10.0);
  inst.b = inst.A * inst.signal + noise_scale * rng.normal_vector(m);
  return inst;
}

std::pair<TwoSidedSpec, Vector> gen_compressed_sensing(Index n, Index m, Index sparsity,
                                                       std::uint64_t seed, double lambda,
                                                       double box_bound) {
  SensingInstance inst = sensing_data(n, m, sparsity, seed);
  TwoSidedSpec ts = TwoSidedSpec::quadratic(std::move(inst.A), std::move(inst.b),
                                            Vector::Constant(n, box_bound),
                                            Vector::Constant(n, box_bound), lambda);
  return {std::move(ts), std::move(inst.signal)};
}

std::pair<ProblemSpec, Vector> gen_variable_selection(Index n, Index m, Index sparsity,
                                                      double noise_scale, std::uint64_t seed,
                                                      double lambda, double box_bound) {
  SensingInstance inst = selection_data(n, m, sparsity, noise_scale, seed);
  ProblemSpec spec = ProblemSpec::quadratic(std::move(inst.A), std::move(inst.b),
                                            BoxSet::uniform(n, box_bound), lambda);
  return {std::move(spec), std::move(inst.signal)};
}

ProblemSpec test_example_spec() {
  Matrix A(3, 2);
  A << 1, 3,
       3, 2,
       1, 5;
  Vector b(3);
  b << 2, 1, 3;
  return ProblemSpec::quadratic(A, b, BoxSet::uniform(2, 5.0), 1.0);
}

Vector test_example_solution() { return Eigen::Vector2d(0.0, 23.0 / 38.0); }

namespace {

const std::vector<std::string> kProstateFeatures = {"lcavol", "lweight", "age",     "lbph",
                                                   "svi",    "lcp",     "gleason", "pgg45"};

std::string trim(std::string s) {
  const auto strip = [](char c) { return c == ' ' || c == '"' || c == '\r' || c == '\'' || c == '\t'; };
  while (!s.empty() && strip(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && strip(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

ProstateData parse_prostate(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  if (!std::getline(in, line)) throw DataError("prostate: empty input", 1);
  ++row;
  const char sep = line.find('\t') != std::string::npos && line.find(',') == std::string::npos ? '\t' : ',';
  const std::vector<std::string> header = split_fields(line, sep);

  auto col_of = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw DataError("prostate: header lacks column '" + name + "'", 1);
  };
  std::vector<std::size_t> cols;
  for (const auto& f : kProstateFeatures) cols.push_back(col_of(f));
  const std::size_t ycol = col_of("lpsa");
  const std::size_t tcol = col_of("train");

  std::vector<std::vector<double>> train_x, test_x;
  std::vector<double> train_y, test_y;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::vector<std::string> f = split_fields(line, sep);
    // an unnamed leading index column
    std::size_t shift = 0;
    if (f.size() == header.size() + 1) {
      shift = 1;
    } else if (f.size() != header.size()) {
      throw DataError("prostate: row " + std::to_string(row) + " has " + std::to_string(f.size()) +
                          " fields, expected " + std::to_string(header.size()),
                      row);
    }
    auto num = [&](std::size_t c, const std::string& name) {
      const std::string& s = f[c + shift];
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw DataError("prostate: row " + std::to_string(row) + " column '" + name +
                            "' is not a number: '" + s + "'",
                        row);
      }
      return v;
    };
    std::vector<double> x;
    for (std::size_t j = 0; j < cols.size(); ++j) x.push_back(num(cols[j], kProstateFeatures[j]));
    const double y = num(ycol, "lpsa");
    const std::string flag = f[tcol + shift];
    bool is_train;
    if (flag == "T" || flag == "TRUE" || flag == "true" || flag == "1") {
      is_train = true;
    } else if (flag == "F" || flag == "FALSE" || flag == "false" || flag == "0") {
      is_train = false;
    } else {
      throw DataError("prostate: row " + std::to_string(row) + " has train flag '" + flag +
                          "', expected T or F",
                      row);
    }
    (is_train ? train_x : test_x).push_back(std::move(x));
    (is_train ? train_y : test_y).push_back(y);
  }
  if (train_x.size() < 2) throw DataError("prostate: fewer than two training rows");

  const Index p = static_cast<Index>(kProstateFeatures.size());
  auto to_matrix = [&](const std::vector<std::vector<double>>& rows) {
    Matrix M(static_cast<Index>(rows.size()), p);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (Index j = 0; j < p; ++j) M(static_cast<Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    return M;
  };
  ProstateData d;
  d.feature_names = kProstateFeatures;
  Matrix Xtr = to_matrix(train_x);
  Matrix Xte = to_matrix(test_x);
  const double N = static_cast<double>(Xtr.rows());
  d.feature_mean = Xtr.colwise().mean().transpose();
  d.feature_sd.resize(p);
  for (Index j = 0; j < p; ++j) {
    const double ss = (Xtr.col(j).array() - d.feature_mean(j)).square().sum();
    d.feature_sd(j) = std::sqrt(ss / (N - 1));
    if (!(d.feature_sd(j) > 0)) throw DataError("prostate: column '" + kProstateFeatures[j] + "' is constant");
  }
  auto standardize = [&](Matrix X) {
    for (Index j = 0; j < p; ++j) X.col(j) = (X.col(j).array() - d.feature_mean(j)) / d.feature_sd(j);
    return X;
  };
  d.train_X = standardize(Xtr);
  d.test_X = standardize(Xte);
  d.train_y = Eigen::Map<Vector>(train_y.data(), static_cast<Index>(train_y.size()));
  d.test_y = Eigen::Map<Vector>(test_y.data(), static_cast<Index>(test_y.size()));
  d.response_mean = d.train_y.mean();
  d.train_y.array() -= d.response_mean;
  return d;
}

ProstateData load_prostate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("prostate: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_prostate(ss.str());
}

std::string default_prostate_path() {
  if (const char* env = std::getenv("L0FLOW_PROSTATE")) return env;
  return std::string(L0FLOW_DATA_DIR) + "/prostate.csv";
}

double prostate_test_error(const ProstateData& d, const Eigen::Ref<const Vector>& coef) {
  if (d.test_X.rows() == 0) throw DataError("prostate: no test rows");
  const Vector pred = (d.test_X * coef).array() + d.response_mean;
  return (pred - d.test_y).squaredNorm() / static_cast<double>(d.test_y.size());
}

double mse(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& s) {
  if (x.size() != s.size()) throw ConfigError("mse: length mismatch");
  if (x.size() == 0) return 0.0;
  return (x - s).squaredNorm() / static_cast<double>(x.size());
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("L0FLOW_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

std::vector<Index> nonzeros(const Vector& s) {
  std::vector<Index> out;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) != 0) out.push_back(i);
  }
  return out;
}

std::vector<Index> support_of(const Vector& x, double tol) {
  std::vector<Index> out;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) >= tol) out.push_back(i);
  }
  return out;
}

Vector start_point(const ExperimentConfig& c, const Vector& upper, std::uint64_t seed) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  switch (c.start) {
    case StartKind::Ones: return upper.cwiseMin(1.0);
    case StartKind::RandomBox: return rng.uniform_in(upper);
    case StartKind::RandomUnit: return rng.uniform_in(upper.cwiseMin(1.0));
  }
  return upper.cwiseMin(1.0);
}

void run_one(const ExperimentConfig& c, std::uint64_t seed, SeedResult& r) {
  r.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();

  std::optional<ProblemSpec> spec;
  Vector truth;
  bool split_problem = false;
  std::optional<ProstateData> prostate;
  const std::uint64_t inst_seed = c.instance_seed.value_or(seed);

  switch (c.kind) {
    case ExperimentKind::TestExample:
      spec = test_example_spec();
      truth = test_example_solution();
      break;
    case ExperimentKind::CompressedSensing: {
      auto [ts, s] = gen_compressed_sensing(c.n, c.m, c.sparsity, inst_seed, c.lambda, c.box_bound);
      spec = split(ts);
      truth = std::move(s);
      split_problem = true;
      break;
    }
    case ExperimentKind::VariableSelection: {
      auto [ps, s] = gen_variable_selection(c.n, c.m, c.sparsity, c.noise_scale, inst_seed, c.lambda,
                                            c.box_bound);
      spec = std::move(ps);
      truth = std::move(s);
      break;
    }
    case ExperimentKind::Prostate: {
      prostate = load_prostate(c.data_path.empty() ? default_prostate_path() : c.data_path);
      const Index p = prostate->train_X.cols();
      spec = split(TwoSidedSpec::quadratic(prostate->train_X, prostate->train_y,
                                           Vector::Constant(p, c.box_bound),
                                           Vector::Constant(p, c.box_bound), c.lambda));
      truth = Vector::Zero(p);
      for (Index i : {0, 1, 4}) truth(i) = 1;
      split_problem = true;
      break;
    }
  }

  const DynamicsParams params = make_dynamics_params(*spec, c.params);
  r.mu_star = params.mu_star;
  const double tol = num_zero_tol(params.mu_star);
  const Vector x0 = start_point(c, spec->box().upper(), seed);

  PipelineOptions opts;
  opts.correct_at_horizon = c.correct_at_horizon;
  opts.solve.sample_stride = 0;
  const PipelineReport rep = run_pipeline(*spec, params, x0, opts);

  r.solve_certificate = rep.solve.certificate;
  r.certificate = rep.certificate;
  r.iterations = rep.solve.iterations;
  r.final_time = rep.solve.final_time;
  r.objective = rep.objective_true;
  if (split_problem) {
    const Recombined fin = recombine_stacked(rep.final_x, tol);
    r.x = fin.cleaned;
    r.x_network = recombine_stacked(rep.solve.final_x, tol).raw;
    r.complementarity_violations = static_cast<long>(fin.complementarity_violations.size());
  } else {
    r.x = rep.final_x;
    r.x_network = rep.solve.final_x;
  }
  r.support = support_of(r.x, tol);
  if (c.kind == ExperimentKind::Prostate) {
    r.test_error = prostate_test_error(*prostate, r.x);
    r.mse = *r.test_error;
    r.mse_network = prostate_test_error(*prostate, r.x_network);
  } else {
    r.mse = mse(r.x, truth);
    r.mse_network = mse(r.x_network, truth);
  }
  r.support_recovered = r.support == nonzeros(truth);
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Aggregate aggregate(const std::vector<SeedResult>& results) {
  Aggregate a;
  std::size_t k = 0;
  for (const auto& r : results) {
    if (!r.ok) continue;
    if (k == 0) {
      a.min_mse = a.max_mse = r.mse;
      a.min_ms = a.max_ms = r.wall_ms;
    }
    a.mean_mse += r.mse;
    a.mean_ms += r.wall_ms;
    a.min_mse = std::min(a.min_mse, r.mse);
    a.max_mse = std::max(a.max_mse, r.mse);
    a.min_ms = std::min(a.min_ms, r.wall_ms);
    a.max_ms = std::max(a.max_ms, r.wall_ms);
    ++k;
  }
  if (k > 0) {
    a.mean_mse /= static_cast<double>(k);
    a.mean_ms /= static_cast<double>(k);
  }
  return a;
}

ExperimentReport run_experiment(const ExperimentConfig& config, unsigned workers) {
  if (config.sparsity > config.n) throw ConfigError("experiment: sparsity exceeds n");
  if ((config.kind == ExperimentKind::CompressedSensing ||
       config.kind == ExperimentKind::VariableSelection) &&
      config.m > config.n) {
    throw ConfigError("experiment: m exceeds n");
  }
  ExperimentReport rep;
  rep.config = config;
  rep.per_seed.resize(config.seeds.size());
  parallel_for(config.seeds.size(), workers == 0 ? worker_count() : workers, [&](std::size_t i) {
    SeedResult& r = rep.per_seed[i];
    try {
      run_one(config, config.seeds[i], r);
    } catch (const std::exception& e) {
      r.seed = config.seeds[i];
      r.ok = false;
      r.error = e.what();
    }
  });
  rep.aggregate = aggregate(rep.per_seed);
  return rep;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vec_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json p;
  p["gamma"] = opt(c.params.gamma);
  p["alpha0"] = opt(c.params.alpha0);
  p["beta"] = opt(c.params.beta);
  p["mu_star"] = opt(c.params.mu_star);
  p["schedule"] = c.params.schedule ? json(to_string(*c.params.schedule)) : json(nullptr);
  p["step"] = opt(c.params.step);
  p["horizon"] = opt(c.params.horizon);
  p["residual_tol"] = opt(c.params.residual_tol);
  json j;
  j["kind"] = to_string(c.kind);
  j["n"] = c.n;
  j["m"] = c.m;
  j["sparsity"] = c.sparsity;
  j["lambda"] = c.lambda;
  j["box_bound"] = c.box_bound;
  j["noise_scale"] = c.noise_scale;
  j["seeds"] = c.seeds;
  j["params"] = p;
  j["start"] = to_string(c.start);
  j["instance_seed"] = c.instance_seed ? json(*c.instance_seed) : json(nullptr);
  j["correct_at_horizon"] = c.correct_at_horizon;
  j["data_path"] = c.data_path;
  return j;
}

json to_json(const ExperimentReport& r) {
  json seeds = json::array();
  for (const auto& s : r.per_seed) {
    json e;
    e["seed"] = s.seed;
    e["ok"] = s.ok;
    e["error"] = s.error;
    e["mse"] = s.mse;
    e["mse_network"] = s.mse_network;
    e["support"] = s.support;
    e["support_recovered"] = s.support_recovered;
    e["objective"] = s.objective;
    e["certificate"] = to_string(s.certificate);
    e["solve_certificate"] = to_string(s.solve_certificate);
    e["mu_star"] = s.mu_star;
    e["iterations"] = s.iterations;
    e["final_time"] = s.final_time;
    e["wall_ms"] = s.wall_ms;
    e["complementarity_violations"] = s.complementarity_violations;
    e["test_error"] = opt(s.test_error);
    if (s.x.size() <= 32) e["x"] = vec_json(s.x);
    seeds.push_back(e);
  }
  json agg;
  agg["mean_mse"] = r.aggregate.mean_mse;
  agg["max_mse"] = r.aggregate.max_mse;
  agg["min_mse"] = r.aggregate.min_mse;
  agg["mean_ms"] = r.aggregate.mean_ms;
  agg["max_ms"] = r.aggregate.max_ms;
  agg["min_ms"] = r.aggregate.min_ms;
  json j;
  j["config"] = to_json(r.config);
  j["per_seed"] = seeds;
  j["aggregate"] = agg;
  return j;
}

ExperimentReport report_from_json(const json& j) {
  try {
    ExperimentReport r;
    const json& c = j.at("config");
    r.config.kind = experiment_from_string(c.at("kind").get<std::string>());
    r.config.n = c.at("n").get<Index>();
    r.config.m = c.at("m").get<Index>();
    r.config.sparsity = c.at("sparsity").get<Index>();
    r.config.lambda = c.at("lambda").get<double>();
    r.config.box_bound = c.at("box_bound").get<double>();
    r.config.noise_scale = c.at("noise_scale").get<double>();
    r.config.seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
    const json& p = c.at("params");
    r.config.params.gamma = opt_from(p, "gamma");
    r.config.params.alpha0 = opt_from(p, "alpha0");
    r.config.params.beta = opt_from(p, "beta");
    r.config.params.mu_star = opt_from(p, "mu_star");
    if (p.contains("schedule") && !p["schedule"].is_null()) {
      r.config.params.schedule = schedule_from_string(p["schedule"].get<std::string>());
    }
    r.config.params.step = opt_from(p, "step");
    r.config.params.horizon = opt_from(p, "horizon");
    r.config.params.residual_tol = opt_from(p, "residual_tol");
    r.config.start = start_from_string(c.at("start").get<std::string>());
    if (!c.at("instance_seed").is_null()) r.config.instance_seed = c["instance_seed"].get<std::uint64_t>();
    r.config.correct_at_horizon = c.at("correct_at_horizon").get<bool>();
    r.config.data_path = c.at("data_path").get<std::string>();

    for (const json& e : j.at("per_seed")) {
      SeedResult s;
      s.seed = e.at("seed").get<std::uint64_t>();
      s.ok = e.at("ok").get<bool>();
      s.error = e.at("error").get<std::string>();
      s.mse = e.at("mse").get<double>();
      s.mse_network = e.at("mse_network").get<double>();
      s.support = e.at("support").get<std::vector<Index>>();
      s.support_recovered = e.at("support_recovered").get<bool>();
      s.objective = e.at("objective").get<double>();
      s.certificate = certificate_from_string(e.at("certificate").get<std::string>());
      s.solve_certificate = certificate_from_string(e.at("solve_certificate").get<std::string>());
      s.mu_star = e.at("mu_star").get<double>();
      s.iterations = e.at("iterations").get<long>();
      s.final_time = e.at("final_time").get<double>();
      s.wall_ms = e.at("wall_ms").get<double>();
      s.complementarity_violations = e.at("complementarity_violations").get<long>();
      s.test_error = opt_from(e, "test_error");
      if (e.contains("x")) s.x = vec_from(e["x"]);
      r.per_seed.push_back(std::move(s));
    }
    const json& a = j.at("aggregate");
    r.aggregate.mean_mse = a.at("mean_mse").get<double>();
    r.aggregate.max_mse = a.at("max_mse").get<double>();
    r.aggregate.min_mse = a.at("min_mse").get<double>();
    r.aggregate.mean_ms = a.at("mean_ms").get<double>();
    r.aggregate.max_ms = a.at("max_ms").get<double>();
    r.aggregate.min_ms = a.at("min_ms").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("report JSON: ") + e.what());
  }
}

std::string format_table(const ExperimentReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "seed" << std::setw(14) << "mse" << std::setw(14) << "mse_network"
     << std::setw(8) << "|supp|" << std::setw(10) << "recovered" << std::setw(19) << "certificate"
     << "ms\n";
  os << std::scientific << std::setprecision(4);
  for (const auto& s : r.per_seed) {
    os << std::setw(8) << s.seed;
    if (!s.ok) {
      os << "error: " << s.error << '\n';
      continue;
    }
    os << std::setw(14) << s.mse << std::setw(14) << s.mse_network << std::setw(8) << s.support.size()
       << std::setw(10) << (s.support_recovered ? "yes" : "no") << std::setw(19)
       << to_string(s.certificate) << std::fixed << std::setprecision(1) << s.wall_ms
       << std::scientific << std::setprecision(4) << '\n';
  }
  const Aggregate& a = r.aggregate;
  os << "\n" << std::setw(8) << "" << std::setw(14) << "MSE" << "ms\n";
  os << std::setw(8) << "Mean" << std::setw(14) << a.mean_mse << std::fixed << std::setprecision(1)
     << a.mean_ms << std::scientific << std::setprecision(4) << '\n';
  os << std::setw(8) << "Max" << std::setw(14) << a.max_mse << std::fixed << std::setprecision(1)
     << a.max_ms << std::scientific << std::setprecision(4) << '\n';
  os << std::setw(8) << "Min" << std::setw(14) << a.min_mse << std::fixed << std::setprecision(1)
     << a.min_ms << '\n';
  return os.str();
}

}  // namespace l0flow
