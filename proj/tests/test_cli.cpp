#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

// stdout only; stderr is redirected into stdout when `merge` is set
CliRun run(const std::string& args, bool merge = false) {
  const std::string cmd = std::string(L0FLOW_CLI) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t k;
  while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), k);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string example() { return std::string(L0FLOW_DATA_DIR) + "/test_example.json"; }

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Cli, SolveExample) {
  const CliRun r = run("solve " + example());
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["certificate"], "CertifiedLocalMin");
  EXPECT_NEAR(j["x"][0].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(j["x"][1].get<double>(), 23.0 / 38.0, 1e-9);
  EXPECT_EQ(j["support"], json::array({1}));
  EXPECT_FALSE(j["split"].get<bool>());
}

TEST(Cli, SolveWritesOutAndTrajectory) {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string out = (dir / "l0flow_cli_out.json").string();
  const std::string traj = (dir / "l0flow_cli_traj.csv").string();
  const CliRun r = run("solve " + example() + " --out " + out + " --traj " + traj);
  ASSERT_EQ(r.code, 0);
  std::ifstream jf(out), tf(traj);
  const json j = json::parse(jf);
  EXPECT_EQ(j["certificate"], "CertifiedLocalMin");
  std::string header;
  std::getline(tf, header);
  EXPECT_EQ(header, "t,objective_smooth,residual,mu");
  std::filesystem::remove(out);
  std::filesystem::remove(traj);
}

TEST(Cli, NotConvergedExitCode) {
  EXPECT_EQ(run("solve " + example() + " --horizon 1e-6").code, 2);
}

TEST(Cli, OverridesAreApplied) {
  const CliRun r = run("solve " + example() + " --gamma 2 --schedule exponential --beta 0.5");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["params"]["gamma"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(j["params"]["step"].get<double>(), 0.005);
  EXPECT_EQ(j["params"]["schedule"], "exponential");
}

TEST(Cli, InvalidMuStarNamesTerm) {
  const CliRun r = run("solve " + example() + " --mu-star 0.0025", true);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("2*lambda/(n*L_f)"), std::string::npos) << r.out;
}

TEST(Cli, DataErrorsNameField) {
  const std::string bad = write_temp("l0flow_bad_lambda.json",
                                     R"({"A": [[1]], "b": [1], "lambda": -1, "upper": [1]})");
  CliRun r = run("solve " + bad, true);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("'lambda'"), std::string::npos) << r.out;

  const std::string syntax = write_temp("l0flow_bad_syntax.json", "{\n\"A\": [[1]],\n\"b\": [1,\n");
  r = run("solve " + syntax, true);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("line"), std::string::npos) << r.out;
  std::filesystem::remove(bad);
  std::filesystem::remove(syntax);
}

TEST(Cli, TwoSidedProblemIsSplit) {
  const std::string f = write_temp("l0flow_two_sided.json",
                                   R"({"A": [[1, 0], [0, 1], [1, 1]], "b": [2, -1, 1], "lambda": 0.1,
                                       "upper": [3, 3], "lower": [3, 3]})");
  const CliRun r = run("solve " + f);
  std::filesystem::remove(f);
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["split"].get<bool>());
  ASSERT_EQ(j["x"].size(), 2u);
  EXPECT_GT(j["x"][0].get<double>(), 0);
  EXPECT_LT(j["x"][1].get<double>(), 0);
}

TEST(Cli, MissingFileAndUsageErrors) {
  EXPECT_EQ(run("solve /nonexistent/problem.json").code, 1);
  EXPECT_EQ(run("bench lasso").code, 1);
  EXPECT_EQ(run("solve").code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST(Cli, BenchTestExample) {
  const CliRun r = run("bench test-example --json");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["per_seed"].size(), 6u);
  for (const auto& s : j["per_seed"]) EXPECT_EQ(s["certificate"], "CertifiedLocalMin");
  const CliRun t = run("bench test-example --seeds 2");
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("Mean"), std::string::npos);
}

TEST(Cli, BenchMissingProstateData) {
  EXPECT_EQ(run("bench prostate --data /nonexistent/prostate.csv").code, 1);
}

TEST(Cli, CheckSuite) {
  EXPECT_EQ(run("check").code, 0);
  const CliRun j = run("check --json");
  EXPECT_EQ(j.code, 0);
  EXPECT_NO_THROW(json::parse(j.out));
  EXPECT_EQ(run("check --inject-fault").code, 1);
}

TEST(Cli, Defaults) {
  const CliRun r = run("--defaults");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["dynamics"]["gamma"].get<double>(), 1.0);
  EXPECT_TRUE(j["bench"].contains("cs"));
}

TEST(Cli, Help) {
  const CliRun r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("solve"), std::string::npos);
}
