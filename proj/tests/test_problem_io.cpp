#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "l0flow/problem_io.hpp"

using namespace l0flow;

namespace {

const char* kExample = R"({
  "A": [[1, 3], [3, 2], [1, 5]],
  "b": [2, 1, 3],
  "lambda": 1,
  "upper": [5, 5]
})";

std::string error_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseProblem, Example) {
  const ProblemFile p = parse_problem(kExample);
  EXPECT_EQ(p.A.rows(), 3);
  EXPECT_EQ(p.A.cols(), 2);
  EXPECT_DOUBLE_EQ(p.A(2, 1), 5);
  EXPECT_EQ(p.b, Eigen::Vector3d(2, 1, 3));
  EXPECT_DOUBLE_EQ(p.lambda, 1);
  EXPECT_EQ(p.upper, Eigen::Vector2d(5, 5));
  EXPECT_FALSE(p.lower.has_value());
}

TEST(ParseProblem, ScalarUpperAndLower) {
  const ProblemFile p = parse_problem(R"({"A": [[1, 0], [0, 1]], "b": [1, -1], "lambda": 0.5,
                                          "upper": 2, "lower": [1, 3]})");
  EXPECT_EQ(p.upper, Eigen::Vector2d(2, 2));
  ASSERT_TRUE(p.lower.has_value());
  EXPECT_EQ(*p.lower, Eigen::Vector2d(1, 3));
}

TEST(ParseProblem, ErrorsNameTheField) {
  EXPECT_NE(error_of(R"({"b": [1], "lambda": 1, "upper": [1]})").find("'A'"), std::string::npos);
  EXPECT_NE(error_of(R"({"A": [[1]], "lambda": 1, "upper": [1]})").find("'b'"), std::string::npos);
  EXPECT_NE(error_of(R"({"A": [[1]], "b": [1], "lambda": 0, "upper": [1]})").find("'lambda'"), std::string::npos);
  EXPECT_NE(error_of(R"({"A": [[1]], "b": [1], "lambda": "x", "upper": [1]})").find("'lambda'"), std::string::npos);
  EXPECT_NE(error_of(R"({"A": [[1, 2], [3]], "b": [1, 2], "lambda": 1, "upper": 1})").find("'A[1]'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"A": [[1, "q"]], "b": [1], "lambda": 1, "upper": 1})").find("'A[0][1]'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"A": [[1]], "b": [1, 2], "lambda": 1, "upper": [1]})").find("'b'"), std::string::npos);
  EXPECT_NE(error_of(R"({"A": [[1]], "b": [1], "lambda": 1, "upper": [-1]})").find("'upper'"), std::string::npos);
  EXPECT_NE(error_of(R"({"A": [[1]], "b": [1], "lambda": 1, "upper": [1, 2]})").find("'upper'"), std::string::npos);
  EXPECT_NE(error_of(R"({"A": [[1]], "b": [1], "lambda": 1, "upper": [1], "lower": [-2]})").find("'lower'"),
            std::string::npos);
  EXPECT_NE(error_of("[1, 2]").find("object"), std::string::npos);
}

TEST(ParseProblem, SyntaxErrorReportsLineAndColumn) {
  const std::string msg = error_of("{\n  \"A\": [[1]],\n  \"b\": [1,]\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(DumpProblem, RoundTrip) {
  ProblemFile p = parse_problem(kExample);
  p.lower = Eigen::Vector2d(0.5, 1.25);
  const ProblemFile q = parse_problem(dump_problem(p));
  EXPECT_EQ(q.A, p.A);
  EXPECT_EQ(q.b, p.b);
  EXPECT_EQ(q.upper, p.upper);
  EXPECT_EQ(*q.lower, *p.lower);
  EXPECT_DOUBLE_EQ(q.lambda, p.lambda);
}

TEST(LoadProblem, BundledExampleAndMissingFile) {
  const ProblemFile p = load_problem(std::string(L0FLOW_DATA_DIR) + "/test_example.json");
  EXPECT_EQ(p.A.rows(), 3);
  EXPECT_THROW(load_problem("/nonexistent/problem.json"), DataError);
}

TEST(BuildProblem, OneSidedAndSplit) {
  const LoadedProblem one = build_problem(parse_problem(kExample));
  EXPECT_FALSE(one.split);
  EXPECT_EQ(one.spec.dimension(), 2);
  EXPECT_DOUBLE_EQ(one.spec.grad_bound(), 474);

  ProblemFile p = parse_problem(kExample);
  p.lower = Eigen::Vector2d(1, 1);
  const LoadedProblem two = build_problem(p);
  EXPECT_TRUE(two.split);
  EXPECT_EQ(two.original_dimension, 2);
  EXPECT_EQ(two.spec.dimension(), 4);
  EXPECT_EQ(two.spec.box().upper(), Eigen::Vector4d(5, 5, 1, 1));
}
