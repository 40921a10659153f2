#pragma once

#include <optional>
#include <string>

#include "l0flow/model.hpp"

namespace l0flow {

/// Contents of a problem file:
///   {"A": [[...], ...], "b": [...], "lambda": x,
///    "upper": [...] or k, "lower": [...] (optional magnitudes)}
struct ProblemFile {
  Matrix A;
  Vector b;
  double lambda = 1.0;
  Vector upper;
  std::optional<Vector> lower;
};

/// Parses problem JSON text. Throws DataError naming the offending field, or
/// with line and column for syntax errors.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);
std::string dump_problem(const ProblemFile& p);

struct LoadedProblem {
  ProblemSpec spec;
  /// True when the file had "lower" and spec is the split 2n problem.
  bool split = false;
  Index original_dimension = 0;
};

LoadedProblem build_problem(const ProblemFile& p);

}  // namespace l0flow
