#include "l0flow/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "l0flow/splitting.hpp"

namespace l0flow {

using nlohmann::json;

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw DataError("field '" + field + "' must be a number");
  return j.get<double>();
}

Vector vector_field(const json& j, const std::string& field) {
  if (!j.is_array()) throw DataError("field '" + field + "' must be an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError("problem JSON syntax error at " + line_col(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw DataError("problem JSON must be an object");
  for (const char* key : {"A", "b", "lambda", "upper"}) {
    if (!doc.contains(key)) throw DataError(std::string("missing field '") + key + "'");
  }

  ProblemFile p;
  const json& A = doc["A"];
  if (!A.is_array() || A.empty()) throw DataError("field 'A' must be a non-empty array of rows");
  const std::size_t m = A.size();
  if (!A[0].is_array()) throw DataError("field 'A[0]' must be an array");
  const std::size_t n = A[0].size();
  p.A.resize(static_cast<Index>(m), static_cast<Index>(n));
  for (std::size_t i = 0; i < m; ++i) {
    const std::string name = "A[" + std::to_string(i) + "]";
    if (!A[i].is_array() || A[i].size() != n) {
      throw DataError("field '" + name + "' must be an array of " + std::to_string(n) + " numbers");
    }
    for (std::size_t j = 0; j < n; ++j) {
      p.A(static_cast<Index>(i), static_cast<Index>(j)) =
          number(A[i][j], name + "[" + std::to_string(j) + "]");
    }
  }
  p.b = vector_field(doc["b"], "b");
  if (static_cast<std::size_t>(p.b.size()) != m) {
    throw DataError("field 'b' has " + std::to_string(p.b.size()) + " entries but 'A' has " +
                    std::to_string(m) + " rows");
  }
  p.lambda = number(doc["lambda"], "lambda");
  if (!(p.lambda > 0)) throw DataError("field 'lambda' must be positive");

  const json& up = doc["upper"];
  if (up.is_number()) {
    p.upper = Vector::Constant(static_cast<Index>(n), up.get<double>());
  } else {
    p.upper = vector_field(up, "upper");
  }
  if (static_cast<std::size_t>(p.upper.size()) != n) {
    throw DataError("field 'upper' has " + std::to_string(p.upper.size()) + " entries but 'A' has " +
                    std::to_string(n) + " columns");
  }
  if ((p.upper.array() < 0).any()) throw DataError("field 'upper' must be nonnegative");
  if (doc.contains("lower")) {
    Vector lo = vector_field(doc["lower"], "lower");
    if (static_cast<std::size_t>(lo.size()) != n) {
      throw DataError("field 'lower' has " + std::to_string(lo.size()) + " entries but 'A' has " +
                      std::to_string(n) + " columns");
    }
    if ((lo.array() < 0).any()) throw DataError("field 'lower' holds magnitudes and must be nonnegative");
    p.lower = std::move(lo);
  }
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string dump_problem(const ProblemFile& p) {
  json doc;
  json rows = json::array();
  for (Index i = 0; i < p.A.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < p.A.cols(); ++j) row.push_back(p.A(i, j));
    rows.push_back(row);
  }
  doc["A"] = rows;
  doc["b"] = std::vector<double>(p.b.data(), p.b.data() + p.b.size());
  doc["lambda"] = p.lambda;
  doc["upper"] = std::vector<double>(p.upper.data(), p.upper.data() + p.upper.size());
  if (p.lower) doc["lower"] = std::vector<double>(p.lower->data(), p.lower->data() + p.lower->size());
  return doc.dump(2);
}

LoadedProblem build_problem(const ProblemFile& p) {
  const Index n = p.A.cols();
  if (p.lower) {
    TwoSidedSpec ts = TwoSidedSpec::quadratic(p.A, p.b, *p.lower, p.upper, p.lambda);
    return {split(ts), true, n};
  }
  return {ProblemSpec::quadratic(p.A, p.b, BoxSet::one_sided(p.upper), p.lambda), false, n};
}

}  // namespace l0flow
