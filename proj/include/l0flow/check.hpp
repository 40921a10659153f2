#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace l0flow {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckOptions {
  /// Test hook: corrupts one property so the suite must fail.
  bool inject_fault = false;
  std::uint64_t seed = 7;
};

/// Fast invariant suite: smoothing continuity and gradients, projection
/// idempotence and nonexpansiveness, partition properties.
std::vector<CheckResult> run_invariant_checks(const CheckOptions& options = {});

void print_checks(const std::vector<CheckResult>& results, std::ostream& os, bool json);

}  // namespace l0flow
