#pragma once

// The acceptance suite: thirteen end-to-end checks with fixed seeds and
// tolerances, shared by the acceptance test binary and `alab selftest`.

#include <string>
#include <vector>

namespace alab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 13;

// Runs criterion `id` (1-based). Exceptions inside a check count as failure.
CriterionResult run_criterion(int id, int threads = 1);
std::vector<CriterionResult> run_acceptance(int threads = 1);

// "[PASS] 3 uniform-cell model: ... (0.12 s)"
std::string format_result(const CriterionResult& r);

}  // namespace alab
