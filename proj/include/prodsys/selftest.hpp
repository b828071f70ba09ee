#pragma once

// The acceptance suite: ten numbered criteria, each reduced to one pass/fail
// line. Shared by the acceptance test binary and `prodsys selftest`.

#include <cstdint>
#include <string>
#include <vector>

namespace prodsys::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double max_defect = 0.0;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0: no limit
};

inline constexpr int kCriterionCount = 10;

/// Runs criterion `id` (1..10). Random trials draw from mt19937_64(seed).
/// Exceptions are reported as failures.
CriterionResult run_criterion(int id, std::uint64_t seed);
std::vector<CriterionResult> run_all(std::uint64_t seed);

/// "PASS  [ 1] euler_limit  max_defect=...  t=...s  detail"
std::string format_line(const CriterionResult& r);

}  // namespace prodsys::selftest
