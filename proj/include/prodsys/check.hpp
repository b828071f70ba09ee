#pragma once

#include <string>
#include <vector>

namespace prodsys {

/// Outcome of one numerical identity check.
struct CheckResult {
  std::string name;
  bool pass = false;
  double max_defect = 0.0;
  std::string detail;  // e.g. the worst block or level
};

inline bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

}  // namespace prodsys
