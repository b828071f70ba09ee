// Runs the ten acceptance criteria and prints one line per criterion.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "prodsys/selftest.hpp"

int main() {
  std::uint64_t seed = 0;
  if (const char* env = std::getenv("PRODSYS_SEED")) seed = std::stoull(env);
  int failures = 0;
  for (int id = 1; id <= prodsys::selftest::kCriterionCount; ++id) {
    const auto r = prodsys::selftest::run_criterion(id, seed);
    std::printf("%s\n", prodsys::selftest::format_line(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  std::printf("%d/%d criteria passed (seed %llu)\n", prodsys::selftest::kCriterionCount - failures,
              prodsys::selftest::kCriterionCount, static_cast<unsigned long long>(seed));
  return failures == 0 ? 0 : 1;
}
