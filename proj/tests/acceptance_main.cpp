// Prints one line per acceptance criterion and fails if any criterion fails.
#include <cstdio>

#include "rabi/acceptance.hpp"

int main() {
  const auto results = rabi::run_acceptance();
  for (const auto& r : results) {
    std::printf("%s criterion %2d %-28s %7.2f s  %s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.c_str());
  }
  return rabi::all_passed(results) ? 0 : 1;
}
