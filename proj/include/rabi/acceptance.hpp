#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rabi {

struct AcceptanceOptions {
  std::uint64_t seed = 20240613;
  // Replaces every comparison threshold when set; used to force failures.
  std::optional<double> tol_override;
  // Restrict to these criterion ids (1..10); empty runs all.
  std::vector<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the quantitative acceptance criteria in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// One line per criterion: "PASS 1 name: detail". No timings, so the report
/// is reproducible.
void write_report(const std::vector<CriterionResult>& results, std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace rabi
