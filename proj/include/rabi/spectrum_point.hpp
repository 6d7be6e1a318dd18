#pragma once

#include <limits>
#include <string_view>

#include "rabi/model.hpp"

namespace rabi {

enum class Branch { Plus, Minus };

enum class LevelKind { Regular, Exceptional };

// How a level was obtained.
enum class Provenance {
  Wronskian,       // sign-change root of W+
  Truncation,      // closed-form energy with a terminating Heun series
  OracleAssisted,  // missed by both analytic routes, filled from diagonalization
  OracleOnly,      // g = 0, analytic path unavailable
};

struct SpectrumPoint {
  Energy energy;
  LevelKind kind = LevelKind::Regular;
  int n = 0;                     // unified exceptional index, 0 for regular levels
  Branch branch = Branch::Plus;  // meaningful for exceptional levels only
  // Relative |W+| at the root for regular levels, truncation residual for
  // exceptional ones.
  double residual = 0.0;
  double oracle_delta = std::numeric_limits<double>::quiet_NaN();
  int degeneracy = 1;
  Provenance provenance = Provenance::Wronskian;
  bool flagged = false;  // gap entry or a root without an oracle partner
};

std::string_view to_string(Branch b);
std::string_view to_string(LevelKind k);
std::string_view to_string(Provenance p);

}  // namespace rabi
