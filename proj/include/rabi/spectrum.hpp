#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rabi/exceptional.hpp"
#include "rabi/oracle.hpp"
#include "rabi/spectrum_point.hpp"

namespace rabi {

struct AssembleOptions {
  int grid_n = 2000;
  double root_tol = 1e-12;
  double truncation_tol = kExceptionalTol;
  double exclusion_half_width = 1e-3;
  int window_samples = 120;  // per exclusion window, for roots hidden inside it
  double oracle_tol = 1e-10;
  double gap_tol = 1e-4;        // oracle level with no point this close is a gap
  double match_tol = 1e-6;      // larger oracle_delta flags a point
  double dedup_tol = kDegeneracyTol;
};

/// Oracle eigenvalues covering [.., e_max]: k grows until the k-th converged
/// eigenvalue lies above e_max.
OracleResult oracle_covering(const RabiParams& p, double e_max, double tol);

/// Regular roots and exceptional levels in [e_min, e_max], merged and
/// checked against the oracle.
///
/// Regular roots come from the windowed Wronskian scan plus the pole-free
/// search inside each exclusion window; a window root closer than match_tol
/// to an accepted exceptional level is that level and is dropped.
/// Exceptional candidates are tried for 1 <= N <= n_max. Points closer than
/// dedup_tol collapse into one with the combined degeneracy, which is then
/// raised to the oracle multiplicity if larger. Oracle levels not covered by
/// any point become flagged OracleAssisted entries. At g = 0 the result is
/// oracle-only. A precomputed oracle covering the window may be supplied.
///
/// Throws std::invalid_argument when e_min >= e_max.
std::vector<SpectrumPoint> assemble(const RabiParams& p, double e_min, double e_max, int n_max,
                                    const AssembleOptions& opts = {},
                                    const OracleResult* oracle = nullptr);

/// Number of levels counting degeneracy.
int level_count(const std::vector<SpectrumPoint>& points);

struct SweepOptions {
  AssembleOptions assemble;
  int n_max = 4;
  int levels = 10;  // window per axis value when no fixed window is given
  std::optional<std::pair<double, double>> window;
  int marker_steps = 400;  // grid for locating exceptional loci
};

struct SweepMarker {
  ExceptionalPoint point;
  int degeneracy = 1;
};

struct SweepFailure {
  double axis_value = 0.0;
  std::string message;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::G;
  RabiParams templ;
  AxisRange range;
  SweepOptions options;
  std::vector<double> axis_values;
  std::vector<std::pair<double, double>> windows;
  std::vector<std::vector<SpectrumPoint>> levels;
  std::vector<SweepMarker> markers;
  std::vector<SweepFailure> failures;
};

/// Spectrum at every axis value plus the exceptional loci along the axis.
/// A failing axis value is recorded and leaves an empty level list.
///
/// Throws std::invalid_argument when steps < 2.
SweepResult sweep(const RabiParams& templ, SweepAxis axis, const AxisRange& range,
                  const SweepOptions& opts = {});

std::string_view to_string(SweepAxis a);

}  // namespace rabi
