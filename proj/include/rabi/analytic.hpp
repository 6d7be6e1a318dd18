#pragma once

#include <optional>
#include <vector>

#include "rabi/heun.hpp"
#include "rabi/model.hpp"
#include "rabi/spectrum_point.hpp"

namespace rabi {

enum class Family { First, Second };
enum class Component { Plus, Minus };

/// One of the two analytic solution pairs (psi_+, psi_-).
///
/// First family:  psi_+- = scale_+- e^{-gz} HC(.., x1),  x1 = (g - z) / 2g
/// Second family: psi_+- = scale_+- e^{+gz} HC(.., x2),  x2 = (g + z) / 2g
struct SolutionPair {
  Family family = Family::First;
  HeunSeries plus_series;
  HeunSeries minus_series;
  double scale_plus = 1.0;
  double scale_minus = 1.0;
  Energy energy;
  RabiParams params;

  [[nodiscard]] double coordinate(double z) const;
  [[nodiscard]] double coordinate_slope() const;  // dx/dz
  [[nodiscard]] double exponent_sign() const;     // -1 for First, +1 for Second
  [[nodiscard]] const HeunSeries& series(Component c) const {
    return c == Component::Plus ? plus_series : minus_series;
  }
  [[nodiscard]] double scale(Component c) const {
    return c == Component::Plus ? scale_plus : scale_minus;
  }
};

/// Throws UnsupportedParameter for g == 0 and PoleError when the
/// normalization denominator E + g^2 +- epsilon vanishes.
SolutionPair build_pair(Family family, Energy e, const RabiParams& p);

struct ComponentValue {
  double value = 0.0;
  double derivative = 0.0;
  SeriesStatus status = SeriesStatus::Converged;
};

/// psi(z) and dpsi/dz for one component. Propagates DivergentSolution and
/// DomainError from the series.
ComponentValue eval_component(const SolutionPair& pair, Component which, double z);

struct WronskianSample {
  Energy energy;
  double w_plus = 0.0;
  double w_minus = 0.0;
  bool reliable = false;
};

/// W+ = psi_+^2 dpsi_+^1/dz - psi_+^1 dpsi_+^2/dz, and the same for psi_-.
/// Pole energies and divergent or unconverged series give reliable = false.
WronskianSample wronskian(Energy e, const RabiParams& p, double z = 0.0);

/// W+ alone; nullopt when the sample would be unreliable.
std::optional<double> wronskian_plus(Energy e, const RabiParams& p, double z = 0.0);

/// Energies N - g^2 +- epsilon (N >= 0) inside [lo, hi], ascending.
std::vector<double> exceptional_candidates(const RabiParams& p, double lo, double hi);

struct RegularSearchOptions {
  double exclusion_half_width = 1e-3;
  bool suppress_exclusion = false;
  int max_bisections = 200;
};

/// Regular spectrum in [e_min, e_max] from sign changes of W+(E, 0).
///
/// The grid is cut at exclusion windows around every exceptional candidate;
/// brackets never straddle a window. A bracket is kept only if bisection
/// drives |W+| below its endpoint values, which discards poles.
///
/// Throws std::invalid_argument for e_min >= e_max, grid_n < 100 or tol <= 0,
/// and UnsupportedParameter for g == 0.
std::vector<SpectrumPoint> find_regular_spectrum(const RabiParams& p, double e_min,
                                                 double e_max, int grid_n, double tol,
                                                 const RegularSearchOptions& opts = {});

/// Regular roots strictly inside the exclusion windows of [e_min, e_max].
///
/// Inside a window W+ has a pole at each candidate energy c, so the search
/// brackets sign changes of W+(E) * prod (E - c) instead, sampled at
/// `samples` points per window. Roots at a remaining pole are discarded by
/// the same growth test as find_regular_spectrum.
std::vector<SpectrumPoint> find_window_roots(const RabiParams& p, double e_min, double e_max,
                                             double half_width, int samples, double tol);

}  // namespace rabi
