#pragma once

#include <limits>
#include <string_view>
#include <vector>

#include "rabi/analytic.hpp"
#include "rabi/model.hpp"
#include "rabi/spectrum_point.hpp"

namespace rabi {

inline constexpr double kExceptionalTol = 1e-10;

/// E = N - g^2 + epsilon (Plus) or N - g^2 - epsilon (Minus).
/// Throws std::invalid_argument for N < 0.
Energy candidate_energy(int n, Branch branch, const RabiParams& p);

/// Family whose series terminate on the given branch.
Family family_for(Branch branch);

/// Larger of the two normalized truncation residuals at candidate_energy.
///
/// Plus: first family, psi_+ truncates at N and psi_- at N - 1.
/// Minus: second family, psi_+ truncates at N - 1 and psi_- at N.
/// Vanishes exactly when an exceptional eigenvalue exists. Requires N >= 1.
double constraint_residual(int n, Branch branch, const RabiParams& p);

/// Signed truncation residual of the degree-N component; changes sign
/// across the exceptional locus and is used for bracketing.
double constraint_value(int n, Branch branch, const RabiParams& p);

/// Left minus right side of the closed-form locus for N in {1, 2}:
///   N = 1:  delta^2 + 4 g^2 - (1 +- 2 epsilon)
///   N = 2:  64 g^2 + delta^4 + 4 delta^2 + 4 - (16 g^2 + 3 delta^2 -+ 8 epsilon - 6)^2
/// (upper signs for Plus). Throws std::invalid_argument for other N.
double closed_form_relation(int n, Branch branch, const RabiParams& p);

/// Magnitude of the terms entering closed_form_relation, at least 1.
double closed_form_scale(int n, Branch branch, const RabiParams& p);

struct ExceptionalPoint {
  int n = 0;
  Branch branch = Branch::Plus;
  Energy energy;
  double constraint_residual = 0.0;
  Family family = Family::First;
  double axis_value = 0.0;
  RabiParams params;
  double oracle_delta = std::numeric_limits<double>::quiet_NaN();
  bool verified = false;  // oracle eigenvalue within 1e-6
};

enum class SweepAxis { G, Epsilon };

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;

  [[nodiscard]] double at(int i) const {
    return steps <= 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
  }
};

/// Sets g or epsilon of a template.
RabiParams with_axis(const RabiParams& p, SweepAxis axis, double value);

/// All exceptional points with 1 <= N <= n_max along the sweep axis.
///
/// The signed constraint is sampled on the grid, sign changes are refined by
/// bisection and a root is kept when constraint_residual <= tol. Accepted
/// points are checked against the oracle. Points are ordered by axis value,
/// then N, then branch. Grid points at g = 0 are skipped.
///
/// Throws std::invalid_argument for n_max outside [1, 10], fewer than 200
/// steps, or tol <= 0.
std::vector<ExceptionalPoint> scan_exceptional(const RabiParams& templ, SweepAxis axis,
                                               const AxisRange& range, int n_max,
                                               double tol = kExceptionalTol,
                                               bool verify_with_oracle = true);

/// E(Plus) - E(Minus) for two points with the same N. Throws
/// std::invalid_argument when N differs or both points share a branch.
double pair_separation(const ExceptionalPoint& plus, const ExceptionalPoint& minus);

enum class CrossingStatus { Found, Boundary, NotFound };

struct CrossingPoint {
  int n1 = 0;
  int n2 = 0;
  double epsilon_star = 0.0;
  double g_star = 0.0;
  double delta = 0.0;
  // delta^2 + 4 g*^2; equals 2 on the (1, 2) locus.
  double delta_relation = 0.0;
  Energy energy;
  double plus_residual = 0.0;
  double minus_residual = 0.0;
  CrossingStatus status = CrossingStatus::NotFound;
};

/// Coupling at which Plus(N1) and Minus(N2) meet, at epsilon* = (N2 - N1) / 2.
///
/// Roots of the Plus constraint in g in (0, g_max] are accepted when the
/// Minus constraint also holds to tol; the smallest accepted g is returned.
/// A locus that only touches g = 0 yields Boundary.
///
/// Throws std::invalid_argument unless N2 > N1 >= 1.
CrossingPoint find_crossings(double delta, int n1, int n2, double tol = kExceptionalTol,
                             double g_max = 3.0);

/// |LHS - RHS| of
///   64 g^2 + delta^4 + 4 delta^2 + 4 - (16 g^2 + 3 delta^2 + 8 eps - 6)^2
///     = -16 (delta^2 + 4 g^2 - 2)(3 delta^2 + 16 g^2 - 3)
/// with eps = (delta^2 + 4 g^2 - 1) / 2. The second value is |RHS|.
struct IdentityCheck {
  double deviation = 0.0;
  double rhs_magnitude = 0.0;
};
IdentityCheck factorization_identity_check(double g, double delta);

std::string_view to_string(CrossingStatus s);

}  // namespace rabi
