#pragma once

#include <compare>

namespace rabi {

/// Energy eigenvalue in reduced units (E / omega).
struct Energy {
  double value = 0.0;

  constexpr Energy() = default;
  constexpr explicit Energy(double v) : value(v) {}

  friend constexpr auto operator<=>(const Energy&, const Energy&) = default;
};

/// Physical parameters of H = omega a^dag a + g sigma_x (a^dag + a)
///                            + delta sigma_z + epsilon sigma_x.
///
/// All library routines expect reduced parameters (omega == 1); convert once
/// with reduced() at the boundary.
struct RabiParams {
  double omega = 1.0;
  double g = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;

  /// Throws std::invalid_argument unless omega > 0 and all fields are finite.
  void validate() const;

  /// Copy with omega = 1 and (g, delta, epsilon) divided by omega.
  [[nodiscard]] RabiParams reduced() const;

  [[nodiscard]] bool is_reduced() const { return omega == 1.0; }

  friend bool operator==(const RabiParams&, const RabiParams&) = default;
};

/// Parameters of the confluent Heun equation
///   phi'' + (alpha + (beta+1)/x + (gamma+1)/(x-1)) phi' + (mu x + nu)/(x(x-1)) phi = 0.
struct HeunParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double eta = 0.0;

  [[nodiscard]] double mu() const { return delta + alpha * (beta + gamma + 2.0) / 2.0; }
  [[nodiscard]] double nu() const {
    return eta + beta / 2.0 + (gamma - alpha) * (beta + 1.0) / 2.0;
  }

  friend bool operator==(const HeunParams&, const HeunParams&) = default;
};

// Parameter set governing the psi_+ component of the first solution family
// (expansion about x = (g - z) / 2g).
HeunParams heun_params_plus(Energy e, const RabiParams& p);

// Parameter set governing the psi_- component of the first solution family.
HeunParams heun_params_minus(Energy e, const RabiParams& p);

// Maps a first-family set to the second family: beta <-> gamma, delta -> -delta,
// eta -> eta + delta.
HeunParams swap_family(const HeunParams& hp);

}  // namespace rabi
