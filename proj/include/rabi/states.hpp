#pragma once

#include <utility>
#include <vector>

#include "rabi/analytic.hpp"
#include "rabi/oracle.hpp"
#include "rabi/spectrum_point.hpp"

namespace rabi {

enum class WaveComponent { Psi1, Psi2, PsiPlus, PsiMinus };

/// poly(z) e^{exponent z} with exponent = -g (first family) or +g (second).
struct PolynomialWavefunction {
  double exponent = 0.0;
  std::vector<double> coeffs;  // coefficients of z^0, z^1, ...
  WaveComponent component = WaveComponent::Psi1;

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  [[nodiscard]] double value(double z) const;
};

/// psi_+ and psi_- of a terminating pair as polynomials in z, obtained by
/// composing each Heun polynomial with x = 1/2 -+ z / 2g and applying the
/// scale factors. Throws UnsupportedParameter if either series is not a
/// polynomial.
std::pair<PolynomialWavefunction, PolynomialWavefunction> reexpand_components(
    const SolutionPair& pair);

/// psi_1 = psi_+ + psi_- and psi_2 = psi_+ - psi_-.
std::pair<PolynomialWavefunction, PolynomialWavefunction> reexpand(const SolutionPair& pair);

/// Fock amplitudes of psi_1(a^dag)|0> on spin up and psi_2(a^dag)|0> on spin
/// down, normalized. The coefficient of (a^dag)^k times sqrt(k!) is the |k>
/// amplitude.
///
/// Throws std::invalid_argument if the exponents differ and TruncationError
/// if the amplitude at n_c is not below 1e-14 of the largest one.
SpinFockState fock_expand(const PolynomialWavefunction& psi1, const PolynomialWavefunction& psi2,
                          int n_c);

/// Reconstructed eigenstate of the exceptional level (N, branch).
SpinFockState exceptional_state(int n, Branch branch, const RabiParams& p, int n_c);

/// Coherent state |beta> truncated at n_c (not renormalized).
std::vector<double> coherent_amplitudes(double beta, int n_c);

/// Photon-added coherent state a^dag|beta> / sqrt(1 + beta^2), truncated at n_c.
std::vector<double> photon_added_amplitudes(double beta, int n_c);

/// 1 - |<closed form|reconstruction>| for the N = 1 level of the branch,
/// where the closed form is the coherent plus photon-added coherent
/// superposition. Throws DomainError if p is off the N = 1 locus.
double closed_form_state_check(const RabiParams& p, Branch branch, int n_c);

}  // namespace rabi
