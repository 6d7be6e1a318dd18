#include "rabi/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rabi/errors.hpp"
#include "rabi/exceptional.hpp"

namespace rabi {

namespace {

constexpr double kTailRatio = 1e-14;
constexpr double kLocusTol = 1e-8;

// Coefficients in z of sum_n h_n (1/2 + t z)^n.
std::vector<double> compose_affine(const HeunSeries& s, double t) {
  const int degree = s.truncation_degree();
  std::vector<double> out(static_cast<std::size_t>(degree) + 1, 0.0);
  for (int n = 0; n <= degree; ++n) {
    const double h = s.coefficient(static_cast<std::size_t>(n));
    double binom = 1.0;  // C(n, j)
    for (int j = 0; j <= n; ++j) {
      out[j] += h * binom * std::pow(0.5, n - j) * std::pow(t, j);
      binom = binom * (n - j) / (j + 1);
    }
  }
  return out;
}

PolynomialWavefunction combine(const PolynomialWavefunction& a, const PolynomialWavefunction& b,
                               double sign, WaveComponent which) {
  PolynomialWavefunction out;
  out.exponent = a.exponent;
  out.component = which;
  out.coeffs.assign(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) out.coeffs[i] += sign * b.coeffs[i];
  return out;
}

// Amplitudes of poly(a^dag) e^{c a^dag}|0> on |0..n_c>.
std::vector<double> fock_amplitudes(const PolynomialWavefunction& w, int n_c) {
  std::vector<double> amp(static_cast<std::size_t>(n_c) + 1, 0.0);
  const double c = w.exponent;
  for (int j = 0; j < static_cast<int>(w.coeffs.size()) && j <= n_c; ++j) {
    // term_k = c^{k-j} sqrt(k!) / (k-j)!, starting from sqrt(j!) at k = j.
    double term = std::sqrt(std::tgamma(j + 1.0));
    for (int k = j; k <= n_c; ++k) {
      amp[k] += w.coeffs[j] * term;
      term *= c * std::sqrt(k + 1.0) / (k + 1.0 - j);
    }
  }
  return amp;
}

}  // namespace

double PolynomialWavefunction::value(double z) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc * std::exp(exponent * z);
}

std::pair<PolynomialWavefunction, PolynomialWavefunction> reexpand_components(
    const SolutionPair& pair) {
  if (pair.plus_series.status() != SeriesStatus::TruncatedPolynomial ||
      pair.minus_series.status() != SeriesStatus::TruncatedPolynomial) {
    throw UnsupportedParameter("state reconstruction needs terminating series in both components");
  }
  const double t = pair.coordinate_slope();
  const double exponent = pair.exponent_sign() * pair.params.g;
  PolynomialWavefunction plus{exponent, compose_affine(pair.plus_series, t),
                              WaveComponent::PsiPlus};
  PolynomialWavefunction minus{exponent, compose_affine(pair.minus_series, t),
                               WaveComponent::PsiMinus};
  for (double& c : plus.coeffs) c *= pair.scale_plus;
  for (double& c : minus.coeffs) c *= pair.scale_minus;
  return {plus, minus};
}

std::pair<PolynomialWavefunction, PolynomialWavefunction> reexpand(const SolutionPair& pair) {
  const auto [plus, minus] = reexpand_components(pair);
  return {combine(plus, minus, 1.0, WaveComponent::Psi1),
          combine(plus, minus, -1.0, WaveComponent::Psi2)};
}

SpinFockState fock_expand(const PolynomialWavefunction& psi1, const PolynomialWavefunction& psi2,
                          int n_c) {
  if (psi1.exponent != psi2.exponent) {
    throw std::invalid_argument("fock_expand: components must share the exponential factor");
  }
  if (n_c < 1) throw std::invalid_argument("fock_expand: cutoff must be >= 1");
  const auto up = fock_amplitudes(psi1, n_c);
  const auto down = fock_amplitudes(psi2, n_c);

  std::vector<double> amps(2 * static_cast<std::size_t>(n_c + 1));
  double peak = 0.0;
  for (int n = 0; n <= n_c; ++n) {
    amps[2 * n + static_cast<int>(Spin::Down)] = down[n];
    amps[2 * n + static_cast<int>(Spin::Up)] = up[n];
    peak = std::max({peak, std::abs(down[n]), std::abs(up[n])});
  }
  const double tail = std::max(std::abs(down[n_c]), std::abs(up[n_c]));
  if (!(tail < kTailRatio * peak)) {
    throw TruncationError("Fock expansion not converged at cutoff " + std::to_string(n_c) +
                          "; increase n_c");
  }
  return SpinFockState(n_c, std::move(amps)).normalized();
}

SpinFockState exceptional_state(int n, Branch branch, const RabiParams& p, int n_c) {
  const SolutionPair pair = build_pair(family_for(branch), candidate_energy(n, branch, p), p);
  const auto [psi1, psi2] = reexpand(pair);
  return fock_expand(psi1, psi2, n_c);
}

std::vector<double> coherent_amplitudes(double beta, int n_c) {
  std::vector<double> out(static_cast<std::size_t>(n_c) + 1);
  double a = std::exp(-0.5 * beta * beta);
  for (int k = 0; k <= n_c; ++k) {
    out[k] = a;
    a *= beta / std::sqrt(k + 1.0);
  }
  return out;
}

std::vector<double> photon_added_amplitudes(double beta, int n_c) {
  const auto coh = coherent_amplitudes(beta, n_c);
  const double norm = std::sqrt(1.0 + beta * beta);
  std::vector<double> out(static_cast<std::size_t>(n_c) + 1, 0.0);
  for (int k = 1; k <= n_c; ++k) out[k] = std::sqrt(static_cast<double>(k)) * coh[k - 1] / norm;
  return out;
}

double closed_form_state_check(const RabiParams& p, Branch branch, int n_c) {
  if (std::abs(closed_form_relation(1, branch, p)) > kLocusTol * closed_form_scale(1, branch, p)) {
    throw DomainError("parameters are not on the N = 1 exceptional locus");
  }
  const double g = p.g, d = p.delta;
  const bool plus = branch == Branch::Plus;
  const double denom = plus ? 1.0 + 2.0 * p.epsilon : 1.0 - 2.0 * p.epsilon;
  const double beta = plus ? -g : g;
  const double c = std::sqrt(1.0 + g * g) * 2.0 * g / denom;  // sqrt(L_1(-g^2)) 2g / denom
  const double a_first = 1.0 + (d - 2.0 * g * g) / denom;
  const double a_second = 1.0 - (d + 2.0 * g * g) / denom;

  // first: the spin component carrying psi_1, second: the one carrying psi_2.
  const auto coh = coherent_amplitudes(beta, n_c);
  const auto pac = photon_added_amplitudes(beta, n_c);
  std::vector<double> amps(2 * static_cast<std::size_t>(n_c + 1));
  for (int k = 0; k <= n_c; ++k) {
    double first = 0.0, second = 0.0;
    if (plus) {
      first = a_first * coh[k] + c * pac[k];
      second = a_second * coh[k] + c * pac[k];
    } else {
      first = a_first * coh[k] - c * pac[k];
      second = -(a_second * coh[k] - c * pac[k]);
    }
    amps[2 * k + static_cast<int>(Spin::Up)] = first;
    amps[2 * k + static_cast<int>(Spin::Down)] = second;
  }
  const SpinFockState closed = SpinFockState(n_c, std::move(amps)).normalized();
  const SpinFockState rebuilt = exceptional_state(1, branch, p, n_c);
  return 1.0 - eigenvector_overlap(closed, rebuilt);
}

}  // namespace rabi
