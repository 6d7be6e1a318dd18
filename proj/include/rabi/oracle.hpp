#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "rabi/model.hpp"

namespace rabi {

enum class Spin { Down = 0, Up = 1 };

/// Real amplitudes over the basis (n, spin), n = 0..cutoff, stored with spin
/// interleaved: index 2n + spin.
class SpinFockState {
 public:
  SpinFockState() = default;
  SpinFockState(int cutoff, std::vector<double> amplitudes);

  [[nodiscard]] int cutoff() const { return cutoff_; }
  [[nodiscard]] const std::vector<double>& amplitudes() const { return amplitudes_; }
  [[nodiscard]] double amplitude(int n, Spin s) const;
  [[nodiscard]] double norm() const;

  [[nodiscard]] SpinFockState normalized() const;
  // Zero-pads (or truncates) to a new cutoff.
  [[nodiscard]] SpinFockState resized(int cutoff) const;

  [[nodiscard]] Eigen::VectorXd to_vector() const;

 private:
  int cutoff_ = 0;
  std::vector<double> amplitudes_;
};

inline constexpr double kDegeneracyTol = 1e-8;

/// Real symmetric matrix of H in the truncated basis, dimension 2 (n_c + 1).
/// Diagonal n - delta for spin down and n + delta for spin up.
Eigen::MatrixXd build_hamiltonian(const RabiParams& p, int n_c);

struct OracleResult {
  std::vector<double> eigenvalues;           // ascending
  std::vector<SpinFockState> eigenvectors;   // empty unless requested
  int cutoff_used = 0;
  int converged_count = 0;
  int requested = 0;
};

/// Full diagonalization at a fixed cutoff.
OracleResult diagonalize(const RabiParams& p, int n_c, bool with_vectors = false);

/// Lowest k eigenvalues with cutoff doubling: starts at
/// max(40, ceil(10 (k + g^2 + |epsilon| + |delta|))) and doubles until the first k
/// eigenvalues move by less than tol, or the cutoff would exceed 2048. In the
/// latter case converged_count < k.
OracleResult eigen(const RabiParams& p, int k, double tol, bool with_vectors = false);

/// |<a|b>| for normalized inputs; the shorter state is zero-padded.
double eigenvector_overlap(const SpinFockState& a, const SpinFockState& b);

/// Norm of the projection of `state` onto the span of every eigenvector in
/// `result` whose eigenvalue lies within tol of `energy`. Reduces to
/// eigenvector_overlap for a non-degenerate level.
double subspace_overlap(const SpinFockState& state, const OracleResult& result, double energy,
                        double tol = kDegeneracyTol);

/// Spectral norm of a symmetric matrix.
double spectral_norm(const Eigen::MatrixXd& h);

/// ||H v - E v|| / ||H|| with H built at the state's cutoff.
double hamiltonian_residual(const SpinFockState& v, double energy, const RabiParams& p);

}  // namespace rabi
