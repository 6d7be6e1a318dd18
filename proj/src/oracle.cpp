#include "rabi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace rabi {

namespace {

constexpr int kMinCutoff = 40;
constexpr int kMaxCutoff = 2048;

}  // namespace

SpinFockState::SpinFockState(int cutoff, std::vector<double> amplitudes)
    : cutoff_(cutoff), amplitudes_(std::move(amplitudes)) {
  if (cutoff < 0 || amplitudes_.size() != 2 * static_cast<std::size_t>(cutoff + 1)) {
    throw std::invalid_argument("SpinFockState: amplitude count must be 2 (cutoff + 1)");
  }
}

double SpinFockState::amplitude(int n, Spin s) const {
  if (n < 0 || n > cutoff_) return 0.0;
  return amplitudes_[2 * static_cast<std::size_t>(n) + static_cast<std::size_t>(s)];
}

double SpinFockState::norm() const {
  double sum = 0.0;
  for (const double a : amplitudes_) sum += a * a;
  return std::sqrt(sum);
}

SpinFockState SpinFockState::normalized() const {
  const double nrm = norm();
  if (nrm == 0.0) throw std::invalid_argument("cannot normalize a zero state");
  std::vector<double> out(amplitudes_);
  for (double& a : out) a /= nrm;
  return SpinFockState(cutoff_, std::move(out));
}

SpinFockState SpinFockState::resized(int cutoff) const {
  std::vector<double> out(2 * static_cast<std::size_t>(cutoff + 1), 0.0);
  const std::size_t keep = std::min(out.size(), amplitudes_.size());
  std::copy_n(amplitudes_.begin(), keep, out.begin());
  return SpinFockState(cutoff, std::move(out));
}

Eigen::VectorXd SpinFockState::to_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(amplitudes_.data(),
                                           static_cast<Eigen::Index>(amplitudes_.size()));
}

Eigen::MatrixXd build_hamiltonian(const RabiParams& p, int n_c) {
  if (n_c < 1) throw std::invalid_argument("build_hamiltonian: cutoff must be >= 1");
  const Eigen::Index dim = 2 * (n_c + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n <= n_c; ++n) {
    const Eigen::Index dn = 2 * n;  // (n, down)
    const Eigen::Index up = dn + 1;  // (n, up)
    h(dn, dn) = n - p.delta;
    h(up, up) = n + p.delta;
    h(dn, up) = h(up, dn) = p.epsilon;
    if (n < n_c) {
      // g sigma_x (a + a^dag) links (n, s) with (n + 1, flipped s).
      const double c = p.g * std::sqrt(static_cast<double>(n + 1));
      h(dn, up + 2) = h(up + 2, dn) = c;
      h(up, dn + 2) = h(dn + 2, up) = c;
    }
  }
  return h;
}

OracleResult diagonalize(const RabiParams& p, int n_c, bool with_vectors) {
  const Eigen::MatrixXd h = build_hamiltonian(p, n_c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      h, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");

  OracleResult out;
  out.cutoff_used = n_c;
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  if (with_vectors) {
    const auto& vecs = solver.eigenvectors();
    out.eigenvectors.reserve(static_cast<std::size_t>(vecs.cols()));
    for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
      std::vector<double> amps(vecs.col(j).data(), vecs.col(j).data() + vecs.rows());
      out.eigenvectors.emplace_back(n_c, std::move(amps));
    }
  }
  out.converged_count = static_cast<int>(out.eigenvalues.size());
  out.requested = out.converged_count;
  return out;
}

OracleResult eigen(const RabiParams& p, int k, double tol, bool with_vectors) {
  if (k < 1) throw std::invalid_argument("eigen: k must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("eigen: tol must be positive");

  const double load = k + p.g * p.g + std::abs(p.epsilon) + std::abs(p.delta);
  int n_c = std::max(kMinCutoff, static_cast<int>(std::ceil(10.0 * load)));
  n_c = std::min(n_c, kMaxCutoff);

  OracleResult prev = diagonalize(p, n_c, false);
  int converged = 0;
  while (2 * n_c <= kMaxCutoff) {
    n_c *= 2;
    OracleResult next = diagonalize(p, n_c, false);
    converged = 0;
    while (converged < k &&
           std::abs(next.eigenvalues[converged] - prev.eigenvalues[converged]) < tol) {
      ++converged;
    }
    prev = std::move(next);
    if (converged == k) break;
  }

  OracleResult out = with_vectors ? diagonalize(p, prev.cutoff_used, true) : std::move(prev);
  out.requested = k;
  out.converged_count = converged;
  return out;
}

double eigenvector_overlap(const SpinFockState& a, const SpinFockState& b) {
  const int cut = std::max(a.cutoff(), b.cutoff());
  const Eigen::VectorXd va = a.resized(cut).to_vector();
  const Eigen::VectorXd vb = b.resized(cut).to_vector();
  return std::min(1.0, std::abs(va.dot(vb)));
}

double subspace_overlap(const SpinFockState& state, const OracleResult& result, double energy,
                        double tol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < result.eigenvalues.size() && i < result.eigenvectors.size(); ++i) {
    if (std::abs(result.eigenvalues[i] - energy) <= tol) {
      const double o = eigenvector_overlap(state, result.eigenvectors[i]);
      sum += o * o;
    }
  }
  return std::min(1.0, std::sqrt(sum));
}

double spectral_norm(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double hamiltonian_residual(const SpinFockState& v, double energy, const RabiParams& p) {
  const Eigen::MatrixXd h = build_hamiltonian(p, v.cutoff());
  const Eigen::VectorXd x = v.to_vector();
  return (h * x - energy * x).norm() / spectral_norm(h);
}

}  // namespace rabi
