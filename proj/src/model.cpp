#include "rabi/model.hpp"

#include <cmath>
#include <stdexcept>

namespace rabi {

void RabiParams::validate() const {
  if (!std::isfinite(omega) || !(omega > 0.0)) {
    throw std::invalid_argument("omega must be finite and positive");
  }
  if (!std::isfinite(g) || !std::isfinite(delta) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("g, delta and epsilon must be finite");
  }
}

RabiParams RabiParams::reduced() const {
  validate();
  return RabiParams{1.0, g / omega, delta / omega, epsilon / omega};
}

HeunParams heun_params_plus(Energy e, const RabiParams& p) {
  const double E = e.value;
  const double g2 = p.g * p.g;
  const double eps = p.epsilon;
  HeunParams hp;
  hp.alpha = 4.0 * g2;
  hp.beta = -(E + eps + g2 + 1.0);
  hp.gamma = -(E - eps + g2);
  hp.delta = -2.0 * (1.0 - 2.0 * eps) * g2;
  hp.eta = -1.5 * g2 * g2 + (1.0 - 2.0 * E - 4.0 * eps) * g2 / 2.0 +
           (E * E + E - eps * eps + eps - 2.0 * p.delta * p.delta + 1.0) / 2.0;
  return hp;
}

HeunParams heun_params_minus(Energy e, const RabiParams& p) {
  const double E = e.value;
  const double g2 = p.g * p.g;
  const double eps = p.epsilon;
  HeunParams hp;
  hp.alpha = 4.0 * g2;
  hp.beta = -(E + eps + g2);
  hp.gamma = -(E - eps + g2 + 1.0);
  hp.delta = 2.0 * (1.0 + 2.0 * eps) * g2;
  hp.eta = -1.5 * g2 * g2 - (3.0 + 2.0 * E + 4.0 * eps) * g2 / 2.0 +
           (E * E + E - eps * eps - eps - 2.0 * p.delta * p.delta + 1.0) / 2.0;
  return hp;
}

HeunParams swap_family(const HeunParams& hp) {
  return HeunParams{hp.alpha, hp.gamma, hp.beta, -hp.delta, hp.eta + hp.delta};
}

}  // namespace rabi
