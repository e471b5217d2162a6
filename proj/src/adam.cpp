#include "boulderfit/adam.hpp"

#include <cmath>

#include "boulderfit/error.hpp"

namespace boulderfit {

void AdamConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error("adam learning rate must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw Error("adam beta1 must lie in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw Error("adam beta2 must lie in (0, 1)");
  if (!(eps > 0.0)) throw Error("adam eps must be positive");
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, const AdamConfig& cfg) {
  if (params.size() != grads.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
    throw Error("adam_step: parameter, gradient and moment sizes disagree");
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    state.m[k] = cfg.beta1 * state.m[k] + (1.0 - cfg.beta1) * g;
    state.v[k] = cfg.beta2 * state.v[k] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = state.m[k] / bias1;
    const double v_hat = state.v[k] / bias2;
    params[k] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

}  // namespace boulderfit
