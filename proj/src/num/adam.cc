#include "cpi/num/adam.h"

#include <cmath>

namespace cpi::num {

void AdamConfig::validate() const {
  if (!(lr > 0.0)) throw Error("adam: learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw Error("adam: beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw Error("adam: beta2 must lie in [0, 1)");
  if (!(eps > 0.0)) throw Error("adam: eps must be positive");
}

AdamState make_adam_state(const AdamConfig& config, std::span<const Tensor> params) {
  config.validate();
  AdamState state;
  state.config = config;
  for (const auto& p : params) {
    state.m.emplace_back(p.size(), 0.0);
    state.v.emplace_back(p.size(), 0.0);
  }
  return state;
}

void adam_step(std::span<Tensor> params, AdamState& state) {
  const AdamConfig& c = state.config;
  c.validate();
  if (params.size() != state.m.size()) {
    throw Error("adam: state tracks " + std::to_string(state.m.size()) + " parameters, got " +
                std::to_string(params.size()));
  }
  ++state.step;
  const double correction1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  for (std::size_t j = 0; j < params.size(); ++j) {
    Tensor& p = params[j];
    auto& m = state.m[j];
    auto& v = state.v[j];
    if (m.size() != p.size()) {
      throw ShapeError("adam: moment size " + std::to_string(m.size()) + " vs parameter " +
                       shape_str(p.shape()));
    }
    auto values = p.mutable_data();
    const auto grad = p.grad();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double g = grad.empty() ? 0.0 : grad[i];
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      values[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
  }
}

double clip_grad_norm(std::span<Tensor> params, double max_norm) {
  double total = 0.0;
  for (const auto& p : params) {
    for (double g : p.grad()) total += g * g;
  }
  const double norm = std::sqrt(total);
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / norm;
    for (auto& p : params) {
      for (double& g : p.mutable_grad()) g *= factor;
    }
  }
  return norm;
}

}  // namespace cpi::num
