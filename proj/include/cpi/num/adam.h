#pragma once

#include <span>
#include <vector>

#include "cpi/num/tensor.h"

namespace cpi::num {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  // Throws on lr <= 0, betas outside [0, 1), or eps <= 0.
  void validate() const;
};

struct AdamState {
  AdamConfig config;
  long step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

AdamState make_adam_state(const AdamConfig& config, std::span<const Tensor> params);

// One bias-corrected Adam update of every parameter from its accumulated
// gradient. A parameter without a gradient is treated as having grad 0.
void adam_step(std::span<Tensor> params, AdamState& state);

// Rescales all gradients so their joint L2 norm is at most `max_norm`.
// Returns the norm before rescaling. max_norm <= 0 disables clipping.
double clip_grad_norm(std::span<Tensor> params, double max_norm);

}  // namespace cpi::num
