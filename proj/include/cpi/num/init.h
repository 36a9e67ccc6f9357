#pragma once

#include "cpi/num/tensor.h"
#include "cpi/random.h"

namespace cpi::num {

// Trainable tensor with entries uniform in (-bound, bound).
Tensor uniform_param(Shape shape, double bound, Rng& rng);
// Trainable tensor with entries N(0, 1 / fan_in).
Tensor scaled_normal_param(Shape shape, std::size_t fan_in, Rng& rng);
Tensor zeros_param(Shape shape);
Tensor ones_param(Shape shape);

}  // namespace cpi::num
