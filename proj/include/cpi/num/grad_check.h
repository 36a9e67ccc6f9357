#pragma once

#include <functional>
#include <span>
#include <string>

#include "cpi/num/tensor.h"

namespace cpi::num {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t components = 0;
  // Input index and flat element of the worst component.
  std::size_t worst_input = 0;
  std::size_t worst_element = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares the reverse-mode gradient of the scalar `f` with respect to each
// tensor in `inputs` against central differences (f(x+h) - f(x-h)) / 2h.
// `f` must read the inputs through the same handles, since they are
// perturbed in place. The relative error of a component is
// |a - n| / max(|a|, |n|, 1e-8).
GradCheckResult grad_check(const std::function<Tensor()>& f, std::span<Tensor> inputs,
                           double h = 1e-5);

}  // namespace cpi::num
