#include "cpi/num/init.h"

#include <cmath>

namespace cpi::num {

Tensor uniform_param(Shape shape, double bound, Rng& rng) {
  std::vector<double> data(numel(shape));
  for (double& x : data) x = rng.uniform(-bound, bound);
  return Tensor::from(std::move(shape), std::move(data), true);
}

Tensor scaled_normal_param(Shape shape, std::size_t fan_in, Rng& rng) {
  const double stddev = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::vector<double> data(numel(shape));
  for (double& x : data) x = rng.normal() * stddev;
  return Tensor::from(std::move(shape), std::move(data), true);
}

Tensor zeros_param(Shape shape) { return Tensor::zeros(std::move(shape), true); }

Tensor ones_param(Shape shape) { return Tensor::full(std::move(shape), 1.0, true); }

}  // namespace cpi::num
