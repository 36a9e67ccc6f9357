#include "cpi/num/grad_check.h"

#include <algorithm>
#include <cmath>

namespace cpi::num {

GradCheckResult grad_check(const std::function<Tensor()>& f, std::span<Tensor> inputs, double h) {
  if (!(h >= 1e-6 && h <= 1e-3)) throw Error("grad_check: step must lie in [1e-6, 1e-3]");
  for (auto& t : inputs) t.zero_grad();
  const Tensor out = f();
  if (out.size() != 1) {
    throw ShapeError("grad_check: function output " + shape_str(out.shape()) + " is not a scalar");
  }
  out.backward();

  GradCheckResult result;
  NoGradGuard no_grad;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    Tensor& input = inputs[j];
    const std::vector<double> analytic = input.has_grad()
        ? std::vector<double>(input.grad().begin(), input.grad().end())
        : std::vector<double>(input.size(), 0.0);
    auto values = input.mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + h;
      const double plus = f().item();
      values[i] = saved - h;
      const double minus = f().item();
      values[i] = saved;

      const double numeric = (plus - minus) / (2.0 * h);
      const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
      const double err = std::abs(analytic[i] - numeric) / denom;
      ++result.components;
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_input = j;
        result.worst_element = i;
        result.worst_analytic = analytic[i];
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace cpi::num
