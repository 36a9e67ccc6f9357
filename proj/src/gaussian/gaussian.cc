#include "cpi/gaussian/gaussian.h"

#include <cmath>

#include "cpi/corpus/instance.h"
#include "cpi/num/ops.h"

namespace cpi::gaussian {

void GaussianConfig::validate() const {
  if (!(sigma > 0.0)) throw ValidationError("gaussian.sigma must be positive");
  if (window < 1) throw ValidationError("gaussian.window must be a positive integer");
}

double erfc_approx(double x) {
  if (x < 0.0) return 2.0 - erfc_approx(-x);
  constexpr double p = 0.3275911;
  constexpr double a1 = 0.254829592;
  constexpr double a2 = -0.284496736;
  constexpr double a3 = 1.421413741;
  constexpr double a4 = -1.453152027;
  constexpr double a5 = 1.061405429;
  // The published coefficients sum to 1 + 1e-9; dividing by the sum makes
  // erfc(0) exactly 1, so the distribution function is continuous at the mean.
  constexpr double norm = a1 + a2 + a3 + a4 + a5;
  const double t = 1.0 / (1.0 + p * x);
  const double poly = t * (a1 + t * (a2 + t * (a3 + t * (a4 + t * a5))));
  return poly * std::exp(-x * x) / norm;
}

double pdf(double x, const GaussianConfig& cfg) {
  cfg.validate();
  const double z = (x - cfg.mu) / cfg.sigma;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * M_PI) * cfg.sigma);
}

double cdf(double x, const GaussianConfig& cfg) {
  cfg.validate();
  const double z = (x - cfg.mu) / (cfg.sigma * M_SQRT2);
  // Evaluate the tail on the side where it is small so both tails keep
  // their relative accuracy and cdf(mu + a) + cdf(mu - a) == 1.
  if (z >= 0.0) return 1.0 - 0.5 * erfc_approx(z);
  return 0.5 * erfc_approx(-z);
}

double window_prob(double x, const GaussianConfig& cfg) {
  return cdf(x, cfg) - cdf(x - cfg.window, cfg);
}

std::vector<int> relative_distances(std::size_t n, corpus::TokenSpan span) {
  if (span.first > span.last || span.last >= n) {
    throw ValidationError("relative_distances: span [" + std::to_string(span.first) + ", " +
                          std::to_string(span.last) + "] outside " + std::to_string(n) +
                          " tokens");
  }
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < span.first) out[i] = static_cast<int>(i) - static_cast<int>(span.first);
    else if (i > span.last) out[i] = static_cast<int>(i) - static_cast<int>(span.last);
    else out[i] = 0;
  }
  return out;
}

DistanceLists relative_distances(const corpus::Instance& instance) {
  if (!instance.target1 || !instance.target2) {
    throw ValidationError("instance " + instance.instance_id + " is missing a target span");
  }
  const std::size_t n = instance.tokens.size();
  return {relative_distances(n, *instance.target1), relative_distances(n, *instance.target2)};
}

std::vector<double> pool_weights(std::span<const int> distances, const GaussianConfig& cfg,
                                 const std::vector<bool>& keep) {
  cfg.validate();
  if (!keep.empty() && keep.size() != distances.size()) {
    throw num::ShapeError("pool_weights: " + std::to_string(distances.size()) +
                          " distances vs mask of " + std::to_string(keep.size()));
  }
  std::vector<double> weights(distances.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (!keep.empty() && !keep[i]) continue;
    weights[i] = window_prob(distances[i], cfg);
    total += weights[i];
  }
  if (cfg.renormalize && total > 0.0) {
    for (double& w : weights) w /= total;
  }
  return weights;
}

num::Tensor target_aware_pool(std::span<const int> distances, const num::Tensor& token_reps,
                              const GaussianConfig& cfg, const std::vector<bool>& keep) {
  if (token_reps.rank() != 2 || token_reps.dim(0) != distances.size()) {
    throw num::ShapeError("target_aware_pool: shape mismatch " + num::shape_str(token_reps.shape()) +
                          " vs [" + std::to_string(distances.size()) + "]");
  }
  const std::size_t n = distances.size();
  auto weights = num::Tensor::from({1, n}, pool_weights(distances, cfg, keep));
  return num::reshape(num::matmul(weights, token_reps), {token_reps.dim(1)});
}

}  // namespace cpi::gaussian
