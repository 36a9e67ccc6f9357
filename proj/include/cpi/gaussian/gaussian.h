#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cpi/corpus/span.h"
#include "cpi/num/tensor.h"

namespace cpi::corpus {
struct Instance;
}

namespace cpi::gaussian {

// Config keys gaussian.mu, gaussian.sigma, gaussian.window.
struct GaussianConfig {
  double mu = 0.0;
  double sigma = 3.0;
  int window = 1;
  // Rescale pooling weights to sum to 1 over the unmasked positions. Off by
  // default: the pooled vector is the raw probability-weighted sum.
  bool renormalize = false;

  void validate() const;
};

// Complementary error function, Abramowitz-Stegun 7.1.26 rational form,
// absolute error <= 1.5e-7. Defined for all real x via erfc(-x) = 2 - erfc(x).
double erfc_approx(double x);

// Normal density with mean mu and standard deviation sigma.
double pdf(double x, const GaussianConfig& cfg);
// Normal distribution function. Absolute error <= 1e-7.
double cdf(double x, const GaussianConfig& cfg);
// Mass of the token window ending at x: cdf(x) - cdf(x - window).
double window_prob(double x, const GaussianConfig& cfg);

// Signed token distances to each target span.
struct DistanceLists {
  std::vector<int> x1;
  std::vector<int> x2;
};

// Distance of every position in [0, n) to the nearest token of `span`:
// 0 inside, negative to the left, positive to the right.
std::vector<int> relative_distances(std::size_t n, corpus::TokenSpan span);
// Throws ValidationError if either target span is missing.
DistanceLists relative_distances(const corpus::Instance& instance);

// Pooling weights window_prob(x_i), 0 where `keep` is false. An empty
// `keep` keeps every position.
std::vector<double> pool_weights(std::span<const int> distances, const GaussianConfig& cfg,
                                 const std::vector<bool>& keep = {});

// Target-entity-aware representation: sum_i window_prob(x_i) * u_i over
// token_reps [N x d], returning [d]. Differentiable in token_reps.
num::Tensor target_aware_pool(std::span<const int> distances, const num::Tensor& token_reps,
                              const GaussianConfig& cfg, const std::vector<bool>& keep = {});

}  // namespace cpi::gaussian
