#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "cpi/corpus/instance.h"
#include "cpi/gaussian/gaussian.h"
#include "cpi/num/grad_check.h"
#include "cpi/num/ops.h"
#include "cpi/random.h"

namespace cpi::gaussian {
namespace {

double density(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// Composite Simpson integral of the density over [a, b] with step at most h.
double simpson(double a, double b, double mu, double sigma, double h = 1e-4) {
  if (a == b) return 0.0;
  long n = static_cast<long>(std::ceil(std::abs(b - a) / h));
  if (n % 2) ++n;
  const double step = (b - a) / static_cast<double>(n);
  double s = density(a, mu, sigma) + density(b, mu, sigma);
  for (long i = 1; i < n; ++i) {
    s += (i % 2 ? 4.0 : 2.0) * density(a + step * static_cast<double>(i), mu, sigma);
  }
  return s * step / 3.0;
}

double simpson_cdf(double x, double mu, double sigma) { return 0.5 + simpson(mu, x, mu, sigma); }

TEST(GaussianTest, PdfAtModeAndSymmetry) {
  GaussianConfig cfg;
  EXPECT_NEAR(pdf(0.0, cfg), 1.0 / (3.0 * std::sqrt(2.0 * std::numbers::pi)), 1e-15);
  EXPECT_NEAR(pdf(0.0, cfg), 0.1329808, 1e-7);
  for (double a : {1.0, 2.0, 5.0}) EXPECT_DOUBLE_EQ(pdf(a, cfg), pdf(-a, cfg));
  cfg.mu = 1.5;
  for (double a : {1.0, 2.0, 5.0}) EXPECT_NEAR(pdf(1.5 + a, cfg), pdf(1.5 - a, cfg), 1e-15);
}

TEST(GaussianTest, PdfMatchesClosedForm) {
  GaussianConfig cfg;
  EXPECT_NEAR(pdf(3.0, cfg), std::exp(-0.5) / (3.0 * std::sqrt(2.0 * std::numbers::pi)), 1e-12);
}

TEST(GaussianTest, NonPositiveSigmaIsRejected) {
  GaussianConfig cfg;
  cfg.sigma = 0.0;
  EXPECT_THROW(pdf(0.0, cfg), Error);
  EXPECT_THROW(cdf(0.0, cfg), Error);
  EXPECT_THROW(window_prob(0.0, cfg), Error);
  cfg.sigma = 1.0;
  cfg.window = 0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(GaussianTest, CdfAtMeanAndReflection) {
  GaussianConfig cfg;
  EXPECT_NEAR(cdf(0.0, cfg), 0.5, 1e-15);
  cfg.mu = 2.0;
  for (double x = -10.0; x <= 14.0; x += 0.75) {
    EXPECT_NEAR(cdf(x, cfg) + cdf(4.0 - x, cfg), 1.0, 1e-7) << x;
  }
}

TEST(GaussianTest, CdfMatchesSimpsonOracle) {
  GaussianConfig cfg;
  EXPECT_NEAR(cdf(3.0, cfg), 0.8413447, 1e-7);
  EXPECT_NEAR(cdf(3.0, cfg), simpson_cdf(3.0, 0.0, 3.0), 1e-7);
  for (double x = -12.0; x <= 12.0; x += 0.5) {
    EXPECT_NEAR(cdf(x, cfg), simpson_cdf(x, 0.0, 3.0), 1e-7) << x;
  }
}

TEST(GaussianTest, ErfcApproximationAgreesWithLibrary) {
  for (double x = -6.0; x <= 6.0; x += 0.01) EXPECT_NEAR(erfc_approx(x), std::erfc(x), 1.5e-7) << x;
}

TEST(GaussianTest, WindowProbMatchesIntegral) {
  GaussianConfig cfg;
  EXPECT_NEAR(window_prob(0.0, cfg), 0.130559, 1e-6);
  for (int x = -30; x <= 30; ++x) {
    const double oracle = simpson(x - 1.0, x, 0.0, 3.0);
    EXPECT_NEAR(window_prob(x, cfg), oracle, 1e-6) << x;
  }
}

TEST(GaussianTest, WindowSymmetryAboutHalfWindow) {
  for (int w : {1, 2, 3}) {
    GaussianConfig cfg;
    cfg.window = w;
    for (int x = -3; x <= 4; ++x) EXPECT_NEAR(window_prob(x, cfg), window_prob(w - x, cfg), 1e-9);
  }
}

TEST(GaussianTest, TelescopingSum) {
  GaussianConfig cfg;
  double total = 0.0;
  for (int x = -30; x <= 30; ++x) total += window_prob(x, cfg);
  EXPECT_NEAR(total, cdf(30.0, cfg) - cdf(-31.0, cfg), 1e-9);
  EXPECT_NEAR(total, 1.0, 1e-9);
  double partial = 0.0;
  for (int x = -4; x <= 7; ++x) partial += window_prob(x, cfg);
  EXPECT_NEAR(partial, cdf(7.0, cfg) - cdf(-5.0, cfg), 1e-9);
}

TEST(GaussianTest, WindowProbNonNegativeAndDecreasingAwayFromCenter) {
  GaussianConfig cfg;
  for (int x = -40; x <= 40; ++x) EXPECT_GE(window_prob(x, cfg), 0.0);
  for (int x = 1; x < 15; ++x) {
    EXPECT_GT(window_prob(x, cfg), window_prob(x + 1, cfg)) << x;
    EXPECT_GT(window_prob(1 - x, cfg), window_prob(-x, cfg)) << x;
  }
}

TEST(DistanceTest, SingleTokenSpan) {
  EXPECT_EQ(relative_distances(5, {2, 2}), (std::vector<int>{-2, -1, 0, 1, 2}));
}

TEST(DistanceTest, MultiTokenSpanUsesNearestToken) {
  EXPECT_EQ(relative_distances(5, {2, 3}), (std::vector<int>{-2, -1, 0, 0, 1}));
}

TEST(DistanceTest, InstanceTargetsDifferUnlessSpansCoincide) {
  corpus::Instance inst;
  inst.tokens = {"a", "@CHEMICAL$", "b", "@GENE$", "c"};
  inst.target1 = corpus::TokenSpan{1, 1};
  inst.target2 = corpus::TokenSpan{3, 3};
  DistanceLists d = relative_distances(inst);
  EXPECT_EQ(d.x1, (std::vector<int>{-1, 0, 1, 2, 3}));
  EXPECT_EQ(d.x2, (std::vector<int>{-3, -2, -1, 0, 1}));
  EXPECT_NE(d.x1, d.x2);
  EXPECT_EQ(d.x1[1], 0);
  EXPECT_EQ(d.x2[3], 0);
  inst.target2.reset();
  EXPECT_THROW(relative_distances(inst), ValidationError);
}

num::Tensor random_reps(std::size_t n, std::size_t d, Rng& rng, bool requires_grad = false) {
  std::vector<double> v(n * d);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return num::Tensor::from({n, d}, std::move(v), requires_grad);
}

TEST(PoolTest, ZeroRepsGiveZero) {
  std::vector<int> dist = {-1, 0, 1};
  num::Tensor pooled = target_aware_pool(dist, num::Tensor::zeros({3, 4}), {});
  for (double x : pooled.data()) EXPECT_EQ(x, 0.0);
}

TEST(PoolTest, SingleTokenAtDistanceZero) {
  GaussianConfig cfg;
  num::Tensor u = num::Tensor::from({1, 3}, {1.0, -2.0, 0.5});
  std::vector<int> dist = {0};
  num::Tensor pooled = target_aware_pool(dist, u, cfg);
  const double p0 = simpson(-1.0, 0.0, 0.0, 3.0);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(pooled[k], p0 * u[k], 1e-7 * std::abs(u[k]));
  EXPECT_NEAR(pooled[0], 0.130559, 1e-6);
}

TEST(PoolTest, IdenticalRepsSumWindowMasses) {
  GaussianConfig cfg;
  num::Tensor u = num::Tensor::from({3, 2}, {0.3, -0.7, 0.3, -0.7, 0.3, -0.7});
  std::vector<int> dist = {-1, 0, 1};
  num::Tensor pooled = target_aware_pool(dist, u, cfg);
  double mass = 0.0;
  for (int x : dist) mass += simpson(x - 1.0, x, 0.0, 3.0);
  EXPECT_NEAR(pooled[0], mass * 0.3, 1e-7);
  EXPECT_NEAR(pooled[1], mass * -0.7, 1e-7);
}

TEST(PoolTest, NotRenormalizedByDefault) {
  GaussianConfig cfg;
  std::vector<int> dist = {-2, -1, 0, 1};
  auto w = pool_weights(dist, cfg);
  double s = 0.0;
  for (double x : w) s += x;
  EXPECT_LT(s, 0.9);
  cfg.renormalize = true;
  auto wn = pool_weights(dist, cfg);
  s = 0.0;
  for (double x : wn) s += x;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(PoolTest, KeepMaskDropsPositions) {
  GaussianConfig cfg;
  std::vector<int> dist = {-1, 0, 1};
  auto w = pool_weights(dist, cfg, {true, true, false});
  EXPECT_EQ(w[2], 0.0);
  EXPECT_GT(w[0], 0.0);
}

TEST(PoolTest, LengthMismatchIsRejected) {
  std::vector<int> dist = {0, 1};
  EXPECT_THROW(target_aware_pool(dist, num::Tensor::zeros({3, 2}), {}), Error);
}

TEST(PoolTest, PoolingIsLinear) {
  GaussianConfig cfg;
  Rng rng(14);
  std::vector<int> dist = {-3, -2, -1, 0, 1, 2};
  num::Tensor u = random_reps(6, 5, rng);
  num::Tensor v = random_reps(6, 5, rng);
  const double alpha = 0.7, beta = -1.3;
  num::Tensor lhs = target_aware_pool(dist, num::add(num::scale(u, alpha), num::scale(v, beta)), cfg);
  num::Tensor pu = target_aware_pool(dist, u, cfg);
  num::Tensor pv = target_aware_pool(dist, v, cfg);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(lhs[k], alpha * pu[k] + beta * pv[k], 1e-12);
}

TEST(PoolTest, OverlappingTargetsGiveDistinctRepresentations) {
  GaussianConfig cfg;
  Rng rng(15);
  num::Tensor u = random_reps(7, 4, rng);
  auto x1 = relative_distances(7, {1, 1});
  auto x2 = relative_distances(7, {5, 5});
  num::Tensor a = target_aware_pool(x1, u, cfg);
  num::Tensor b = target_aware_pool(x2, u, cfg);
  double diff = 0.0;
  for (std::size_t k = 0; k < 4; ++k) diff += std::abs(a[k] - b[k]);
  EXPECT_GT(diff, 1e-6);
}

TEST(PoolTest, GradientCheck) {
  GaussianConfig cfg;
  Rng rng(16);
  num::Tensor u = random_reps(5, 3, rng, true);
  num::Tensor w = random_reps(1, 3, rng);
  std::vector<int> dist = {-2, -1, 0, 1, 2};
  std::vector<num::Tensor> inputs = {u};
  auto result = num::grad_check(
      [&] { return num::sum(num::mul(target_aware_pool(dist, u, cfg), num::row(w, 0))); }, inputs);
  EXPECT_LE(result.max_rel_error, 1e-5);
}

}  // namespace
}  // namespace cpi::gaussian
