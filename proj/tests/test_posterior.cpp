#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "repsale/errors.hpp"
#include "repsale/posterior.hpp"

using namespace repsale;

TEST(Posterior, BayesWeights) {
  const auto d = Distribution::power(2.0);
  const double mu = 0.4, p1 = 0.3, t = 0.7;
  const auto v = posterior_params(d, mu, p1, t);
  const double rej = mu * d.cdf(t) + (1 - mu) * d.cdf(p1);
  const double acc = mu * (1 - d.cdf(t)) + (1 - mu) * (1 - d.cdf(p1));
  EXPECT_NEAR(v.mu_R, mu * d.cdf(t) / rej, 1e-14);
  EXPECT_NEAR(v.mu_A, mu * (1 - d.cdf(t)) / acc, 1e-14);
}

TEST(Posterior, AllSophisticated) {
  const Posterior post(Distribution::uniform(), 1.0, 0.3, 0.6);
  EXPECT_NEAR(post.mu_reject(), 1.0, 1e-15);
  EXPECT_NEAR(post.reject_optimum().price, 0.3, 1e-9);
  EXPECT_NEAR(post.accept_optimum().price, 0.6, 1e-9);
}

TEST(Posterior, AllNaive) {
  const Posterior post(Distribution::uniform(), 0.0, 4.0 / 7.0, 4.0 / 7.0);
  EXPECT_NEAR(post.reject_optimum().price, 2.0 / 7.0, 1e-9);
  EXPECT_NEAR(post.accept_optimum().price, 4.0 / 7.0, 1e-9);
}

TEST(Posterior, DegenerateEvents) {
  const auto d = Distribution::uniform();
  try {
    posterior_params(d, 1.0, 0.5, 1.0);
    FAIL() << "expected a degenerate accept event";
  } catch (const DegeneratePosteriorError& e) {
    EXPECT_EQ(e.branch(), "accept");
  }
  try {
    posterior_params(d, 0.5, 0.0, 0.0);
    FAIL() << "expected a degenerate reject event";
  } catch (const DegeneratePosteriorError& e) {
    EXPECT_EQ(e.branch(), "reject");
  }
  EXPECT_THROW(Posterior(d, 0.5, 0.7, 0.6), DomainError);
  EXPECT_THROW(Posterior(d, 1.5, 0.2, 0.6), DomainError);
}

TEST(Posterior, OptimaBeatGrid) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& d : {Distribution::uniform(), Distribution::power(0.5), Distribution::power(3.0)}) {
    for (int i = 0; i < 40; ++i) {
      const double mu = u(rng);
      const double p1 = 0.05 + 0.8 * u(rng);
      const double t = p1 + (0.99 - p1) * u(rng);
      const Posterior post(d, mu, p1, t);
      const auto rej = post.reject_optimum();
      const auto acc = post.accept_optimum();
      const auto [rx, ry] = oracle::grid_argmax([&](double p) { return post.reject_revenue(p); }, 0.0, 1.0, 5000);
      const auto [ax, ay] = oracle::grid_argmax([&](double p) { return post.accept_revenue(p); }, 0.0, 1.0, 5000);
      EXPECT_GE(rej.revenue, ry - 1e-9) << d.describe() << " mu=" << mu << " p1=" << p1 << " t=" << t;
      EXPECT_GE(acc.revenue, ay - 1e-9);
      EXPECT_NEAR(post.reject_revenue(rej.price), rej.revenue, 1e-12);
      EXPECT_GE(acc.price, p1 - 1e-12);
      EXPECT_GE(rej.revenue, post.reject_low_peak().revenue - 1e-15);
      EXPECT_GE(rej.revenue, post.reject_high_peak().revenue - 1e-15);
    }
  }
}
