#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "repsale/continuation.hpp"
#include "repsale/equilibrium.hpp"
#include "repsale/errors.hpp"

using namespace repsale;

namespace {

// Uniform values, sophisticated-focused threshold t: the high reject peak is t/2,
// the low one is half the reject mass, and the two peaks tie.
struct UniformMixture {
  double p1, pL, pH, alpha;
};

UniformMixture uniform_mixture(double mu, double t) {
  const double s = std::sqrt(mu);
  const double p1 = t * s / (1 + s);
  const double pL = t * s / 2;
  const double pH = t / 2;
  return {p1, pL, pH, (pH - p1) / (pH - pL)};
}

}  // namespace

TEST(Continuation, MixedPriceStructure) {
  const auto d = Distribution::uniform();
  const auto eq = solve_equilibrium(d, 0.81);
  const auto c = implement_sophisticated(d, 0.81, eq.cont.t);
  ASSERT_EQ(c.p2R.size(), 2u);
  EXPECT_NEAR(c.p2R_lo(), 0.27093, 1e-4);
  EXPECT_NEAR(c.p2R_hi(), 0.30103, 1e-4);
  EXPECT_NEAR(c.alpha_lo(), 0.5263, 1e-4);
  EXPECT_NEAR(c.p1, 0.28519, 1e-4);

  const auto ref = uniform_mixture(0.81, c.t);
  EXPECT_NEAR(c.p1, ref.p1, 1e-10);
  EXPECT_NEAR(c.p2R_lo(), ref.pL, 1e-10);
  EXPECT_NEAR(c.p2R_hi(), ref.pH, 1e-10);
  EXPECT_NEAR(c.alpha_lo(), ref.alpha, 1e-9);
  EXPECT_NEAR(c.indifference_gap(), 0.0, 1e-10);
}

TEST(Continuation, MixtureMatchesClosedFormAcrossThresholds) {
  const auto d = Distribution::uniform();
  for (double mu : {0.3, 0.55, 0.7, 0.95})
    for (double t : {0.2, 0.4, 0.5}) {
      const auto c = implement_sophisticated(d, mu, t);
      const auto ref = uniform_mixture(mu, t);
      EXPECT_NEAR(c.p1, ref.p1, 1e-10) << mu << " " << t;
      EXPECT_NEAR(c.expected_p2R(), c.p1, 1e-10);
      EXPECT_EQ(c.focus, Focus::sophisticated);
    }
}

TEST(Continuation, LotteryDegeneratesAtMuOne) {
  const auto c = implement_sophisticated(Distribution::uniform(), 1.0, 0.6);
  ASSERT_EQ(c.p2R.size(), 1u);
  EXPECT_NEAR(c.p1, 0.3, 1e-9);
  EXPECT_NEAR(c.p2R_lo(), 0.3, 1e-9);
  EXPECT_NEAR(c.p2A, 0.6, 1e-12);
}

TEST(Continuation, QuantileRouteAgrees) {
  for (const auto& d : {Distribution::uniform(), Distribution::power(0.5), Distribution::power(2.0)})
    for (double mu : {0.4, 0.7, 0.9}) {
      const double t = 0.5 * (d.p_star() + 0.0) + 0.05;
      if (!soph_focus_condition(d, mu, t).holds) continue;
      const auto c = implement_sophisticated(d, mu, t);
      if (c.p2R.size() < 2) continue;
      EXPECT_NEAR(p1_closed_form(d, mu, t, c.p2R_lo()), c.p1, 1e-7) << d.describe() << " mu=" << mu;
    }
  EXPECT_THROW(p1_closed_form(Distribution::uniform(), 1.0, 0.5, 0.2), DomainError);
}

TEST(Continuation, FocusCondition) {
  const auto d = Distribution::uniform();
  for (double mu : {0.1, 0.5, 0.9})
    for (double t : {0.3, 0.6, 0.9}) {
      const auto f = soph_focus_condition(d, mu, t);
      EXPECT_NEAR(f.margin, (1 - mu) * (1 - 2 * t) + mu * (1 - t), 1e-14);
      EXPECT_EQ(f.holds, f.margin >= 0);
    }
}

TEST(Continuation, NotImplementable) {
  const auto d = Distribution::uniform();
  EXPECT_THROW(implement_sophisticated(d, 0.0, 0.5), NotImplementableError);
  EXPECT_THROW(implement_sophisticated(d, 0.1, 0.9), NotImplementableError);
  EXPECT_THROW(implement_sophisticated(d, 0.5, 1.0), DomainError);
  EXPECT_THROW(implement_for_price(d, 0.5, 1.2), DomainError);
}

TEST(Continuation, FreeFirstRound) {
  const auto c = implement_for_price(Distribution::uniform(), 0.5, 0.0);
  EXPECT_EQ(c.t, 0.0);
  EXPECT_EQ(c.p2R_lo(), 0.0);
  EXPECT_NEAR(c.p2A, 0.5, 1e-12);
}

TEST(Continuation, HighPriceAllReject) {
  const auto c = implement_for_price(Distribution::uniform(), 0.4, 0.95);
  EXPECT_TRUE(c.all_reject);
  EXPECT_EQ(c.t, 1.0);
}

TEST(Continuation, OrderingInvariantRandomized) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<Distribution> family = {Distribution::uniform(), Distribution::power(0.5),
                                            Distribution::power(2.0), Distribution::power(3.0)};
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto& d = family[i % family.size()];
    const double mu = u(rng), p1 = u(rng);
    const auto c = implement_for_price(d, mu, p1);
    const auto bad = ordering_violations(d, c);
    violations += static_cast<int>(bad.size());
    if (!bad.empty()) ADD_FAILURE() << d.describe() << " mu=" << mu << " p1=" << p1 << ": " << bad.front();
  }
  EXPECT_EQ(violations, 0);
}

TEST(Continuation, MarginalTypeIndifferent) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& d : {Distribution::uniform(), Distribution::power(2.0)})
    for (int i = 0; i < 300; ++i) {
      const double mu = u(rng), p1 = 0.02 + 0.9 * u(rng);
      const auto c = implement_for_price(d, mu, p1);
      if (c.all_reject || c.t <= c.p1 + 1e-9) continue;
      EXPECT_NEAR(c.indifference_gap(), 0.0, 1e-6) << d.describe() << " mu=" << mu << " p1=" << p1;
    }
}

TEST(Continuation, FirstCrossingIsUsed) {
  const auto d = Distribution::uniform();
  for (double mu : {0.2, 0.5, 0.81})
    for (double p1 : {0.2, 0.3, 0.45}) {
      const auto c = implement_for_price(d, mu, p1);
      const auto xs = threshold_crossings(d, mu, p1);
      if (c.all_reject) {
        EXPECT_TRUE(xs.empty());
        continue;
      }
      if (xs.empty()) continue;  // crossing at t = p1 itself
      EXPECT_GE(c.t, xs.front().lo - 1e-12);
      EXPECT_LE(c.t, xs.front().hi + 1e-12);
    }
}

TEST(Continuation, NoNaiveFocusedRivalOnPath) {
  const auto d = Distribution::uniform();
  for (double mu : {0.7, 0.81, 0.95}) {
    const auto eq = solve_equilibrium(d, mu);
    const auto rep = check_exclusivity(d, mu, eq.cont.p1);
    EXPECT_EQ(rep.status, ExclusivityReport::Status::none_found) << mu;
  }
  const auto naive = check_exclusivity(d, 0.2, solve_equilibrium(d, 0.2).cont.p1);
  EXPECT_EQ(naive.status, ExclusivityReport::Status::not_applicable);
}
