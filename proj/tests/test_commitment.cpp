#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>

#include "repsale/commitment.hpp"
#include "repsale/errors.hpp"

using namespace repsale;

TEST(Commitment, RevenueExamples) {
  const auto d = Distribution::uniform();
  EXPECT_NEAR(commitment_revenue(d, 1.0, {0.5, 0.5, 0.5}), 0.5, 1e-12);
  EXPECT_NEAR(commitment_revenue(d, 0.0, {4.0 / 7, 2.0 / 7, 4.0 / 7}), 4.0 / 7, 1e-12);
  EXPECT_EQ(commitment_revenue(Distribution::power(2.0), 0.4, {0.0, 0.0, 0.0}), 0.0);
  EXPECT_THROW(commitment_revenue(d, 0.5, {0.5, 0.6, 0.7}), DomainError);
  const CommitmentSchedule s{0.4, 0.2, 0.5};
  EXPECT_NEAR(s.t(), 0.7, 1e-15);
  EXPECT_NEAR(commitment_revenue_general(d, 0.3, s), commitment_revenue(d, 0.3, s), 1e-12);
}

TEST(Commitment, GeneralRevenueMatchesOrderedFormula) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& d : {Distribution::uniform(), Distribution::power(0.5), Distribution::power(2.0)})
    for (int i = 0; i < 300; ++i) {
      double a = u(rng), b = u(rng), c = u(rng);
      std::array<double, 3> x{a, b, c};
      std::sort(x.begin(), x.end());
      const CommitmentSchedule s{x[1], x[0], x[2]};
      const double mu = u(rng);
      EXPECT_NEAR(commitment_revenue_general(d, mu, s), commitment_revenue(d, mu, s), 1e-12);
    }
}

TEST(Commitment, NormalizationNeverLowersRevenue) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& d : {Distribution::uniform(), Distribution::power(2.0)})
    for (int i = 0; i < 1000; ++i) {
      const CommitmentSchedule s{u(rng), u(rng), u(rng)};
      const double mu = u(rng);
      const auto n = normalize_schedule(s);
      EXPECT_TRUE(n.ordered(1e-12)) << s.p1 << " " << s.p2R << " " << s.p2A;
      EXPECT_GE(commitment_revenue_general(d, mu, n), commitment_revenue_general(d, mu, s) - 1e-12)
          << d.describe() << " mu=" << mu << " (" << s.p1 << ", " << s.p2R << ", " << s.p2A << ")";
    }
}

TEST(Commitment, PlainSwapCanLowerRevenue) {
  // p2A < p1 <= p2R: exchanging p1 and p2A changes the one-unit price.
  const auto d = Distribution::uniform();
  const double mu = 0.556;
  const CommitmentSchedule s{0.5698, 0.6352, 0.0895};
  const CommitmentSchedule swapped{s.p2A, s.p2R, s.p1};
  const double before = commitment_revenue_general(d, mu, s);
  EXPECT_LT(commitment_revenue_general(d, mu, swapped), before - 0.01);
  EXPECT_GE(commitment_revenue_general(d, mu, normalize_schedule(s)), before - 1e-12);
}

TEST(Commitment, SolveEndpoints) {
  const auto d = Distribution::uniform();
  const auto s0 = solve_commitment(d, 0.0);
  EXPECT_NEAR(s0.revenue, 4.0 / 7, 1e-6);
  EXPECT_NEAR(s0.schedule.p1, 4.0 / 7, 1e-3);
  EXPECT_NEAR(s0.schedule.p2R, 2.0 / 7, 1e-3);
  const auto s1 = solve_commitment(d, 1.0);
  EXPECT_NEAR(s1.revenue, 0.5, 1e-6);
  const auto mid = solve_commitment(d, 0.5);
  EXPECT_GT(mid.revenue, 0.5);
  EXPECT_LT(mid.revenue, 4.0 / 7);
}

TEST(Commitment, BeatsUnrestrictedGrid) {
  const auto d = Distribution::uniform();
  for (double mu : {0.3, 0.7}) {
    const auto sol = solve_commitment(d, mu);
    double best = 0.0;
    const int n = 20;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= n; ++k)
          best = std::max(best, commitment_revenue_general(d, mu, {1.0 * i / n, 1.0 * j / n, 1.0 * k / n}));
    EXPECT_GE(sol.revenue, best - 1e-9) << mu;
    EXPECT_NEAR(sol.revenue, commitment_revenue(d, mu, sol.schedule), 1e-15);
  }
}

TEST(Commitment, SweepNonIncreasing) {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  for (const auto& d : {Distribution::uniform(), Distribution::power(2.0)}) {
    const auto rows = sweep_commitment(d, grid);
    ASSERT_EQ(rows.size(), grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      EXPECT_TRUE(rows[i].schedule.ordered(1e-12));
      if (i > 0) EXPECT_LE(rows[i].revenue, rows[i - 1].revenue + 1e-6) << d.describe() << " mu=" << rows[i].mu;
    }
  }
  EXPECT_THROW(sweep_commitment(Distribution::uniform(), {0.5, 0.1}), DomainError);
}

TEST(Commitment, WorkersDoNotChangeResult) {
  CommitmentOptions one, three;
  three.workers = 3;
  const auto a = solve_commitment(Distribution::power(0.5), 0.6, one);
  const auto b = solve_commitment(Distribution::power(0.5), 0.6, three);
  EXPECT_EQ(a.revenue, b.revenue);
  EXPECT_EQ(a.schedule.p1, b.schedule.p1);
  EXPECT_EQ(a.schedule.p2R, b.schedule.p2R);
  EXPECT_EQ(a.schedule.p2A, b.schedule.p2A);
}
