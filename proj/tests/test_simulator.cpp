#include <gtest/gtest.h>

#include <cstring>
#include <set>

#include "repsale/equilibrium.hpp"
#include "repsale/errors.hpp"
#include "repsale/linear_oracle.hpp"
#include "repsale/simulator.hpp"

using namespace repsale;

namespace {

SimConfig config(double mu, const Continuation& c, std::uint64_t trials, std::uint64_t seed = 7) {
  SimConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.mu = mu;
  cfg.profile = c;
  return cfg;
}

bool same(const SimReport& a, const SimReport& b) {
  return a.trials == b.trials && a.rev_mean == b.rev_mean && a.rev_stderr == b.rev_stderr &&
         a.welfare_mean == b.welfare_mean && a.surplus_mean == b.surplus_mean && a.naive_count == b.naive_count &&
         a.rev_naive_mean == b.rev_naive_mean && a.rev_soph_mean == b.rev_soph_mean &&
         a.accept_round1 == b.accept_round1 && a.accept_round2 == b.accept_round2;
}

}  // namespace

TEST(CounterRng, UniformRangeAndDistinct) {
  const CounterRng rng(42);
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = rng.uniform(i);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    seen.insert(rng.bits(i));
  }
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(CounterRng(1).bits(0), CounterRng(2).bits(0));
  EXPECT_EQ(CounterRng(9).bits(123), CounterRng(9).bits(123));
}

TEST(Simulator, Deterministic) {
  const auto c = linear::on_path(0.81);
  auto cfg = config(0.81, c, 50000);
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  EXPECT_TRUE(same(a, b));
  cfg.workers = 3;
  EXPECT_TRUE(same(a, simulate(cfg)));
  cfg.seed = 8;
  EXPECT_NE(a.rev_mean, simulate(cfg).rev_mean);
}

TEST(Simulator, AgreesWithAnalyticRevenue) {
  const auto d = Distribution::uniform();
  for (double mu : {0.0, 0.3, 0.81, 1.0}) {
    const auto eq = solve_equilibrium(d, mu);
    const auto rep = simulate(config(mu, eq.cont, 200000));
    EXPECT_NEAR(rep.rev_mean, eq.rev.rev_total, 4 * rep.rev_stderr) << mu;
    EXPECT_NEAR(rep.welfare_mean, eq.rev.welfare, 4 * rep.welfare_stderr) << mu;
    EXPECT_NEAR(rep.surplus_mean, eq.rev.surplus, 4 * rep.surplus_stderr) << mu;
    const auto [rn, rs] = per_capita_revenues(d, mu, eq.cont);
    if (rep.naive_count > 0) EXPECT_NEAR(rep.rev_naive_mean, rn, 4 * rep.rev_naive_stderr + 1e-12) << mu;
    if (rep.soph_count > 0) EXPECT_NEAR(rep.rev_soph_mean, rs, 4 * rep.rev_soph_stderr + 1e-12) << mu;
    EXPECT_EQ(rep.naive_count + rep.soph_count, rep.trials);
  }
}

TEST(Simulator, OffPathContinuation) {
  const auto d = Distribution::power(2.0);
  const auto c = implement_for_price(d, 0.6, 0.7);
  SimConfig cfg = config(0.6, c, 200000);
  cfg.dist = d;
  const auto rep = simulate(cfg);
  EXPECT_NEAR(rep.rev_mean, revenue_of_continuation(d, 0.6, c).rev_total, 4 * rep.rev_stderr);
}

TEST(Simulator, FreeGoods) {
  Continuation free{0.0, {{0.0, 1.0}}, 0.0, 0.0, false, Focus::sophisticated};
  const auto rep = simulate(config(0.5, free, 10000));
  EXPECT_EQ(rep.rev_mean, 0.0);
  EXPECT_NEAR(rep.welfare_mean, 1.0, 1e-12);
  EXPECT_NEAR(rep.surplus_mean, 1.0, 0.02);
  EXPECT_EQ(rep.accept_round1, 1.0);
}

TEST(Simulator, Validation) {
  EXPECT_THROW(simulate(config(0.5, linear::on_path(0.5), 0)), DomainError);
  EXPECT_THROW(simulate(config(1.5, linear::on_path(0.5), 10)), DomainError);
  EXPECT_THROW(simulate(config(0.5, Continuation{}, 10)), DomainError);
}

TEST(BuyerThreshold, SingleCrossing) {
  const auto c = linear::on_path(1.0);
  EXPECT_NEAR(accept_utility(c, 0.6), 0.3, 1e-12);
  EXPECT_NEAR(reject_utility(c, 0.6), 0.3, 1e-12);
  EXPECT_GT(accept_utility(c, 1.0), reject_utility(c, 1.0));
  EXPECT_GE(reject_utility(c, 0.0), accept_utility(c, 0.0));
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i) grid.push_back(i / 1000.0);
  for (double mu : {0.0, 0.3, 0.7, 0.81, 1.0}) {
    const auto rep = verify_buyer_threshold(linear::on_path(mu), grid);
    EXPECT_TRUE(rep.violations.empty()) << mu;
    EXPECT_TRUE(rep.single_crossing) << mu;
    EXPECT_EQ(rep.points.size(), grid.size());
  }
}

TEST(SellerDeviation, EquilibriumHasNoRegret) {
  const auto d = Distribution::uniform();
  std::vector<double> grid;
  for (int i = 0; i < 512; ++i) grid.push_back(i / 511.0);
  for (double mu : {0.0, 0.81}) {
    const auto eq = solve_equilibrium(d, mu);
    const auto rep = verify_seller_deviation(d, mu, eq.cont, grid);
    EXPECT_LE(rep.max_regret, 1e-5) << mu;
    EXPECT_NEAR(rep.profile_revenue, eq.rev.rev_total, 1e-12);
  }
  const auto eq = solve_equilibrium(d, 0.81);
  const auto shifted = implement_for_price(d, 0.81, eq.cont.p1 + 0.05);
  EXPECT_GT(verify_seller_deviation(d, 0.81, shifted, grid).max_regret, 1e-4);
}
