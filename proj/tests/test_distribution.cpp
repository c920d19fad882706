#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "repsale/distribution.hpp"
#include "repsale/errors.hpp"

using namespace repsale;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("repsale_" + name);
  std::ofstream(path) << body;
  return path;
}

Distribution power2_table(int knots) {
  std::vector<double> v, f;
  for (int i = 0; i <= knots; ++i) {
    const double x = static_cast<double>(i) / knots;
    v.push_back(x);
    f.push_back(x * x);
  }
  return Distribution::table(v, f);
}

}  // namespace

TEST(Distribution, UniformMonopoly) {
  const auto d = Distribution::uniform();
  EXPECT_NEAR(d.p_star(), 0.5, 1e-12);
  EXPECT_NEAR(d.r_star(), 0.25, 1e-12);
  EXPECT_NEAR(d.mean(), 0.5, 1e-12);
  EXPECT_NEAR(d.marginal_revenue(0.3), 0.4, 1e-12);
}

TEST(Distribution, PowerMonopoly) {
  const auto half = Distribution::power(0.5);
  EXPECT_NEAR(half.p_star(), 4.0 / 9.0, 1e-9);
  EXPECT_NEAR(half.r_star(), 4.0 / 27.0, 1e-9);
  const auto sq = Distribution::power(2.0);
  EXPECT_NEAR(sq.p_star(), 1.0 / std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(sq.r_star(), 2.0 / (3.0 * std::sqrt(3.0)), 1e-9);
  EXPECT_NEAR(Distribution::power(3.0).mean(), 0.75, 1e-12);
}

TEST(Distribution, TruncatedMonopoly) {
  const auto d = Distribution::uniform();
  // Below t: p (t - p) / t peaks at t/2.
  const auto below = d.monopoly(Truncation::below(0.6));
  EXPECT_NEAR(below.price, 0.3, 1e-9);
  EXPECT_NEAR(below.revenue, 0.15, 1e-9);
  // Above x: max(x, p*).
  EXPECT_NEAR(d.monopoly(Truncation::above(0.7)).price, 0.7, 1e-9);
  EXPECT_NEAR(d.monopoly(Truncation::above(0.2)).price, 0.5, 1e-9);
  EXPECT_NEAR(d.revenue(0.5, Truncation::above(0.2)), 0.5 * 0.5 / 0.8, 1e-12);
}

TEST(Distribution, TruncationDomain) {
  const auto d = Distribution::uniform();
  EXPECT_THROW(d.monopoly(Truncation::below(0.0)), DomainError);
  EXPECT_THROW(d.monopoly(Truncation::above(1.0)), DomainError);
  EXPECT_THROW(Distribution::power(0.0), DomainError);
  EXPECT_THROW(Distribution::power(-1.0), DomainError);
}

TEST(Distribution, QuantileInvertsCdf) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& d : {Distribution::uniform(), Distribution::power(0.5), Distribution::power(3.0),
                        power2_table(10)}) {
    for (int i = 0; i < 200; ++i) {
      const double q = u(rng);
      EXPECT_NEAR(d.cdf(d.quantile(q)), q, 1e-9) << d.describe();
    }
    EXPECT_EQ(d.quantile(0.0), 0.0);
    EXPECT_EQ(d.quantile(1.0), 1.0);
  }
}

TEST(Distribution, PartialMeanMatchesQuadrature) {
  for (const auto& d : {Distribution::uniform(), Distribution::power(0.5), Distribution::power(2.0),
                        power2_table(8)}) {
    const double a = 0.13, b = 0.87;
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double lo = a + (b - a) * i / n, hi = a + (b - a) * (i + 1) / n;
      sum += 0.5 * (lo + hi) * (d.cdf(hi) - d.cdf(lo));
    }
    EXPECT_NEAR(d.partial_mean(a, b), sum, 1e-7) << d.describe();
  }
}

TEST(Distribution, ArgmaxScaledMatchesGrid) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& d : {Distribution::uniform(), Distribution::power(2.0), Distribution::power(0.5)}) {
    for (int i = 0; i < 50; ++i) {
      const double hi = u(rng);
      const double level = d.cdf(hi) + 0.3 * u(rng);
      const double x = d.argmax_scaled(level, 0.0, hi);
      const auto [gx, gy] = oracle::grid_argmax([&](double p) { return p * (level - d.cdf(p)); }, 0.0, hi, 20000);
      EXPECT_GE(x * (level - d.cdf(x)), gy - 1e-9);
      EXPECT_NEAR(x, gx, 1e-3);
    }
  }
}

TEST(Distribution, TableApproximatesPower) {
  const auto t = power2_table(40);
  EXPECT_EQ(t.kind(), Distribution::Kind::table);
  EXPECT_TRUE(t.regular());
  EXPECT_NEAR(t.p_star(), 1.0 / std::sqrt(3.0), 1e-3);
  EXPECT_NEAR(t.cdf(0.55), 0.55 * 0.55, 1e-3);
}

TEST(Distribution, TableFromCsv) {
  std::string body = "value,cdf\n";
  for (int i = 0; i <= 10; ++i) body += std::to_string(i / 10.0) + "," + std::to_string(i / 10.0) + "\n";
  const auto path = temp_file("uniform_table.csv", body);
  const auto d = parse_distribution("table:" + path.string());
  EXPECT_NEAR(d.p_star(), 0.5, 1e-9);
  EXPECT_NEAR(d.cdf(0.37), 0.37, 1e-12);
  std::filesystem::remove(path);
}

TEST(Distribution, TableRejectsMalformedFiles) {
  const std::vector<std::string> bodies = {
      "",
      "v,F\n0,0\n0.5,0.5\n1,1\n",
      "value,cdf\n0,0\n1,1\n",
      "value,cdf\n0,0\n0.5,abc\n1,1\n",
      "value,cdf\n0,0\n0.5,0.5,0.1\n1,1\n",
      "value,cdf\n0,0\n0.6,0.5\n0.4,0.6\n1,1\n",
      "value,cdf\n0.1,0\n0.5,0.5\n1,1\n",
  };
  int k = 0;
  for (const auto& body : bodies) {
    const auto path = temp_file("bad" + std::to_string(k++) + ".csv", body);
    EXPECT_THROW(Distribution::table_from_csv(path.string()), ParseError) << body;
    std::filesystem::remove(path);
  }
  EXPECT_THROW(Distribution::table_from_csv("/nonexistent/table.csv"), ParseError);
}

TEST(Distribution, NonRegularTableDetected) {
  const auto d = Distribution::table({0.0, 0.1, 0.5, 0.6, 1.0}, {0.0, 0.45, 0.5, 0.95, 1.0});
  EXPECT_FALSE(d.regular());
  const auto rep = d.validate_regularity(1024);
  EXPECT_FALSE(rep.pass);
  EXPECT_GT(rep.worst_second_difference, 0.0);
  EXPECT_THROW(d.monopoly(), RegularityError);
  EXPECT_TRUE(Distribution::uniform().validate_regularity(1024).pass);
  EXPECT_THROW(Distribution::uniform().validate_regularity(4), DomainError);
}

TEST(Distribution, ParseSpecs) {
  EXPECT_EQ(parse_distribution("uniform").kind(), Distribution::Kind::uniform01);
  const auto p = parse_distribution("power:2.5");
  EXPECT_EQ(p.kind(), Distribution::Kind::power);
  EXPECT_DOUBLE_EQ(p.exponent(), 2.5);
  EXPECT_THROW(parse_distribution("power:x"), ParseError);
  EXPECT_THROW(parse_distribution("power:2x"), ParseError);
  EXPECT_THROW(parse_distribution("normal"), ParseError);
}
