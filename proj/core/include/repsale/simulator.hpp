#pragma once

#include <cstdint>
#include <vector>

#include "repsale/continuation.hpp"
#include "repsale/distribution.hpp"

namespace repsale {

// Counter-based generator: draw n of a stream is splitmix64(seed + (n + 1) * golden).
// Trial i owns counters 4i .. 4i+3, so any partition of trials across workers
// sees the same numbers.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t bits(std::uint64_t counter) const;
  // Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const;

 private:
  std::uint64_t seed_;
};

struct SimConfig {
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  double mu = 0.0;
  Distribution dist = Distribution::uniform();
  Continuation profile;
  int workers = 1;
};

struct SimReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double rev_mean = 0.0;
  double rev_stderr = 0.0;
  // Units bought times the population mean value.
  double welfare_mean = 0.0;
  double welfare_stderr = 0.0;
  // Sum of values over units bought.
  double surplus_mean = 0.0;
  double surplus_stderr = 0.0;
  std::uint64_t naive_count = 0;
  std::uint64_t soph_count = 0;
  double rev_naive_mean = 0.0;
  double rev_naive_stderr = 0.0;
  double rev_soph_mean = 0.0;
  double rev_soph_stderr = 0.0;
  double accept_round1 = 0.0;
  double accept_round2 = 0.0;
  double accept_round1_naive = 0.0;
  double accept_round1_soph = 0.0;
};

SimReport simulate(const SimConfig& cfg);

struct ThresholdCheck {
  double v;
  double accept_utility;
  double reject_utility;
};

struct ThresholdReport {
  std::vector<ThresholdCheck> points;
  std::vector<double> violations;  // values whose preference contradicts the threshold
  bool single_crossing = true;
};

// Round-1 utilities of a sophisticated buyer who price-takes in round 2.
double accept_utility(const Continuation& c, double v);
double reject_utility(const Continuation& c, double v);

ThresholdReport verify_buyer_threshold(const Continuation& c, const std::vector<double>& v_grid,
                                       double tol = 1e-9);

struct DeviationReport {
  double profile_revenue;
  double best_revenue;
  double best_p1;
  double max_regret;  // max(0, best_revenue - profile_revenue)
};

// Seller's gain from moving the first-round price to any grid point.
DeviationReport verify_seller_deviation(const Distribution& d, double mu, const Continuation& profile,
                                        const std::vector<double>& p1_grid,
                                        const ImplementOptions& opts = {}, int workers = 1);

}  // namespace repsale
