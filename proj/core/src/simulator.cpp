#include "repsale/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "repsale/equilibrium.hpp"
#include "repsale/errors.hpp"
#include "repsale/parallel.hpp"

namespace repsale {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kBlock = 8192;

// Neumaier compensated sum.
class Sum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Moments {
  Sum sum, sq;
  std::uint64_t n = 0;

  void add(double x) {
    sum.add(x);
    sq.add(x * x);
    ++n;
  }
  void merge(const Moments& o) {
    sum.add(o.sum.value());
    sq.add(o.sq.value());
    n += o.n;
  }
  double mean() const { return n ? sum.value() / static_cast<double>(n) : 0.0; }
  double stderr_of_mean() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sq.value() - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

struct Tally {
  Moments rev, welfare, surplus, naive, soph;
  std::uint64_t accept1 = 0, accept2 = 0, accept1_naive = 0, accept1_soph = 0;

  void merge(const Tally& o) {
    rev.merge(o.rev);
    welfare.merge(o.welfare);
    surplus.merge(o.surplus);
    naive.merge(o.naive);
    soph.merge(o.soph);
    accept1 += o.accept1;
    accept2 += o.accept2;
    accept1_naive += o.accept1_naive;
    accept1_soph += o.accept1_soph;
  }
};

double draw_reject_price(const Continuation& c, double u) {
  double acc = 0.0;
  for (const auto& pp : c.p2R) {
    acc += pp.prob;
    if (u < acc) return pp.price;
  }
  return c.p2R.back().price;
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  std::uint64_t z = seed_ + (counter + 1) * kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

SimReport simulate(const SimConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("trials must be at least 1");
  if (!(cfg.mu >= 0.0 && cfg.mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
  if (cfg.profile.p2R.empty()) throw DomainError("profile has no reject-side price");

  const Continuation& c = cfg.profile;
  const Distribution& d = cfg.dist;
  const CounterRng rng(cfg.seed);
  const double mean_value = d.mean();
  const double soph_cut = c.all_reject ? std::numeric_limits<double>::infinity() : c.t;

  const std::uint64_t blocks = (cfg.trials + kBlock - 1) / kBlock;
  std::vector<Tally> tallies(blocks);
  parallel_for(blocks, cfg.workers, [&](std::size_t b) {
    Tally& tl = tallies[b];
    const std::uint64_t end = std::min<std::uint64_t>(cfg.trials, (b + 1) * kBlock);
    for (std::uint64_t i = b * kBlock; i < end; ++i) {
      const bool soph = rng.uniform(4 * i) < cfg.mu;
      const double v = d.quantile(rng.uniform(4 * i + 1));
      const bool accept1 = soph ? v >= soph_cut : v >= c.p1;
      const double p2 = accept1 ? c.p2A : draw_reject_price(c, rng.uniform(4 * i + 2));
      const bool accept2 = v >= p2;
      const double paid = (accept1 ? c.p1 : 0.0) + (accept2 ? p2 : 0.0);
      const int units = int(accept1) + int(accept2);
      tl.rev.add(paid);
      tl.welfare.add(units * mean_value);
      tl.surplus.add(units * v);
      (soph ? tl.soph : tl.naive).add(paid);
      tl.accept1 += accept1;
      tl.accept2 += accept2;
      (soph ? tl.accept1_soph : tl.accept1_naive) += accept1;
    }
  });

  Tally total;
  for (const auto& tl : tallies) total.merge(tl);

  const double n = static_cast<double>(cfg.trials);
  SimReport r;
  r.trials = cfg.trials;
  r.seed = cfg.seed;
  r.rev_mean = total.rev.mean();
  r.rev_stderr = total.rev.stderr_of_mean();
  r.welfare_mean = total.welfare.mean();
  r.welfare_stderr = total.welfare.stderr_of_mean();
  r.surplus_mean = total.surplus.mean();
  r.surplus_stderr = total.surplus.stderr_of_mean();
  r.naive_count = total.naive.n;
  r.soph_count = total.soph.n;
  r.rev_naive_mean = total.naive.mean();
  r.rev_naive_stderr = total.naive.stderr_of_mean();
  r.rev_soph_mean = total.soph.mean();
  r.rev_soph_stderr = total.soph.stderr_of_mean();
  r.accept_round1 = static_cast<double>(total.accept1) / n;
  r.accept_round2 = static_cast<double>(total.accept2) / n;
  r.accept_round1_naive = total.naive.n ? static_cast<double>(total.accept1_naive) / total.naive.n : 0.0;
  r.accept_round1_soph = total.soph.n ? static_cast<double>(total.accept1_soph) / total.soph.n : 0.0;
  return r;
}

double accept_utility(const Continuation& c, double v) { return (v - c.p1) + std::max(0.0, v - c.p2A); }

double reject_utility(const Continuation& c, double v) {
  double u = 0.0;
  for (const auto& pp : c.p2R) u += pp.prob * std::max(0.0, v - pp.price);
  return u;
}

ThresholdReport verify_buyer_threshold(const Continuation& c, const std::vector<double>& v_grid, double tol) {
  ThresholdReport rep;
  const double cut = c.all_reject ? 1.0 : c.t;
  for (double v : v_grid) {
    const ThresholdCheck pt{v, accept_utility(c, v), reject_utility(c, v)};
    rep.points.push_back(pt);
    const double gap = pt.accept_utility - pt.reject_utility;
    const bool above = v > cut + tol;
    const bool below = v < cut - tol;
    if ((above && gap < -tol) || (below && gap > tol)) rep.violations.push_back(v);
  }
  rep.single_crossing = rep.violations.empty();
  return rep;
}

DeviationReport verify_seller_deviation(const Distribution& d, double mu, const Continuation& profile,
                                        const std::vector<double>& p1_grid, const ImplementOptions& opts,
                                        int workers) {
  DeviationReport rep{};
  rep.profile_revenue = revenue_of_continuation(d, mu, profile).rev_total;
  std::vector<double> revs(p1_grid.size());
  parallel_for(p1_grid.size(), workers, [&](std::size_t i) {
    revs[i] = revenue_of_continuation(d, mu, implement_for_price(d, mu, p1_grid[i], opts)).rev_total;
  });
  rep.best_revenue = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < revs.size(); ++i) {
    if (revs[i] > rep.best_revenue) {
      rep.best_revenue = revs[i];
      rep.best_p1 = p1_grid[i];
    }
  }
  rep.max_regret = std::max(0.0, rep.best_revenue - rep.profile_revenue);
  return rep;
}

}  // namespace repsale
