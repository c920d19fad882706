#include "repsale/commitment.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "repsale/errors.hpp"
#include "repsale/parallel.hpp"

namespace repsale {

namespace {

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
}

struct Candidate {
  CommitmentSchedule s;
  double revenue = -1.0;
};

// Higher revenue wins; exact ties go to the lexicographically smaller schedule.
bool better(const Candidate& a, const Candidate& b) {
  if (a.revenue != b.revenue) return a.revenue > b.revenue;
  return std::tie(a.s.p1, a.s.p2R, a.s.p2A) < std::tie(b.s.p1, b.s.p2R, b.s.p2A);
}

// Best ordered schedule with p1 fixed, the two other prices on the given axes.
Candidate best_for_p1(const Distribution& d, double mu, double p1, const std::vector<double>& reject_axis,
                      const std::vector<double>& accept_axis) {
  Candidate best;
  for (double r : reject_axis) {
    if (r > p1) continue;
    for (double a : accept_axis) {
      if (a < p1) continue;
      const Candidate c{{p1, r, a}, commitment_revenue(d, mu, {p1, r, a})};
      if (best.revenue < 0.0 || better(c, best)) best = c;
    }
  }
  return best;
}

std::vector<double> axis(double center, double half_width, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double x = center - half_width + 2.0 * half_width * i / (n - 1);
    out.push_back(std::clamp(x, 0.0, 1.0));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Candidate search(const Distribution& d, double mu, const std::vector<double>& p1_axis,
                 const std::vector<double>& reject_axis, const std::vector<double>& accept_axis, int workers) {
  std::vector<Candidate> rows(p1_axis.size());
  parallel_for(p1_axis.size(), workers,
               [&](std::size_t i) { rows[i] = best_for_p1(d, mu, p1_axis[i], reject_axis, accept_axis); });
  Candidate best;
  for (const auto& c : rows)
    if (c.revenue >= 0.0 && (best.revenue < 0.0 || better(c, best))) best = c;
  return best;
}

}  // namespace

double commitment_revenue(const Distribution& d, double mu, const CommitmentSchedule& s) {
  check_mu(mu);
  if (!s.ordered()) throw DomainError("schedule must satisfy p2R <= p1 <= p2A");
  const double t = s.t();
  const double f_t = d.cdf(std::min(t, 1.0));
  const double f_r = d.cdf(s.p2R);
  const double f_1 = d.cdf(s.p1);
  const double soph = s.p2R * (f_t - f_r) + (s.p1 + s.p2A) * (1.0 - f_t);
  const double naive = s.p2R * (f_1 - f_r) + s.p1 * (1.0 - f_1) + s.p2A * (1.0 - d.cdf(s.p2A));
  return mu * soph + (1.0 - mu) * naive;
}

double commitment_revenue_general(const Distribution& d, double mu, const CommitmentSchedule& s) {
  check_mu(mu);
  auto F = [&](double x) { return d.cdf(std::clamp(x, 0.0, 1.0)); };
  const double naive = s.p1 * (1.0 - F(s.p1)) + s.p2A * (1.0 - F(std::max(s.p1, s.p2A))) +
                       s.p2R * std::max(0.0, F(s.p1) - F(s.p2R));
  const double one = std::min(s.p1, s.p2R);
  const double two = s.p1 + s.p2A;
  double soph;
  if (two >= 2.0 * one) {
    const double switch_at = two - one;
    soph = one * std::max(0.0, F(switch_at) - F(one)) + two * (1.0 - F(switch_at));
  } else {
    soph = two * (1.0 - F(0.5 * two));
  }
  return mu * soph + (1.0 - mu) * naive;
}

CommitmentSchedule normalize_schedule(CommitmentSchedule s) {
  if (s.p1 > s.p2A) {
    const double avg = 0.5 * (s.p1 + s.p2A);
    if (s.p2R <= s.p2A) {
      std::swap(s.p1, s.p2A);
    } else if (s.p2R >= s.p1) {
      // Two units already beat one for every buyer who buys, so pricing
      // everything at the average keeps sophisticated demand and widens naive demand.
      s = {avg, avg, avg};
    } else {
      const double lowered = std::max(s.p2R, avg);
      s.p2A += s.p1 - lowered;
      s.p1 = lowered;
      if (s.p1 > s.p2A) s = {avg, avg, avg};
    }
  }
  s.p2R = std::min(s.p2R, s.p1);
  return s;
}

CommitmentSolution solve_commitment(const Distribution& d, double mu, const CommitmentOptions& opts) {
  check_mu(mu);
  if (!d.regular()) throw RegularityError("commitment search requires a regular distribution");
  if (opts.grid < 2 || opts.refine_grid < 2) throw DomainError("search grids need at least two points");

  std::vector<double> coarse(opts.grid);
  for (int i = 0; i < opts.grid; ++i) coarse[i] = static_cast<double>(i) / (opts.grid - 1);
  Candidate best = search(d, mu, coarse, coarse, coarse, opts.workers);

  double half = 1.0 / (opts.grid - 1);
  for (int round = 0; round < opts.refine_rounds; ++round) {
    const Candidate local = search(d, mu, axis(best.s.p1, half, opts.refine_grid),
                                   axis(best.s.p2R, half, opts.refine_grid),
                                   axis(best.s.p2A, half, opts.refine_grid), opts.workers);
    if (better(local, best)) best = local;
    half *= 2.0 / (opts.refine_grid - 1);
  }
  return {mu, best.s, best.revenue};
}

std::vector<CommitmentSolution> sweep_commitment(const Distribution& d, const std::vector<double>& mu_grid,
                                                 const CommitmentOptions& opts) {
  if (!std::is_sorted(mu_grid.begin(), mu_grid.end())) throw DomainError("mu grid must be sorted");
  std::vector<CommitmentSolution> out;
  out.reserve(mu_grid.size());
  for (double mu : mu_grid) out.push_back(solve_commitment(d, mu, opts));
  return out;
}

}  // namespace repsale
