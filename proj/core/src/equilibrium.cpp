#include "repsale/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "repsale/errors.hpp"
#include "repsale/parallel.hpp"

namespace repsale {

namespace {

struct SideTotals {
  double round1 = 0.0;
  double accept = 0.0;
  double reject = 0.0;
  double units = 0.0;
  double surplus = 0.0;

  double revenue() const { return round1 + accept + reject; }
};

// One buyer population that accepts round 1 iff v >= cut and price-takes in round 2.
SideTotals side_totals(const Distribution& d, double cut, const Continuation& c) {
  const double f_cut = d.cdf(cut);
  const double accept_cut = std::max(cut, c.p2A);
  const double f_accept = d.cdf(accept_cut);
  SideTotals s;
  s.round1 = c.p1 * (1.0 - f_cut);
  s.accept = c.p2A * (1.0 - f_accept);
  s.units = (1.0 - f_cut) + (1.0 - f_accept);
  s.surplus = d.partial_mean(cut, 1.0) + d.partial_mean(accept_cut, 1.0);
  for (const auto& pp : c.p2R) {
    const double buyers = std::max(0.0, f_cut - d.cdf(pp.price));
    s.reject += pp.prob * pp.price * buyers;
    s.units += pp.prob * buyers;
    if (pp.price < cut) s.surplus += pp.prob * d.partial_mean(pp.price, cut);
  }
  return s;
}

}  // namespace

RevenueBreakdown revenue_of_continuation(const Distribution& d, double mu, const Continuation& c) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
  const SideTotals naive = side_totals(d, c.p1, c);
  const SideTotals soph = side_totals(d, c.all_reject ? 1.0 : c.t, c);
  RevenueBreakdown r;
  r.rev_round1 = (1.0 - mu) * naive.round1 + mu * soph.round1;
  r.rev_accept = (1.0 - mu) * naive.accept + mu * soph.accept;
  r.rev_reject = (1.0 - mu) * naive.reject + mu * soph.reject;
  r.rev_total = r.rev_round1 + r.rev_accept + r.rev_reject;
  r.rev_naive = naive.revenue();
  r.rev_soph = soph.revenue();
  r.welfare = d.mean() * ((1.0 - mu) * naive.units + mu * soph.units);
  r.surplus = (1.0 - mu) * naive.surplus + mu * soph.surplus;
  if (c.focus == Focus::sophisticated && !c.all_reject && mu > 0.0 && c.t > 0.0 && c.t < 1.0) {
    const double high = d.monopoly(Truncation::below(c.t)).price;
    const double amortized = mu * (d.cdf(c.t) - d.cdf(high)) * high;
    r.reamortization_gap = r.rev_reject - amortized;
  }
  return r;
}

std::pair<double, double> per_capita_revenues(const Distribution& d, double mu, const Continuation& c) {
  const RevenueBreakdown r = revenue_of_continuation(d, mu, c);
  return {r.rev_naive, r.rev_soph};
}

double welfare(const Distribution& d, double mu, const Continuation& c) {
  return revenue_of_continuation(d, mu, c).welfare;
}

TwoRoundEquilibrium solve_equilibrium(const Distribution& d, double mu, const SolveOptions& opts) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
  if (!d.regular()) throw RegularityError("revenue curve of " + d.describe() + " is not strictly concave");
  const int n = std::max(3, opts.p1_grid);
  auto value = [&](double p1) {
    return revenue_of_continuation(d, mu, implement_for_price(d, mu, p1, opts.implement)).rev_total;
  };

  std::vector<double> grid(n), rev(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = static_cast<double>(i) / (n - 1);
    rev[i] = value(grid[i]);
  }
  std::vector<int> peaks;
  for (int i = 0; i < n; ++i) {
    const bool left = i == 0 || rev[i] >= rev[i - 1];
    const bool right = i == n - 1 || rev[i] >= rev[i + 1];
    if (left && right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return rev[a] > rev[b]; });
  if (static_cast<int>(peaks.size()) > opts.starts) peaks.resize(opts.starts);

  double best_p1 = grid[peaks.front()];
  double best_rev = rev[peaks.front()];
  auto consider = [&](double p1, double r) {
    if (r > best_rev + 1e-13 || (std::abs(r - best_rev) <= 1e-13 && p1 < best_p1)) {
      best_p1 = p1;
      best_rev = r;
    }
  };
  for (int i : peaks) {
    consider(grid[i], rev[i]);
    const double a = grid[std::max(0, i - 1)];
    const double b = grid[std::min(n - 1, i + 1)];
    boost::uintmax_t iters = 200;
    const auto [p1, neg] = boost::math::tools::brent_find_minima(
        [&](double p) { return -value(p); }, a, b, std::numeric_limits<double>::digits / 2, iters);
    consider(p1, -neg);
  }

  TwoRoundEquilibrium eq;
  eq.mu = mu;
  eq.cont = implement_for_price(d, mu, best_p1, opts.implement);
  eq.rev = revenue_of_continuation(d, mu, eq.cont);
  eq.regime = eq.cont.focus;
  return eq;
}

Focus classify_regime(const TwoRoundEquilibrium& eq) { return eq.cont.focus; }

std::optional<double> regime_boundary(const Distribution& d, const std::vector<TwoRoundEquilibrium>& rows,
                                      const SolveOptions& opts, double tol) {
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i].regime != Focus::naive || rows[i + 1].regime != Focus::sophisticated) continue;
    double lo = rows[i].mu;
    double hi = rows[i + 1].mu;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (solve_equilibrium(d, mid, opts).regime == Focus::naive ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

std::optional<double> empirical_mu_f(const std::vector<TwoRoundEquilibrium>& rows) {
  std::optional<double> out;
  for (const auto& r : rows)
    if (r.regime == Focus::naive) out = r.mu;
  return out;
}

std::vector<TwoRoundEquilibrium> sweep(const Distribution& d, const std::vector<double>& mu_grid,
                                       const SolveOptions& opts, int workers) {
  if (!std::is_sorted(mu_grid.begin(), mu_grid.end())) throw DomainError("mu grid must be sorted");
  std::vector<TwoRoundEquilibrium> rows(mu_grid.size());
  parallel_for(mu_grid.size(), workers, [&](std::size_t i) { rows[i] = solve_equilibrium(d, mu_grid[i], opts); });
  return rows;
}

}  // namespace repsale
