#include "repsale/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "repsale/errors.hpp"
#include "repsale/posterior.hpp"

namespace repsale {

const char* to_string(Focus f) { return f == Focus::sophisticated ? "sophisticated" : "naive"; }

double Continuation::expected_p2R() const {
  double e = 0.0;
  for (const auto& pp : p2R) e += pp.price * pp.prob;
  return e;
}

double Continuation::indifference_gap() const {
  if (all_reject) return 0.0;
  return (t - p1 + std::max(0.0, t - p2A)) - (t - expected_p2R());
}

FocusMargin soph_focus_condition(const Distribution& d, double mu, double t) {
  const double margin = (1.0 - mu) * d.marginal_revenue(t) + mu * (1.0 - d.cdf(t));
  return {margin, margin >= 0.0};
}

namespace {

Focus focus_of(double p2A, double t) { return p2A >= t ? Focus::sophisticated : Focus::naive; }

std::vector<PricePoint> lottery(double low, double high, double alpha_low) {
  if (alpha_low >= 1.0 || high - low <= 0.0) return {{low, 1.0}};
  if (alpha_low <= 0.0) return {{high, 1.0}};
  return {{low, alpha_low}, {high, 1.0 - alpha_low}};
}

// Second-round responses to a candidate threshold.
struct Probe {
  double t;
  double p2R;
  double p2A;
  double diff;  // accept utility minus reject utility of type t
};

Probe probe(const Distribution& d, double mu, double p1, double t) {
  const Posterior post(d, mu, p1, t);
  const double p2R = post.reject_mass() > 0.0 ? post.reject_optimum().price : 0.0;
  const double p2A = post.accept_optimum().price;
  return {t, p2R, p2A, p2R + std::max(0.0, t - p2A) - p1};
}

double grid_point(double p1, int i, int n) { return i == n ? 1.0 : p1 + (1.0 - p1) * i / n; }

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
}

}  // namespace

Continuation implement_sophisticated(const Distribution& d, double mu, double t) {
  check_mu(mu);
  if (!(t > 0.0 && t < 1.0)) throw DomainError("threshold must lie in (0,1)");
  if (mu <= 0.0) throw NotImplementableError("no sophisticated mass at mu = 0");
  const FocusMargin cond = soph_focus_condition(d, mu, t);
  if (!cond.holds) {
    std::ostringstream msg;
    msg << "threshold " << t << " has no sophisticated-focused implementation at mu=" << mu
        << " (margin " << cond.margin << ")";
    throw NotImplementableError(msg.str());
  }
  Continuation c;
  c.t = t;
  c.p2A = std::max(t, d.p_star());
  c.focus = Focus::sophisticated;
  const double f_t = d.cdf(t);
  const double high = d.monopoly(Truncation::below(t)).price;
  if (mu >= 1.0) {
    c.p1 = high;
    c.p2R = {{high, 1.0}};
    return c;
  }
  const double high_value = mu * high * (f_t - d.cdf(high));
  // Low-peak reject revenue (unnormalized) minus the high peak; increasing in p1.
  auto balance = [&](double p1) {
    const double mass = mu * f_t + (1.0 - mu) * d.cdf(p1);
    const double p = d.argmax_scaled(mass, 0.0, p1);
    return p * (mass - d.cdf(p)) - high_value;
  };
  const double g_lo = balance(0.0);
  const double g_hi = balance(high);
  if (!(g_lo < 0.0 && g_hi >= 0.0)) {
    if (g_lo >= 0.0 && high_value <= 0.0) {
      c.p1 = 0.0;
      c.p2R = {{0.0, 1.0}};
      return c;
    }
    throw InternalError("reject-peak balance is not bracketed on [0, p*_{<=t}]");
  }
  double p1 = high;
  if (g_hi > 0.0) {
    boost::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(
        balance, 0.0, high, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(52), iters);
    p1 = 0.5 * (a + b);
  }
  c.p1 = p1;
  const double low = Posterior(d, mu, p1, t).reject_low_peak().price;
  const double alpha = high - low > 1e-12 ? (high - p1) / (high - low) : 0.0;
  c.p2R = lottery(low, high, alpha);
  return c;
}

double p1_closed_form(const Distribution& d, double mu, double t, double pL) {
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("closed form needs mu in (0,1)");
  if (!(pL > 0.0 && pL < t)) throw DomainError("closed form needs 0 < pL < t");
  const auto below = Truncation::below(t);
  const double gain = d.monopoly(below).revenue - d.revenue(pL, below);
  const double level = mu / (1.0 - mu) * d.cdf(t) * gain / pL + d.cdf(pL);
  constexpr double slack = 1e-12;
  if (level < -slack || level > 1.0 + slack) {
    std::ostringstream msg;
    msg << "closed-form quantile argument " << level << " lies outside [0,1]";
    throw InconsistencyError(msg.str());
  }
  return d.quantile(std::clamp(level, 0.0, 1.0));
}

std::vector<Crossing> threshold_crossings(const Distribution& d, double mu, double p1,
                                          const ImplementOptions& opts) {
  check_mu(mu);
  std::vector<Crossing> out;
  if (p1 <= 0.0) return out;
  const int n = std::max(1, opts.t_grid);
  Probe prev = probe(d, mu, p1, p1);
  for (int i = 1; i <= n; ++i) {
    const Probe cur = probe(d, mu, p1, grid_point(p1, i, n));
    if (prev.diff < 0.0 && cur.diff >= 0.0) out.push_back({prev.t, cur.t});
    prev = cur;
  }
  return out;
}

Continuation implement_for_price(const Distribution& d, double mu, double p1,
                                 const ImplementOptions& opts) {
  check_mu(mu);
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw DomainError("first-round price must lie in [0,1]");
  Continuation c;
  c.p1 = p1;
  if (p1 <= 0.0) {
    c.t = 0.0;
    c.p2R = {{0.0, 1.0}};
    c.p2A = d.p_star();
    c.focus = focus_of(c.p2A, c.t);
    return c;
  }

  const int n = std::max(1, opts.t_grid);
  Probe lo = probe(d, mu, p1, p1);
  Probe hi = lo;
  bool found = lo.diff >= 0.0;
  for (int i = 1; i <= n && !found; ++i) {
    const Probe cur = probe(d, mu, p1, grid_point(p1, i, n));
    if (cur.diff >= 0.0) {
      hi = cur;
      found = true;
    } else {
      lo = cur;
    }
  }

  if (!found) {
    const Posterior post(d, mu, p1, 1.0);
    c.t = 1.0;
    c.all_reject = true;
    c.p2R = {{post.reject_optimum().price, 1.0}};
    c.p2A = post.accept_optimum().price;
    c.focus = focus_of(c.p2A, c.t);
    return c;
  }
  if (lo.t == hi.t) {
    c.t = hi.t;
    c.p2R = {{hi.p2R, 1.0}};
    c.p2A = hi.p2A;
    c.focus = focus_of(c.p2A, c.t);
    return c;
  }

  for (int iter = 0; iter < 200 && hi.t - lo.t > 1e-15; ++iter) {
    const double mid = 0.5 * (lo.t + hi.t);
    if (mid <= lo.t || mid >= hi.t) break;
    const Probe m = probe(d, mu, p1, mid);
    (m.diff >= 0.0 ? hi : lo) = m;
  }

  c.t = hi.t;
  c.p2A = hi.p2A;
  c.focus = focus_of(c.p2A, c.t);
  if (hi.p2R - lo.p2R > opts.jump_tol) {
    // Reject price jumps across the threshold; mix the two peaks for indifference.
    const Posterior post(d, mu, p1, c.t);
    const double low = post.reject_low_peak().price;
    const double high = post.reject_high_peak().price;
    const double target = p1 - std::max(0.0, c.t - c.p2A);
    double alpha = (high - target) / (high - low);
    if (alpha < -1e-9 || alpha > 1.0 + 1e-9)
      throw InternalError("reject mixture weight outside [0,1]");
    alpha = std::clamp(alpha, 0.0, 1.0);
    c.p2R = lottery(low, high, alpha);
  } else {
    c.p2R = {{hi.p2R, 1.0}};
  }
  return c;
}

ExclusivityReport check_exclusivity(const Distribution& d, double mu, double p1, int t_grid) {
  const Continuation c = implement_for_price(d, mu, p1);
  if (c.focus != Focus::sophisticated || c.all_reject)
    return {ExclusivityReport::Status::not_applicable, {}};
  ExclusivityReport report{ExclusivityReport::Status::none_found, {}};
  Probe prev = probe(d, mu, p1, p1);
  for (int i = 1; i <= t_grid; ++i) {
    const Probe cur = probe(d, mu, p1, grid_point(p1, i, t_grid));
    const bool sign_change = (prev.diff < 0.0) != (cur.diff < 0.0);
    const bool naive_side = prev.p2A < prev.t && cur.p2A < cur.t;
    if (sign_change && naive_side) report.naive_crossings.push_back({prev.t, cur.t});
    prev = cur;
  }
  if (!report.naive_crossings.empty()) report.status = ExclusivityReport::Status::violation;
  return report;
}

std::vector<std::string> ordering_violations(const Distribution& d, const Continuation& c,
                                             double tol) {
  std::vector<std::string> out;
  const double ps = d.p_star();
  auto fail = [&](const std::string& what, double a, double b) {
    std::ostringstream s;
    s.precision(12);
    s << what << " (" << a << " vs " << b << ")";
    out.push_back(s.str());
  };
  for (const auto& pp : c.p2R) {
    if (pp.price > c.t + tol) fail("p2R <= t", pp.price, c.t);
    if (pp.price > ps + tol) fail("p2R <= p*", pp.price, ps);
  }
  if (c.p2A < c.p1 - tol) fail("p2A >= p1", c.p2A, c.p1);
  if (c.p2A < ps - tol) fail("p2A >= p*", c.p2A, ps);
  if (c.p1 > c.t + tol) fail("p1 <= t", c.p1, c.t);
  return out;
}

}  // namespace repsale
