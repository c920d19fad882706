#include "repsale/linear_oracle.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/toms748_solve.hpp>

#include "repsale/errors.hpp"

namespace repsale::linear {

namespace {

double sq(double x) { return x * x; }

double rev_branch3(double m) {
  return (-7 - 2 * m + 5 * sq(m) + 2 * m * sq(m)) / (-12 - 8 * m + 6 * sq(m) + 5 * m * sq(m) + sq(sq(m)));
}

double rev_branch4(double m) {
  const double s = std::sqrt(m);
  return sq(1 + 2 * s) / (4 + 8 * s + 7 * m + 2 * m * s - sq(m));
}

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
}

// Region boundaries in p1, shared by the strategy and revenue tables.
struct Cuts {
  double accept_low;  // sqrt(mu) / (2 (1 + sqrt(mu)))
  double mixed;       // sqrt(mu) / ((2 - mu)(1 + sqrt(mu)))
  double soph;        // sqrt(mu) / (2 + sqrt(mu) - mu^2)
  double kink;        // (2 + mu) / (4 + mu - mu^2)
  double top;         // (2 + mu) / (3 + mu)
};

Cuts cuts(double mu) {
  const double s = std::sqrt(mu);
  return {s / (2 * (1 + s)), s / ((2 - mu) * (1 + s)), s / (2 + s - sq(mu)), (2 + mu) / (4 + mu - sq(mu)),
          (2 + mu) / (3 + mu)};
}

}  // namespace

double mu_hat_residual(double mu) { return mu * mu * mu + 4 * mu * mu + 4 * mu - 1; }

double mu_bar_residual(double mu) { return rev_branch3(mu) - rev_branch4(mu); }

const Constants& constants() {
  static const Constants c = [] {
    const double r = std::sqrt(177.0);
    const double mu_hat = (-4.0 + std::cbrt((43.0 - 3.0 * r) / 2.0) + std::cbrt((43.0 + 3.0 * r) / 2.0)) / 3.0;
    boost::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(mu_bar_residual, 0.5, 0.99,
                                                    boost::math::tools::eps_tolerance<double>(52), iters);
    return Constants{mu_hat, 0.5 * (a + b)};
  }();
  return c;
}

double seller_round1(double mu) {
  check_mu(mu);
  const Constants& k = constants();
  if (mu < k.mu_hat) return sq(2 + mu) / (7 + 10 * mu + 3 * sq(mu));
  if (mu < 0.5) return (2 + mu) / (4 + mu - sq(mu));
  if (mu < k.mu_bar)
    return (-8 - 4 * mu + 6 * sq(mu) + 3 * mu * sq(mu)) / (-12 - 8 * mu + 6 * sq(mu) + 5 * mu * sq(mu) + sq(sq(mu)));
  const double s = std::sqrt(mu);
  return (2 * s + 4 * mu) / (4 + 8 * s + 7 * mu + 2 * mu * s - sq(mu));
}

std::vector<PricePoint> seller_round2(double mu, double p1, Decision decision) {
  check_mu(mu);
  const double s = std::sqrt(mu);
  const Cuts c = cuts(mu);
  if (decision == Decision::accept) {
    double p;
    if (p1 < c.accept_low) p = 0.5;
    else if (p1 < c.mixed) p = p1 * (1 + s) / s;
    else if (p1 < c.soph) p = (s - p1 * mu * (1 + s)) / (2 * (1 - mu) * s);
    else if (p1 < c.kink) p = (2 + mu - p1 * mu * (1 + mu)) / (2 * (2 - sq(mu)));
    else p = p1;
    return {{p, 1.0}};
  }
  const double low = 0.5 * p1 * (1 + s);
  const double high = s > 0.0 ? p1 * (1 + s) / (2 * s) : low;
  double alpha;
  if (p1 < c.mixed) alpha = 1.0 / (1 + s);
  else if (p1 < c.soph) alpha = (3 * p1 - s + p1 * s - 2 * p1 * mu) / (p1 * sq(1 - mu));
  else if (p1 < c.kink) return {{(mu + p1 * (2 - mu - sq(mu))) / (2 * (2 - sq(mu))), 1.0}};
  else if (p1 < c.top) return {{p1 * (1 + mu) / (2 + mu), 1.0}};
  else return {{(mu + p1 * (1 - mu)) / 2, 1.0}};
  if (high - low <= 0.0 || alpha >= 1.0) return {{low, 1.0}};
  return {{low, alpha}, {high, 1.0 - alpha}};
}

double buyer_threshold(double mu, double p1) {
  check_mu(mu);
  const double s = std::sqrt(mu);
  const Cuts c = cuts(mu);
  if (p1 < c.soph) return p1 * (1 + s) / s;
  if (p1 < c.kink) return (1 + p1 * (1 - sq(mu))) / (2 - sq(mu));
  if (p1 < c.top) return p1 * (3 + mu) / (2 + mu);
  return 1.0;
}

double rev_of_p1(double mu, double p1) {
  check_mu(mu);
  const double s = std::sqrt(mu);
  const double m2 = sq(mu), m3 = m2 * mu, m4 = m2 * m2, m5 = m4 * mu, m32 = mu * s;
  const Cuts c = cuts(mu);
  if (p1 <= c.accept_low) return 0.25 + p1 + 0.25 * sq(p1) * (-3 - 2 * s + mu);
  if (p1 <= c.mixed) return p1 * (4 * (s + 2 * mu) + p1 * (-4 - 8 * s - 7 * mu - 2 * m32 + m2)) / (4 * mu);
  if (p1 <= c.soph)
    return (-1 + 2 * p1 * (-2 + s + 3 * mu) + sq(p1) * (3 + 2 * s - 5 * mu - 4 * m32)) / (4 * (-1 + mu));
  if (p1 <= c.kink)
    return -(-4 + 2 * m2 + m3 - 2 * p1 * (8 - 4 * mu - 10 * m2 + 3 * m3 + 3 * m4) +
             sq(p1) * (12 - 4 * mu - 14 * m2 + m3 + 4 * m4 + m5)) /
           (4 * sq(-2 + m2));
  if (p1 <= c.top) return p1 * (2 - p1 * (7 + 10 * mu + 3 * m2) / sq(2 + mu));
  return 2 * (-1 + p1) * p1 * (-1 + mu) + 0.25 * sq(p1 + mu - p1 * mu);
}

double rev_closed(double mu) {
  check_mu(mu);
  const Constants& k = constants();
  if (mu < k.mu_hat) return sq(2 + mu) / (7 + 10 * mu + 3 * sq(mu));
  if (mu < 0.5) return (9 + 2 * mu - 5 * sq(mu) - 2 * mu * sq(mu)) / sq(4 + mu - sq(mu));
  if (mu < k.mu_bar) return rev_branch3(mu);
  return rev_branch4(mu);
}

double welfare_closed(double mu) {
  check_mu(mu);
  if (mu < constants().mu_bar) throw OutOfBranchError("welfare closed form holds only for mu >= mu_bar");
  const double s = std::sqrt(mu);
  return (6 + 9 * s + 6 * mu + mu * s) / (8 + 16 * s + 14 * mu + 4 * mu * s - 2 * sq(mu));
}

Continuation profile(double mu, double p1) {
  check_mu(mu);
  Continuation c;
  c.p1 = p1;
  c.t = std::min(1.0, buyer_threshold(mu, p1));
  c.all_reject = p1 >= cuts(mu).top;
  c.p2A = seller_round2(mu, p1, Decision::accept).front().price;
  c.p2R = seller_round2(mu, p1, Decision::reject);
  c.focus = c.p2A >= c.t ? Focus::sophisticated : Focus::naive;
  return c;
}

Continuation on_path(double mu) { return profile(mu, seller_round1(mu)); }

}  // namespace repsale::linear
