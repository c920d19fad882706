#include "repsale/posterior.hpp"

#include <algorithm>
#include <string>

#include "repsale/errors.hpp"

namespace repsale {

Posterior::Posterior(Distribution d, double mu, double p1, double t)
    : d_(std::move(d)), mu_(mu), p1_(p1), t_(t) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
  if (!(p1 >= 0.0 && p1 <= t && t <= 1.0))
    throw DomainError("posterior needs 0 <= p1 <= t <= 1 (got p1=" + std::to_string(p1) +
                      ", t=" + std::to_string(t) + ")");
  f_p1_ = d_.cdf(p1);
  f_t_ = d_.cdf(t);
  reject_mass_ = mu * f_t_ + (1.0 - mu) * f_p1_;
  accept_mass_ = mu * (1.0 - f_t_) + (1.0 - mu) * (1.0 - f_p1_);
}

double Posterior::mu_reject() const {
  if (reject_mass_ <= 0.0) throw DegeneratePosteriorError("reject");
  return mu_ * f_t_ / reject_mass_;
}

double Posterior::mu_accept() const {
  if (accept_mass_ <= 0.0) throw DegeneratePosteriorError("accept");
  return mu_ * (1.0 - f_t_) / accept_mass_;
}

PosteriorView Posterior::view() const { return {mu_, p1_, t_, mu_reject(), mu_accept()}; }

double Posterior::reject_revenue(double p) const {
  if (reject_mass_ <= 0.0) throw DegeneratePosteriorError("reject");
  const double f = d_.cdf(p);
  const double buyers = mu_ * std::max(0.0, f_t_ - f) + (1.0 - mu_) * std::max(0.0, f_p1_ - f);
  return p * buyers / reject_mass_;
}

double Posterior::accept_revenue(double p) const {
  if (accept_mass_ <= 0.0) throw DegeneratePosteriorError("accept");
  const double survive = 1.0 - d_.cdf(p);
  const double buyers =
      mu_ * std::min(1.0 - f_t_, survive) + (1.0 - mu_) * std::min(1.0 - f_p1_, survive);
  return p * buyers / accept_mass_;
}

PriceRevenue Posterior::reject_low_peak() const {
  if (reject_mass_ <= 0.0) throw DegeneratePosteriorError("reject");
  const double p = d_.argmax_scaled(reject_mass_, 0.0, p1_);
  return {p, reject_revenue(p)};
}

PriceRevenue Posterior::reject_high_peak() const {
  if (reject_mass_ <= 0.0) throw DegeneratePosteriorError("reject");
  if (mu_ <= 0.0 || t_ <= p1_) return {p1_, reject_revenue(p1_)};
  const double p = d_.argmax_scaled(f_t_, p1_, t_);
  return {p, reject_revenue(p)};
}

PriceRevenue Posterior::reject_optimum() const {
  const PriceRevenue low = reject_low_peak();
  const PriceRevenue high = reject_high_peak();
  return high.revenue > low.revenue ? high : low;
}

RejectOptima Posterior::reject_optima() const {
  if (!(p1_ > 0.0)) throw DomainError("reject optima need p1 > 0");
  const PriceRevenue low = reject_low_peak();
  const double high = d_.monopoly(Truncation::below(t_)).price;
  return {low, {high, reject_revenue(high)}};
}

PriceRevenue Posterior::accept_optimum() const {
  const double above_t = std::max(t_, d_.p_star());
  if (accept_mass_ <= 0.0) return {above_t, 0.0};
  const double margin = (1.0 - mu_) * d_.marginal_revenue(t_) + mu_ * (1.0 - f_t_);
  if (t_ < 1.0 && margin >= 0.0) return {above_t, accept_revenue(above_t)};
  // Peak lies on [p1, t], where revenue is proportional to p (level - F(p)).
  const double level = 1.0 + mu_ * (1.0 - f_t_) / (1.0 - mu_);
  const double p = d_.argmax_scaled(level, p1_, t_);
  return {p, accept_revenue(p)};
}

PosteriorView posterior_params(const Distribution& d, double mu, double p1, double t) {
  return Posterior(d, mu, p1, t).view();
}

}  // namespace repsale
