#pragma once

#include "repsale/distribution.hpp"

namespace repsale {

// Sophistication probabilities after each first-round observation.
struct PosteriorView {
  double mu;
  double p1;
  double t;
  double mu_R;
  double mu_A;
};

struct RejectOptima {
  PriceRevenue low;   // best price on [0, p1]
  PriceRevenue high;  // monopoly price of the below-t truncation
};

// Second-round beliefs given first-round price p1 and sophisticated threshold t.
// Requires 0 <= p1 <= t <= 1; t = 1 means no sophisticated type accepts.
class Posterior {
 public:
  Posterior(Distribution d, double mu, double p1, double t);

  const Distribution& distribution() const { return d_; }
  double mu() const { return mu_; }
  double p1() const { return p1_; }
  double t() const { return t_; }

  // Unnormalized probabilities of the reject and accept events.
  double reject_mass() const { return reject_mass_; }
  double accept_mass() const { return accept_mass_; }
  double mu_reject() const;
  double mu_accept() const;
  PosteriorView view() const;

  double reject_revenue(double p) const;
  double accept_revenue(double p) const;

  // Peak of the reject curve on [0, p1].
  PriceRevenue reject_low_peak() const;
  // Peak of the reject curve on [p1, t]; revenue 0 without sophisticated mass.
  PriceRevenue reject_high_peak() const;
  // Higher of the two peaks; the lower price wins ties.
  PriceRevenue reject_optimum() const;
  RejectOptima reject_optima() const;

  // Unique maximizer of the accept curve; the larger price wins ties.
  PriceRevenue accept_optimum() const;

 private:
  Distribution d_;
  double mu_, p1_, t_;
  double f_p1_, f_t_;
  double reject_mass_, accept_mass_;
};

// Throws DegeneratePosteriorError when either conditioning event has zero mass.
PosteriorView posterior_params(const Distribution& d, double mu, double p1, double t);

}  // namespace repsale
