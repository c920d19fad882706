#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "repsale/continuation.hpp"
#include "repsale/distribution.hpp"

namespace repsale::infinite {

// Discrete support shared by naive and sophisticated values.
struct DiscreteModel {
  std::vector<double> values;  // strictly increasing, non-negative
  std::vector<double> probs_naive;
  std::vector<double> probs_soph;
  double mu = 1.0;
  double delta = 2.0 / 3.0;

  // Throws DomainError on any broken invariant.
  void validate() const;
  std::size_t size() const { return values.size(); }
  double lowest() const { return values.front(); }
  double highest() const { return values.back(); }
  // Largest gap to the next-lower support point; infinite for a single point.
  double grid_size() const;
  // Unconditional probability that v <= x.
  double cdf(double x) const;
  // Probability that a sophisticated value is at least p.
  double soph_at_least(double p) const;

  // Values {1,10,20}, uniform for both types, delta = 2/3, naive mass epsilon.
  static DiscreteModel example(double epsilon);
};

// Half-open interval [lo, hi) of support indices.
struct Support {
  int lo = 0;
  int hi = 0;

  bool empty() const { return lo >= hi; }
  int size() const { return empty() ? 0 : hi - lo; }
  bool contains(int i) const { return i >= lo && i < hi; }
  static Support full(std::size_t n) { return {0, static_cast<int>(n)}; }
  static Support point(int i) { return {i, i + 1}; }
  static Support none() { return {0, 0}; }
  auto operator<=>(const Support&) const = default;
};

struct BeliefState {
  Support naive;
  Support soph;
  auto operator<=>(const BeliefState&) const = default;
};

std::string describe(const DiscreteModel& m, const BeliefState& b);

struct StrategyProfile {
  std::string name;  // example3pt, no_learning or custom
  BeliefState initial;
  std::function<double(const BeliefState&)> seller;
  // Sophisticated decision at a state, price and value.
  std::function<Decision(const BeliefState&, double, double)> buyer;
  std::function<BeliefState(const BeliefState&, double, Decision)> updater;
  // Prices at which the buyer's rule changes; deviation prices are placed on and beside them.
  std::vector<double> price_breakpoints;
};

struct Example3ptOptions {
  // Premium a sophisticated buyer demands for accepting a price above 10 while
  // values 1 and 10 are both still naive-possible.
  double high_price_premium = 76.0 / 3.0;
};

// Case tables for the {1,10,20} example.
double example_seller_action(const BeliefState& b);
Decision example_buyer_action(const BeliefState& b, double p, double v,
                              const Example3ptOptions& opts = {});

StrategyProfile example3pt(const DiscreteModel& m, const Example3ptOptions& opts = {});
StrategyProfile no_learning(const DiscreteModel& m);

// Bayes restriction of both supports to the types whose prescribed action
// matches the decision; empty when no type with positive mass is consistent.
std::optional<BeliefState> bayes_restrict(const DiscreteModel& m,
                                          const std::function<Decision(const BeliefState&, double, double)>& buyer,
                                          const BeliefState& b, double p, Decision d);

// Bayes restriction of both supports to the types whose prescribed action
// matches the decision. When no type with positive mass is consistent, the
// buyer is treated as sophisticated with a point-mass value: the top of S
// after an unexpected accept, its bottom after an unexpected reject, and the
// top of the support when S was already empty.
BeliefState bayes_update(const DiscreteModel& m,
                         const std::function<Decision(const BeliefState&, double, double)>& buyer,
                         const BeliefState& b, double p, Decision d);

BeliefState update_belief(const DiscreteModel& m, const StrategyProfile& prof, const BeliefState& b, double p,
                          Decision d);

// Exact discounted payoffs of the profile from any state.
class Evaluator {
 public:
  Evaluator(DiscreteModel m, StrategyProfile prof);

  const DiscreteModel& model() const { return m_; }
  const StrategyProfile& profile() const { return prof_; }

  // Seller revenue from a buyer of the given kind and support index, starting at b.
  double type_revenue(const BeliefState& b, bool sophisticated, int index) const;
  // Utility of a sophisticated buyer with support index `index` who follows the profile from b.
  double soph_utility(const BeliefState& b, int index) const;

  // Posterior weights at b over (naive types, sophisticated types).
  std::pair<std::vector<double>, std::vector<double>> weights(const BeliefState& b) const;
  // Expected seller revenue at b under the seller's belief.
  double seller_value(const BeliefState& b) const;
  // Expected revenue from sophisticated buyers only, weighted by the prior restricted to S.
  double soph_value(const BeliefState& b) const;

  // Seller revenue from posting p once at b and following the profile afterwards.
  double deviation_value(const BeliefState& b, double p) const;
  // Utilities of a sophisticated type at b facing price p.
  double accept_value(const BeliefState& b, double p, int index) const;
  double reject_value(const BeliefState& b, double p, int index) const;

 private:
  struct Step {
    BeliefState next;
    double price;
    bool bought;
  };
  Step step(const BeliefState& b, bool sophisticated, int index) const;
  // Discounted sum of payoff(price, bought) along the deterministic path from b.
  double path_sum(const BeliefState& b, bool sophisticated, int index,
                  const std::function<double(double, bool)>& payoff) const;

  DiscreteModel m_;
  StrategyProfile prof_;
};

struct StateValues {
  BeliefState state;
  double price;
  double revenue;       // seller's expected revenue at the state
  double soph_revenue;  // conditional on a sophisticated buyer
  std::vector<double> soph_utility;  // per support value
};

// Values at every state visited on the profile's own path of play.
std::vector<StateValues> discounted_values(const DiscreteModel& m, const StrategyProfile& prof);

struct SellerViolation {
  BeliefState state;
  double prescribed_price;
  double prescribed_value;
  double deviation_price;
  double deviation_value;
};

struct BuyerViolation {
  BeliefState state;
  double price;
  double value;
  Decision prescribed;
  double prescribed_utility;
  double alternative_utility;
};

struct CertificateOptions {
  double tol = 1e-9;
  double offset = 1e-6;  // distance of probe prices from breakpoints
};

struct Certificate {
  std::vector<BeliefState> states;  // every state checked
  std::vector<SellerViolation> seller_violations;
  std::vector<BuyerViolation> buyer_violations;
  double worst_seller_gain = 0.0;
  double worst_buyer_gain = 0.0;
  bool clean() const { return seller_violations.empty() && buyer_violations.empty(); }
};

// Prices the seller may deviate to at state b.
std::vector<double> candidate_prices(const DiscreteModel& m, const StrategyProfile& prof, const BeliefState& b,
                                     const CertificateOptions& opts = {});

Certificate verify_one_shot_deviation(const DiscreteModel& m, const StrategyProfile& prof,
                                      const CertificateOptions& opts = {});

struct PropertyReport {
  bool naive_justified = true;   // lowest naive value <= price <= highest naive value
  bool above_baseline = true;    // state revenue >= lowest naive value / (1 - delta)
  std::vector<BeliefState> price_failures;
  std::vector<BeliefState> revenue_failures;
};

PropertyReport check_properties_ab(const DiscreteModel& m, const StrategyProfile& prof,
                                   const std::vector<BeliefState>& states, double tol = 1e-9);

// max over p in V of delta / (1 - delta) * p * (1 - F(p / (1 - delta))).
double revenue_lower_bound(const DiscreteModel& m);
// Same bound for a continuous distribution on [0,1], maximized over p.
double revenue_lower_bound(const Distribution& d, double delta);

struct MdpResult {
  double value;
  double root_price;
  int iterations;
};

// Optimal discounted revenue from a naive buyer, by value iteration over
// interval beliefs with support points as prices.
MdpResult naive_mdp_value(const DiscreteModel& m, double tol = 1e-14, int max_iter = 100000);

struct BenchmarkReport {
  double benchmark;        // commitment benchmark upper bound
  double soph_part;        // mu * max_p p Pr_S(v >= p) / (1 - delta)
  double naive_part;       // (1 - mu) * naive MDP value
  double bound_lhs;        // max_p p (1 - F(p / (1 - delta)))
  double bound_rhs;        // (1 - delta) mu max_p p Pr_S(v >= p) - grid size
  double discrete_slack;   // lhs - rhs
};

BenchmarkReport commitment_benchmark(const DiscreteModel& m);

// Slack of the continuous comparison when both types share distribution d.
double continuous_bound_slack(const Distribution& d, double mu, double delta);

struct EpsilonSearch {
  double largest_clean;  // NaN when even the zero-naive model fails
  double smallest_failing;
};

// Bisection on the naive mass for the example profile.
EpsilonSearch epsilon_search(const Example3ptOptions& opts = {}, double tol = 1e-6);

}  // namespace repsale::infinite
