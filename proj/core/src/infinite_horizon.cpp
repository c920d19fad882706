#include "repsale/infinite_horizon.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "repsale/errors.hpp"

namespace repsale::infinite {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_point(const Support& s, int i) { return s.lo == i && s.hi == i + 1; }

void check_probs(const std::vector<double>& p, std::size_t n, const char* name) {
  if (p.size() != n) throw DomainError(std::string(name) + " must have one entry per support value");
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError(std::string(name) + " entries must be non-negative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError(std::string(name) + " must sum to 1");
}

std::string support_text(const DiscreteModel& m, const Support& s) {
  std::ostringstream os;
  os << '{';
  for (int i = s.lo; i < s.hi; ++i) os << (i > s.lo ? "," : "") << m.values[i];
  os << '}';
  return os.str();
}

}  // namespace

void DiscreteModel::validate() const {
  if (values.empty()) throw DomainError("support must contain at least one value");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) throw DomainError("support values must be non-negative");
    if (i > 0 && !(values[i] > values[i - 1])) throw DomainError("support values must be strictly increasing");
  }
  check_probs(probs_naive, values.size(), "probs_naive");
  check_probs(probs_soph, values.size(), "probs_soph");
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
  if (!(delta >= 0.5 && delta < 1.0)) throw DomainError("delta must lie in [1/2, 1)");
}

double DiscreteModel::grid_size() const {
  if (values.size() < 2) return kInf;
  double g = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) g = std::max(g, values[i] - values[i - 1]);
  return g;
}

double DiscreteModel::cdf(double x) const {
  double f = 0.0;
  for (std::size_t i = 0; i < values.size() && values[i] <= x; ++i)
    f += (1.0 - mu) * probs_naive[i] + mu * probs_soph[i];
  return std::min(f, 1.0);
}

double DiscreteModel::soph_at_least(double p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] >= p) s += probs_soph[i];
  return s;
}

DiscreteModel DiscreteModel::example(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("naive mass must lie in [0,1]");
  const double third = 1.0 / 3.0;
  return {{1.0, 10.0, 20.0}, {third, third, third}, {third, third, third}, 1.0 - epsilon, 2.0 / 3.0};
}

std::string describe(const DiscreteModel& m, const BeliefState& b) {
  return "N=" + support_text(m, b.naive) + " S=" + support_text(m, b.soph);
}

// ---- the {1,10,20} example ----

namespace {

constexpr double kExampleValues[] = {1.0, 10.0, 20.0};

void require_example(const DiscreteModel& m) {
  if (m.values != std::vector<double>{1.0, 10.0, 20.0})
    throw DomainError("the example profile is defined for the support {1,10,20} only");
}

std::string example_state(const BeliefState& b) {
  DiscreteModel m{{1.0, 10.0, 20.0}, {}, {}, 1.0, 0.5};
  return describe(m, b);
}

}  // namespace

double example_seller_action(const BeliefState& b) {
  const Support& n = b.naive;
  if (n.empty()) {
    if (b.soph.empty()) throw UnreachableStateError("no seller action at " + example_state(b));
    return kExampleValues[b.soph.lo];
  }
  if (n.size() == 1) return kExampleValues[n.lo];
  if (n.lo == 1) return b.soph.empty() ? 20.0 : 10.0;
  return 2.0;
}

Decision example_buyer_action(const BeliefState& b, double p, double v, const Example3ptOptions& opts) {
  const Support& n = b.naive;
  auto cutoff = [&](double premium) { return v >= p + premium ? Decision::accept : Decision::reject; };
  if (n.empty() || p <= kExampleValues[n.lo] || is_point(n, 2)) return v >= p ? Decision::accept : Decision::reject;
  if (n.lo == 1 && p > 10.0) return cutoff(20.0);
  if (n.lo == 0 && n.hi == 3) {
    if (p > 10.0) return cutoff(opts.high_price_premium);
    if (p > 2.0) return cutoff(38.0);
    return cutoff(18.0);
  }
  if (n.lo == 0 && n.hi == 2) return p > 10.0 ? cutoff(opts.high_price_premium) : cutoff(18.0);
  if (is_point(n, 0)) {
    if (b.soph == Support{0, 3}) return cutoff(38.0);
    if (b.soph == Support{0, 2}) return cutoff(18.0);
  }
  throw UnreachableStateError("no buyer action at " + example_state(b));
}

std::optional<BeliefState> bayes_restrict(const DiscreteModel& m,
                                          const std::function<Decision(const BeliefState&, double, double)>& buyer,
                                          const BeliefState& b, double p, Decision d) {
  const bool accepted = d == Decision::accept;
  BeliefState next;
  next.naive = b.naive;
  while (!next.naive.empty() && (m.values[next.naive.lo] >= p) != accepted) ++next.naive.lo;
  while (!next.naive.empty() && (m.values[next.naive.hi - 1] >= p) != accepted) --next.naive.hi;
  if (next.naive.empty()) next.naive = Support::none();

  std::vector<int> kept;
  for (int i = b.soph.lo; i < b.soph.hi; ++i)
    if (buyer(b, p, m.values[i]) == d) kept.push_back(i);
  if (!kept.empty()) {
    next.soph = {kept.front(), kept.back() + 1};
    if (next.soph.size() != static_cast<int>(kept.size()))
      throw InternalError("sophisticated support is not an interval after update at " + describe(m, b));
  }

  for (int i = next.naive.lo; i < next.naive.hi; ++i)
    if ((1.0 - m.mu) * m.probs_naive[i] > 0.0) return next;
  for (int i = next.soph.lo; i < next.soph.hi; ++i)
    if (m.mu * m.probs_soph[i] > 0.0) return next;
  return std::nullopt;
}

BeliefState bayes_update(const DiscreteModel& m,
                         const std::function<Decision(const BeliefState&, double, double)>& buyer,
                         const BeliefState& b, double p, Decision d) {
  if (auto next = bayes_restrict(m, buyer, b, p, d)) return *next;
  const int top = static_cast<int>(m.size()) - 1;
  if (b.soph.empty()) return {Support::none(), Support::point(top)};
  return {Support::none(), Support::point(d == Decision::accept ? b.soph.hi - 1 : b.soph.lo)};
}

BeliefState update_belief(const DiscreteModel&, const StrategyProfile& prof, const BeliefState& b, double p,
                          Decision d) {
  return prof.updater(b, p, d);
}

StrategyProfile example3pt(const DiscreteModel& m, const Example3ptOptions& opts) {
  m.validate();
  require_example(m);
  StrategyProfile prof;
  prof.name = "example3pt";
  prof.initial = {Support::full(3), Support::full(3)};
  prof.seller = [](const BeliefState& b) { return example_seller_action(b); };
  prof.buyer = [opts](const BeliefState& b, double p, double v) { return example_buyer_action(b, p, v, opts); };
  prof.updater = [m, buyer = prof.buyer](const BeliefState& b, double p, Decision d) {
    return bayes_update(m, buyer, b, p, d);
  };
  prof.price_breakpoints = {1.0, 2.0, 10.0, 20.0};
  for (double v : kExampleValues)
    for (double premium : {18.0, 20.0, 38.0, opts.high_price_premium})
      if (v - premium > 0.0) prof.price_breakpoints.push_back(v - premium);
  return prof;
}

StrategyProfile no_learning(const DiscreteModel& m) {
  m.validate();
  const Support all = Support::full(m.size());
  const double top = m.highest();
  StrategyProfile prof;
  prof.name = "no_learning";
  prof.initial = {all, all};
  prof.seller = [all, top](const BeliefState& b) { return b.soph == all ? 0.0 : top; };
  prof.buyer = [all](const BeliefState& b, double p, double v) {
    if (b.soph == all) return p <= 0.0 ? Decision::accept : Decision::reject;
    return v >= p ? Decision::accept : Decision::reject;
  };
  prof.updater = [m, buyer = prof.buyer](const BeliefState& b, double p, Decision d) {
    if (auto next = bayes_restrict(m, buyer, b, p, d)) return *next;
    return BeliefState{Support::none(), Support::point(static_cast<int>(m.size()) - 1)};
  };
  prof.price_breakpoints = {0.0};
  return prof;
}

// ---- exact evaluation ----

Evaluator::Evaluator(DiscreteModel m, StrategyProfile prof) : m_(std::move(m)), prof_(std::move(prof)) {
  m_.validate();
}

Evaluator::Step Evaluator::step(const BeliefState& b, bool sophisticated, int index) const {
  const double p = prof_.seller(b);
  const double v = m_.values[index];
  const Decision d = sophisticated ? prof_.buyer(b, p, v) : (v >= p ? Decision::accept : Decision::reject);
  return {prof_.updater(b, p, d), p, d == Decision::accept};
}

double Evaluator::path_sum(const BeliefState& b, bool sophisticated, int index,
                           const std::function<double(double, bool)>& payoff) const {
  std::map<BeliefState, std::size_t> seen;
  std::vector<double> flows;
  BeliefState s = b;
  while (!seen.contains(s)) {
    seen.emplace(s, flows.size());
    const Step st = step(s, sophisticated, index);
    flows.push_back(payoff(st.price, st.bought));
    s = st.next;
  }
  const double delta = m_.delta;
  const std::size_t start = seen.at(s);
  double loop = 0.0;
  for (std::size_t k = flows.size(); k-- > start;) loop = flows[k] + delta * loop;
  const double loop_len = static_cast<double>(flows.size() - start);
  double value = loop / (1.0 - std::pow(delta, loop_len));
  for (std::size_t k = start; k-- > 0;) value = flows[k] + delta * value;
  return value;
}

double Evaluator::type_revenue(const BeliefState& b, bool sophisticated, int index) const {
  return path_sum(b, sophisticated, index, [](double p, bool bought) { return bought ? p : 0.0; });
}

double Evaluator::soph_utility(const BeliefState& b, int index) const {
  const double v = m_.values[index];
  return path_sum(b, true, index, [v](double p, bool bought) { return bought ? v - p : 0.0; });
}

std::pair<std::vector<double>, std::vector<double>> Evaluator::weights(const BeliefState& b) const {
  const std::size_t n = m_.size();
  std::vector<double> wn(n, 0.0), ws(n, 0.0);
  double total = 0.0;
  for (int i = b.naive.lo; i < b.naive.hi; ++i) total += wn[i] = (1.0 - m_.mu) * m_.probs_naive[i];
  for (int i = b.soph.lo; i < b.soph.hi; ++i) total += ws[i] = m_.mu * m_.probs_soph[i];
  if (total > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      wn[i] /= total;
      ws[i] /= total;
    }
  } else if (!b.soph.empty()) {
    for (int i = b.soph.lo; i < b.soph.hi; ++i) ws[i] = 1.0 / b.soph.size();
  } else {
    for (int i = b.naive.lo; i < b.naive.hi; ++i) wn[i] = 1.0 / b.naive.size();
  }
  return {wn, ws};
}

double Evaluator::seller_value(const BeliefState& b) const { return deviation_value(b, prof_.seller(b)); }

double Evaluator::soph_value(const BeliefState& b) const {
  if (b.soph.empty()) return 0.0;
  double mass = 0.0, value = 0.0;
  for (int i = b.soph.lo; i < b.soph.hi; ++i) mass += m_.probs_soph[i];
  for (int i = b.soph.lo; i < b.soph.hi; ++i) {
    const double w = mass > 0.0 ? m_.probs_soph[i] / mass : 1.0 / b.soph.size();
    if (w > 0.0) value += w * type_revenue(b, true, i);
  }
  return value;
}

double Evaluator::deviation_value(const BeliefState& b, double p) const {
  const auto [wn, ws] = weights(b);
  double value = 0.0;
  for (std::size_t i = 0; i < m_.size(); ++i) {
    const double v = m_.values[i];
    const int idx = static_cast<int>(i);
    if (wn[i] > 0.0) {
      const Decision d = v >= p ? Decision::accept : Decision::reject;
      value += wn[i] * ((d == Decision::accept ? p : 0.0) +
                        m_.delta * type_revenue(prof_.updater(b, p, d), false, idx));
    }
    if (ws[i] > 0.0) {
      const Decision d = prof_.buyer(b, p, v);
      value += ws[i] * ((d == Decision::accept ? p : 0.0) +
                        m_.delta * type_revenue(prof_.updater(b, p, d), true, idx));
    }
  }
  return value;
}

double Evaluator::accept_value(const BeliefState& b, double p, int index) const {
  return (m_.values[index] - p) + m_.delta * soph_utility(prof_.updater(b, p, Decision::accept), index);
}

double Evaluator::reject_value(const BeliefState& b, double p, int index) const {
  return m_.delta * soph_utility(prof_.updater(b, p, Decision::reject), index);
}

std::vector<StateValues> discounted_values(const DiscreteModel& m, const StrategyProfile& prof) {
  const Evaluator ev(m, prof);
  std::vector<StateValues> out;
  std::set<BeliefState> seen{prof.initial};
  std::deque<BeliefState> queue{prof.initial};
  while (!queue.empty()) {
    const BeliefState b = queue.front();
    queue.pop_front();
    StateValues sv{b, prof.seller(b), ev.seller_value(b), ev.soph_value(b), {}};
    for (int i = 0; i < static_cast<int>(m.size()); ++i) sv.soph_utility.push_back(ev.soph_utility(b, i));
    out.push_back(std::move(sv));
    const auto [wn, ws] = ev.weights(b);
    const double p = prof.seller(b);
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      std::vector<Decision> moves;
      if (wn[i] > 0.0) moves.push_back(m.values[i] >= p ? Decision::accept : Decision::reject);
      if (ws[i] > 0.0) moves.push_back(prof.buyer(b, p, m.values[i]));
      for (Decision d : moves) {
        const BeliefState next = prof.updater(b, p, d);
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
  }
  return out;
}

// ---- one-shot deviations ----

std::vector<double> candidate_prices(const DiscreteModel& m, const StrategyProfile& prof, const BeliefState& b,
                                     const CertificateOptions& opts) {
  std::vector<double> anchors = m.values;
  for (std::size_t i = 1; i < m.size(); ++i) anchors.push_back(0.5 * (m.values[i - 1] + m.values[i]));
  anchors.insert(anchors.end(), prof.price_breakpoints.begin(), prof.price_breakpoints.end());
  anchors.push_back(prof.seller(b));
  std::vector<double> prices{0.0, m.highest() + 1.0};
  for (double a : anchors)
    for (double x : {a - opts.offset, a, a + opts.offset})
      if (x >= 0.0) prices.push_back(x);
  std::sort(prices.begin(), prices.end());
  prices.erase(std::unique(prices.begin(), prices.end()), prices.end());
  return prices;
}

Certificate verify_one_shot_deviation(const DiscreteModel& m, const StrategyProfile& prof,
                                      const CertificateOptions& opts) {
  const Evaluator ev(m, prof);
  Certificate cert;
  std::set<BeliefState> seen{prof.initial};
  std::deque<BeliefState> queue{prof.initial};
  while (!queue.empty()) {
    const BeliefState b = queue.front();
    queue.pop_front();
    cert.states.push_back(b);

    const double prescribed = prof.seller(b);
    const double value = ev.seller_value(b);
    const std::vector<double> prices = candidate_prices(m, prof, b, opts);
    for (double p : prices) {
      for (Decision d : {Decision::accept, Decision::reject}) {
        const BeliefState next = prof.updater(b, p, d);
        if (seen.insert(next).second) queue.push_back(next);
      }
      const double dev = ev.deviation_value(b, p);
      const double gain = dev - value;
      cert.worst_seller_gain = std::max(cert.worst_seller_gain, gain);
      if (gain > opts.tol * std::max(1.0, std::abs(value))) cert.seller_violations.push_back({b, prescribed, value, p, dev});

      for (int i = 0; i < static_cast<int>(m.size()); ++i) {
        const Decision d = prof.buyer(b, p, m.values[i]);
        const double ua = ev.accept_value(b, p, i);
        const double ur = ev.reject_value(b, p, i);
        const double chosen = d == Decision::accept ? ua : ur;
        const double other = d == Decision::accept ? ur : ua;
        cert.worst_buyer_gain = std::max(cert.worst_buyer_gain, other - chosen);
        if (other - chosen > opts.tol * std::max(1.0, std::abs(chosen)))
          cert.buyer_violations.push_back({b, p, m.values[i], d, chosen, other});
      }
    }
  }
  return cert;
}

PropertyReport check_properties_ab(const DiscreteModel& m, const StrategyProfile& prof,
                                   const std::vector<BeliefState>& states, double tol) {
  const Evaluator ev(m, prof);
  PropertyReport rep;
  for (const BeliefState& b : states) {
    if (b.naive.empty()) continue;
    const double low = m.values[b.naive.lo];
    const double high = m.values[b.naive.hi - 1];
    const double p = prof.seller(b);
    if (p < low - tol || p > high + tol) {
      rep.naive_justified = false;
      rep.price_failures.push_back(b);
    }
    if (ev.seller_value(b) < low / (1.0 - m.delta) - tol) {
      rep.above_baseline = false;
      rep.revenue_failures.push_back(b);
    }
  }
  return rep;
}

// ---- bounds ----

double revenue_lower_bound(const DiscreteModel& m) {
  m.validate();
  const double scale = m.delta / (1.0 - m.delta);
  double best = 0.0;
  for (double p : m.values) best = std::max(best, scale * p * (1.0 - m.cdf(p / (1.0 - m.delta))));
  return best;
}

double revenue_lower_bound(const Distribution& d, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("delta must lie in [0,1)");
  // Substituting x = p / (1 - delta) turns the objective into delta * x (1 - F(x)).
  return delta * d.r_star();
}

MdpResult naive_mdp_value(const DiscreteModel& m, double tol, int max_iter) {
  m.validate();
  const int n = static_cast<int>(m.size());
  auto id = [n](int lo, int hi) { return lo * (n + 1) + hi; };
  std::vector<double> value((n + 1) * (n + 1), 0.0), next(value.size(), 0.0);

  auto backup = [&](int lo, int hi, const std::vector<double>& v, double* price) {
    double mass = 0.0;
    for (int i = lo; i < hi; ++i) mass += m.probs_naive[i];
    if (!(mass > 0.0)) return 0.0;
    double best = -kInf;
    for (int q = lo; q < hi; ++q) {
      double above = 0.0;
      for (int i = q; i < hi; ++i) above += m.probs_naive[i];
      above /= mass;
      const double r = above * (m.values[q] + m.delta * v[id(q, hi)]) + (1.0 - above) * m.delta * v[id(lo, q)];
      if (r > best) {
        best = r;
        if (price) *price = m.values[q];
      }
    }
    return best;
  };

  int it = 0;
  for (; it < max_iter; ++it) {
    double change = 0.0, scale = 1.0;
    for (int lo = 0; lo < n; ++lo)
      for (int hi = lo + 1; hi <= n; ++hi) {
        const double x = backup(lo, hi, value, nullptr);
        change = std::max(change, std::abs(x - value[id(lo, hi)]));
        scale = std::max(scale, std::abs(x));
        next[id(lo, hi)] = x;
      }
    value.swap(next);
    if (change <= tol * scale) break;
  }
  MdpResult r{value[id(0, n)], 0.0, it + 1};
  backup(0, n, value, &r.root_price);
  return r;
}

BenchmarkReport commitment_benchmark(const DiscreteModel& m) {
  m.validate();
  double soph_best = 0.0, lhs = 0.0;
  for (double p : m.values) {
    soph_best = std::max(soph_best, p * m.soph_at_least(p));
    lhs = std::max(lhs, p * (1.0 - m.cdf(p / (1.0 - m.delta))));
  }
  BenchmarkReport r{};
  r.soph_part = m.mu * soph_best / (1.0 - m.delta);
  r.naive_part = m.mu < 1.0 ? (1.0 - m.mu) * naive_mdp_value(m).value : 0.0;
  r.benchmark = r.soph_part + r.naive_part;
  r.bound_lhs = lhs;
  r.bound_rhs = (1.0 - m.delta) * m.mu * soph_best - m.grid_size();
  r.discrete_slack = r.bound_lhs - r.bound_rhs;
  return r;
}

double continuous_bound_slack(const Distribution& d, double mu, double delta) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("delta must lie in [0,1)");
  const double lhs = (1.0 - delta) * d.r_star();
  return lhs - (1.0 - delta) * mu * d.r_star();
}

EpsilonSearch epsilon_search(const Example3ptOptions& opts, double tol) {
  auto clean = [&](double eps) {
    const DiscreteModel m = DiscreteModel::example(eps);
    return verify_one_shot_deviation(m, example3pt(m, opts)).clean();
  };
  if (!clean(0.0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  if (clean(1.0)) return {1.0, kInf};
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (clean(mid) ? lo : hi) = mid;
  }
  return {lo, hi};
}

}  // namespace repsale::infinite
