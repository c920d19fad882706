#pragma once

#include <string>
#include <vector>

#include "repsale/distribution.hpp"

namespace repsale {

enum class Focus { naive, sophisticated };
enum class Decision { reject, accept };

const char* to_string(Focus f);

struct PricePoint {
  double price;
  double prob;
};

// First-round price, second-round prices after each decision, and the
// sophisticated threshold that makes the marginal type indifferent.
struct Continuation {
  double p1 = 0.0;
  std::vector<PricePoint> p2R;  // one or two points, ascending price
  double p2A = 0.0;
  double t = 0.0;
  bool all_reject = false;  // no sophisticated type accepts; t is reported as 1
  Focus focus = Focus::naive;

  double expected_p2R() const;
  double p2R_lo() const { return p2R.front().price; }
  double p2R_hi() const { return p2R.back().price; }
  double alpha_lo() const { return p2R.front().prob; }
  // Accept utility minus reject utility of the type at the threshold.
  double indifference_gap() const;
};

struct FocusMargin {
  double margin;  // (1 - mu) R'(t) + mu (1 - F(t))
  bool holds;
};

FocusMargin soph_focus_condition(const Distribution& d, double mu, double t);

// Unique sophisticated-focused continuation with threshold t.
Continuation implement_sophisticated(const Distribution& d, double mu, double t);

// First-round price that balances the two reject peaks, via the quantile function.
double p1_closed_form(const Distribution& d, double mu, double t, double pL);

struct ImplementOptions {
  int t_grid = 256;        // scan cells on [p1, 1]
  double jump_tol = 1e-7;  // reject-price gap treated as a discontinuity
};

// A continuation for any first-round price; the smallest crossing threshold is used.
Continuation implement_for_price(const Distribution& d, double mu, double p1,
                                 const ImplementOptions& opts = {});

// Grid cells [a, b] on which accept-minus-reject utility of the marginal type
// turns non-negative. The first one is the threshold implement_for_price uses.
struct Crossing {
  double lo;
  double hi;
};
std::vector<Crossing> threshold_crossings(const Distribution& d, double mu, double p1,
                                          const ImplementOptions& opts = {});

struct ExclusivityReport {
  enum class Status { none_found, violation, not_applicable };
  Status status;
  std::vector<Crossing> naive_crossings;
};

ExclusivityReport check_exclusivity(const Distribution& d, double mu, double p1,
                                    int t_grid = 2048);

// The five price-ordering inequalities; returns a description of each failure.
std::vector<std::string> ordering_violations(const Distribution& d, const Continuation& c,
                                             double tol = 1e-9);

}  // namespace repsale
