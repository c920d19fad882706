#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "repsale/continuation.hpp"
#include "repsale/distribution.hpp"

namespace repsale {

struct RevenueBreakdown {
  double rev_total = 0.0;
  double rev_round1 = 0.0;
  double rev_accept = 0.0;
  double rev_reject = 0.0;
  double rev_naive = 0.0;  // per naive buyer
  double rev_soph = 0.0;   // per sophisticated buyer
  // Expected units sold, each valued at the population mean value.
  double welfare = 0.0;
  // Expected gains from trade, sum of v over units bought.
  double surplus = 0.0;
  // Reject revenue minus mu (F(t) - F(p)) p at p = p*_{<=t}; set for
  // sophisticated-focused continuations only.
  std::optional<double> reamortization_gap;
};

RevenueBreakdown revenue_of_continuation(const Distribution& d, double mu, const Continuation& c);

// (revenue per naive buyer, revenue per sophisticated buyer)
std::pair<double, double> per_capita_revenues(const Distribution& d, double mu, const Continuation& c);

double welfare(const Distribution& d, double mu, const Continuation& c);

struct TwoRoundEquilibrium {
  double mu = 0.0;
  Continuation cont;
  RevenueBreakdown rev;
  Focus regime = Focus::naive;
};

struct SolveOptions {
  int p1_grid = 512;
  int starts = 3;  // local maxima refined
  ImplementOptions implement;
};

TwoRoundEquilibrium solve_equilibrium(const Distribution& d, double mu, const SolveOptions& opts = {});

Focus classify_regime(const TwoRoundEquilibrium& eq);

// mu at which a sweep flips from naive- to sophisticated-focused, refined by
// bisection to `tol`. Empty when the sweep never flips.
std::optional<double> regime_boundary(const Distribution& d, const std::vector<TwoRoundEquilibrium>& rows,
                                      const SolveOptions& opts = {}, double tol = 1e-6);

// Largest grid mu whose equilibrium is naive-focused.
std::optional<double> empirical_mu_f(const std::vector<TwoRoundEquilibrium>& rows);

std::vector<TwoRoundEquilibrium> sweep(const Distribution& d, const std::vector<double>& mu_grid,
                                       const SolveOptions& opts = {}, int workers = 1);

}  // namespace repsale
