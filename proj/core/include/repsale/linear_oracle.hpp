#pragma once

#include <vector>

#include "repsale/continuation.hpp"

// Closed forms for values uniform on [0,1].
namespace repsale::linear {

struct Constants {
  double mu_hat;  // naive-focused interior optimum meets the kink
  double mu_bar;  // regime switch: the two local revenue maxima tie
};

const Constants& constants();

// Residuals of the equations defining the two constants.
double mu_hat_residual(double mu);
double mu_bar_residual(double mu);

double seller_round1(double mu);
std::vector<PricePoint> seller_round2(double mu, double p1, Decision decision);
double buyer_threshold(double mu, double p1);

// Seller revenue when p1 is posted and play continues per the closed forms.
double rev_of_p1(double mu, double p1);
double rev_closed(double mu);
// Throws OutOfBranchError below mu_bar.
double welfare_closed(double mu);

// The closed-form continuation after first-round price p1.
Continuation profile(double mu, double p1);
Continuation on_path(double mu);

}  // namespace repsale::linear
