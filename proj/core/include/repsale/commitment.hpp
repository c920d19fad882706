#pragma once

#include <vector>

#include "repsale/distribution.hpp"

namespace repsale {

// Deterministic prices the seller commits to before round 1.
struct CommitmentSchedule {
  double p1 = 0.0;
  double p2R = 0.0;
  double p2A = 0.0;

  // Value at which a sophisticated buyer switches from one unit to two.
  double t() const { return p1 + p2A - p2R; }
  bool ordered(double tol = 1e-12) const { return p2R <= p1 + tol && p1 <= p2A + tol; }
};

// Revenue of an ordered schedule (p2R <= p1 <= p2A); throws DomainError otherwise.
double commitment_revenue(const Distribution& d, double mu, const CommitmentSchedule& s);

// Revenue of any schedule. Sophisticated buyers compare buying nothing, one unit
// at min(p1, p2R) and two units at p1 + p2A, breaking ties toward more units.
double commitment_revenue_general(const Distribution& d, double mu, const CommitmentSchedule& s);

// Reorders a schedule into p2R <= p1 <= p2A without lowering revenue.
CommitmentSchedule normalize_schedule(CommitmentSchedule s);

struct CommitmentSolution {
  double mu = 0.0;
  CommitmentSchedule schedule;
  double revenue = 0.0;
};

struct CommitmentOptions {
  int grid = 64;            // points per axis of the coarse search
  int refine_grid = 8;      // points per axis of each refinement
  int refine_rounds = 6;
  int workers = 1;
};

CommitmentSolution solve_commitment(const Distribution& d, double mu, const CommitmentOptions& opts = {});

std::vector<CommitmentSolution> sweep_commitment(const Distribution& d, const std::vector<double>& mu_grid,
                                                 const CommitmentOptions& opts = {});

}  // namespace repsale
