#pragma once

#include <cstdint>
#include <vector>

#include "schedkit/common.hpp"
#include "schedkit/model.hpp"

namespace schedkit::unrelated {

// Geometric completion-time grid: tau[0] = 0, tau[d] = (1+eps)^(d-1).
struct TauGrid {
  double eps = 0.0;
  std::vector<double> tau;

  int D() const { return static_cast<int>(tau.size()) - 1; }
  double eta(int d) const { return tau[d + 1] - tau[d]; }
  // Smallest grid with tau[D] >= target.
  static TauGrid up_to(double eps, double target);
  // Smallest d >= 1 with tau[d] >= value (value <= tau[D] required).
  int first_at_least(double value) const;
};

// Volume of a job of length p, completing at C, that is processed before
// time theta: min{(p + theta - C)_+, p}.
double rho(double p, double C, double theta);

// L_q^q increment of a job of length p completing at tau_d:
// tau_d^q - (tau_d - p)^q.
double lq_cost_coeff(double q, double tau_d, double p);

// Keep the fastest half of a job's fractional mass and double it: given y
// over machines sorted by nondecreasing processing time, returns y' with
// y'_k = min((1 - sum_{k'<k} y'_{k'})_+, 2 y_k).
std::vector<double> fast_half_doubling(const std::vector<double>& y);

struct LpStats {
  long long rows = 0;
  long long nonzeros = 0;
  long long mpc_steps = 0;
  int guesses_tried = 0;
};

struct SolveResult {
  model::Assignment assignment;
  double value = 0.0;
  double guess = 0.0;  // accepted guess parameter (makespan P, budget Phi, ...)
  LpStats stats;
};

// (2+O(eps))-approximate makespan: geometric guesses seeded by the greedy
// min-p assignment (an m-approximation), one mixed packing/covering LP per
// guess, grouping rounding, binary search for the smallest feasible guess.
SolveResult solve_makespan(const model::UnrelatedInstance& inst, double eps);

struct WcOptions {
  bool deterministic = true;
  std::uint64_t seed = 0;
  // Thin the per-(machine, time) packing rows to terms with
  // tau_d >= (eps/n) tau_r, scaling job volumes by (1-eps). Off by default;
  // only needed when weights are super-polynomial.
  bool thin_constraints = false;
};

// (1.5+O(eps))-approximate weighted completion time over a time-indexed LP;
// deterministic mode derandomizes the independent rounding by conditional
// expectation with per-machine prefix-sum trees.
SolveResult solve_weighted_completion(const model::UnrelatedInstance& inst,
                                      double eps, const WcOptions& options = {});

// L_q norm of machine loads, q > 1. Rounding branches: q == 2 derandomized
// independent rounding (sqrt(2)+O(eps)); restricted assignment via grouping
// (2+O(eps)); otherwise fast-half doubling + grouping
// ((2^{2q-1}+2^q)^{1/q}+O(eps) < 4+O(eps)).
SolveResult solve_lq(const model::UnrelatedInstance& inst, double q,
                     double eps, std::uint64_t seed = 0);

// Number of times the fractional-load audit exceeded its generous
// (1+eps)^{8q} envelope (flagged, not failed).
long long lq_audit_flags();
void reset_lq_audit_flags();

}  // namespace schedkit::unrelated
