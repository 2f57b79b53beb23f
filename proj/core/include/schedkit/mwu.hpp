#pragma once

#include <functional>
#include <vector>

#include "schedkit/common.hpp"
#include "schedkit/sparse.hpp"

namespace schedkit::mwu {

// Oracle for the aggregated problem: given the weighted row b = (u/|u|)P,
// return y in the easy polytope Q with b.y <= 1+eps and
// a.y >= max{a.y* : y* in Q, b.y* <= 1} - phi.
using AggregateOracle = std::function<std::vector<double>(
    const std::vector<double>& b, double eps, double phi)>;

// max a.x subject to x in Q and Px <= 1, where Q is reachable only through
// the oracle. The caller promises feasibility.
struct PackingProblem {
  int n_vars = 0;
  SparseMatrix P;          // non-negative
  std::vector<double> a;   // non-negative objective row
  AggregateOracle oracle;
};

struct MwuOptions {
  double iter_constant = 4.0;  // cap = c * rows * max(ln rows, 1) / eps^2
  bool check_weights = true;   // weight-consistency drift audit
};

struct MwuStats {
  long long iterations = 0;
  long long oracle_calls = 0;
};

// Multiplicative-weights template solver. Returns x as a convex combination
// of oracle outputs (so x in Q) with Px <= ((1+eps)^2 + eps) * 1 and
// a.x >= a.x* - phi. Iteration-cap breach means the oracle broke its
// contract and raises internal_error.
std::vector<double> solve_packing(const PackingProblem& problem, double eps,
                                  double phi, const MwuOptions& options = {},
                                  MwuStats* stats = nullptr);

}  // namespace schedkit::mwu
