#pragma once

#include <string>
#include <vector>

#include "schedkit/common.hpp"
#include "schedkit/sparse.hpp"

namespace schedkit::mpc {

// Mixed packing and covering feasibility system: find x >= 0 with
// Px <= 1 and Cx >= 1 (all coefficients non-negative, right-hand sides
// normalized to 1 by the caller).
struct MpcProblem {
  int n_vars = 0;
  SparseMatrix packing;
  SparseMatrix covering;

  long long nonzeros() const {
    return packing.nonzeros() + covering.nonzeros();
  }
  int n_rows() const { return packing.n_rows() + covering.n_rows(); }
  void validate() const;  // entries >= 0, indices in range, covering rows non-empty
};

enum class MpcStatus { solved, infeasible_or_budget_exhausted };

struct MpcResult {
  MpcStatus status = MpcStatus::infeasible_or_budget_exhausted;
  std::vector<double> x;   // non-negative; meaningful when solved
  long long steps = 0;     // increments spent against the budget
};

struct MpcOptions {
  // Step budget is budget_constant * nonzeros * ln(max(rows, 2)) / eps^2.
  double budget_constant = 10.0;
};

// Width-independent multiplicative-weights solver. If a feasible point
// exists it returns solved(x) with Px <= (1+eps) and Cx >= 1/(1+eps)
// componentwise (tolerance 1e-9, re-verified from the returned x before
// returning). Infeasibility surfaces as budget exhaustion; the solver may
// also stop early when no coordinate can make progress, which certifies
// infeasibility, and reports the same status.
MpcResult solve_mpc(const MpcProblem& problem, double eps,
                    const MpcOptions& options = {});

// {"rows":[[[col,val],...],...]} dump of P, C and x for debugging.
std::string debug_dump(const MpcProblem& problem, const std::vector<double>& x);

}  // namespace schedkit::mpc
