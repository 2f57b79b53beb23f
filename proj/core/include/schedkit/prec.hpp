#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "schedkit/common.hpp"
#include "schedkit/model.hpp"
#include "schedkit/mwu.hpp"
#include "schedkit/sparse.hpp"
#include "schedkit/unrelated.hpp"

namespace schedkit::prec {

// Maximum total length of jobs on a precedence chain ending at each job.
std::vector<long long> chain_bounds(const model::PrecInstance& inst);

// Time-indexed relaxation over the monotone polytope: variable x_{j,d}
// means "job j completes by tau_d". Fixed to 0 while tau_d < q_j, fixed to
// 1 at d = D; the one machine-capacity row per time index d reads
// sum_j p_j x_{j,d} <= m tau_d.
struct PrecLp {
  unrelated::TauGrid grid;
  std::vector<long long> q;                  // chain bounds
  std::vector<std::pair<int, int>> vars;     // variable -> (job, d)
  std::vector<std::vector<int>> var_of_job;  // per job, indexed by d; -1 fixed
  std::vector<std::pair<int, int>> monotone_edges;  // (v, u): x_v <= x_u
  SparseMatrix capacity;                     // packing rows, rhs folded to 1
  std::vector<double> objective;             // a_{j,d} = w_j eta_d
  double phi = 0.0;                          // additive slack, eps * w(J)
};

PrecLp build_prec_lp(const model::PrecInstance& inst, double eps);

struct PrecLpSolution {
  PrecLp lp;
  std::vector<double> x;  // per PrecLp variable
  std::vector<double> completion;  // fractional completion time per job
  mwu::MwuStats stats;
};

// Multiplicative-weights solve with the flow-based oracle for the
// aggregated constraint. Audits on every call: completion times dominate
// the chain bounds, respect precedence, and the prefix-volume bound
// p({j : C_j <= C}) <= (2+5 eps) m C holds for every completion level.
PrecLpSolution solve_prec_lp(const model::PrecInstance& inst, double eps);

// Earliest-fit placement of jobs in nondecreasing priority order (ties by
// topological rank, then index). F must respect precedence. Runs on the
// idle-interval and critical-counter trees in O((n + kappa) log n).
model::Schedule list_scheduling(const model::PrecInstance& inst,
                                const std::vector<double>& priority);

enum class PrecMode { single_machine, unit_theta, unit_det, general };

struct PrecOptions {
  std::uint64_t seed = 0;
  int theta_samples = 20;  // unit_theta keeps the best of this many draws
};

model::Schedule round_prec(const model::PrecInstance& inst,
                           const PrecLpSolution& lp, PrecMode mode,
                           const PrecOptions& options = {});

struct PrecResult {
  model::Schedule schedule;
  model::ObjectiveValue value;
  double lp_objective = 0.0;
  mwu::MwuStats stats;
};

PrecResult solve_prec(const model::PrecInstance& inst, double eps,
                      PrecMode mode, const PrecOptions& options = {});

}  // namespace schedkit::prec
