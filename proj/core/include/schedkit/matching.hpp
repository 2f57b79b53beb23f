#pragma once

#include <vector>

#include "schedkit/common.hpp"
#include "schedkit/model.hpp"

namespace schedkit::matching {

// The left side could not be covered: the caller's fractional solution did
// not actually have the promised expansion slack.
struct expansion_error : error {
  using error::error;
};

struct Bipartite {
  int n_left = 0;
  int n_right = 0;
  std::vector<std::vector<int>> adj;  // per left vertex, right neighbours
};

// Matching that covers every left vertex, assuming |N(S')| >= (1+eps)|S'|
// for all S' (not checked up front; violations surface as expansion_error).
// Hopcroft-Karp limited to floor(log_{1+eps}|S|) + 2 phases.
std::vector<int> match_expanding(const Bipartite& h, double eps);

// Group memberships for one machine: its support jobs (given as parallel
// p / x vectors) are sorted by p nonincreasing (ties by input index) and cut
// into ceil((1+eps) * total mass) buckets of mass 1/(1+eps). Returns
// (input index, group r) pairs, r 1-based; a job joins every group whose
// open mass interval its own open interval intersects.
std::vector<std::pair<int, int>> machine_grouping(const std::vector<double>& p,
                                                  const std::vector<double>& x,
                                                  double eps);

// Rounds a fractional assignment x (per edge, with x(delta(j)) = 1 for every
// job) to an integral one by grouping each machine's job mass into
// 1/(1+eps)-sized buckets and matching jobs to buckets. The returned
// assignment satisfies, for every machine i,
//   sum_{j: sigma(j)=i} p_j <= (1+eps) sum_j p_j x_{j,i} + max_{sigma(j)=i} p_j
// (asserted on every call).
std::vector<int> round_by_grouping(int n_jobs, int n_machines,
                                   const std::vector<std::pair<int, int>>& edges,
                                   const std::vector<double>& p_edge,
                                   const std::vector<double>& x_edge,
                                   double eps);

model::Assignment round_by_grouping(const model::UnrelatedInstance& inst,
                                    const std::vector<double>& x_edge,
                                    double eps);

}  // namespace schedkit::matching
