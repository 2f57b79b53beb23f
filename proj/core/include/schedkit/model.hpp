#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "schedkit/common.hpp"

namespace schedkit::model {

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

struct UnrelatedEdge {
  int job = 0;
  int machine = 0;
  long long p = 1;  // processing time of `job` on `machine`
};

// Bipartite job-machine instance. Every job must have at least one incident
// edge; (job, machine) pairs are unique.
struct UnrelatedInstance {
  int n_jobs = 0;
  int n_machines = 0;
  std::vector<UnrelatedEdge> edges;
  std::optional<std::vector<long long>> weights;  // per-job, positive
  std::optional<double> q;                        // norm exponent, > 1

  void validate() const;  // throws validation_error
  std::vector<std::vector<int>> edges_of_job() const;      // edge indices
  std::vector<std::vector<int>> edges_of_machine() const;  // edge indices
};

// Identical machines, precedence-constrained jobs. `prec` arcs (j, j2) mean
// j must complete before j2 starts; the arc set is a DAG but is not assumed
// transitively closed.
struct PrecInstance {
  int n_jobs = 0;
  std::vector<long long> sizes;    // positive
  std::vector<long long> weights;  // non-negative
  int m = 1;
  std::vector<std::pair<int, int>> prec;

  void validate() const;  // throws validation_error (cycle check included)
  // Deterministic topological order (Kahn, min-index first). Throws on cycle.
  std::vector<int> topo_order() const;
  long long total_size() const;
};

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

struct Assignment {
  std::vector<int> machine_of;  // per job
};

struct Schedule {
  std::vector<long long> completion;  // per job; start = completion - size
  std::vector<long long> starts(const PrecInstance& inst) const;
};

enum class Objective { makespan, weighted_completion, lq_norm };

struct ObjectiveValue {
  Objective kind = Objective::makespan;
  double value = 0.0;
};

const char* objective_name(Objective o);

// ---------------------------------------------------------------------------
// Evaluation (exact integer arithmetic for makespan and weighted completion;
// long double powers for the L_q norm, tolerance 1e-9 in comparisons)
// ---------------------------------------------------------------------------

// Validates the solution against the instance and computes the objective.
// Weighted completion on an Assignment applies Smith's rule per machine.
ObjectiveValue evaluate(const UnrelatedInstance& inst, const Assignment& sol,
                        Objective obj, std::optional<double> q_override = {});
ObjectiveValue evaluate(const PrecInstance& inst, const Schedule& sol);

// Throws validation_error naming the violated invariant.
void validate_solution(const UnrelatedInstance& inst, const Assignment& sol);
void validate_solution(const PrecInstance& inst, const Schedule& sol);

std::vector<long long> machine_loads(const UnrelatedInstance& inst,
                                     const Assignment& sol);
// Exact weighted completion of one machine's job set under Smith's rule,
// ties broken by job index.
long long smith_cost(const std::vector<std::pair<long long, long long>>& pw);
// sum_i load_i^q as a long double (used for L_q comparisons without roots).
long double lq_pow(const std::vector<long long>& loads, double q);

// ---------------------------------------------------------------------------
// Brute-force oracles
// ---------------------------------------------------------------------------

struct BruteForceCaps {
  int max_jobs = 8;
  long long max_total_size = 40;  // prec oracle only
};

// Exhaustive search over all edge-respecting assignments. Throws size_error
// beyond the cap.
std::pair<Assignment, ObjectiveValue> brute_force_unrelated(
    const UnrelatedInstance& inst, Objective obj,
    std::optional<double> q_override = {}, const BruteForceCaps& caps = {});

// Exact minimum weighted completion time over all feasible non-preemptive
// schedules. Searches event-driven start times (a job starts at 0 or at
// another job's completion) in nondecreasing start order, with branch and
// bound; some optimum always has this form.
std::pair<Schedule, ObjectiveValue> brute_force_prec(
    const PrecInstance& inst, const BruteForceCaps& caps = {});

// ---------------------------------------------------------------------------
// Random instance generators (deterministic per seed)
// ---------------------------------------------------------------------------

enum class Family {
  unrelated_dense,
  unrelated_sparse,
  restricted_assignment,
  prec_chain,
  prec_random_dag,
  prec_unit,
};

std::optional<Family> family_from_name(const std::string& name);
const char* family_name(Family f);
bool family_is_prec(Family f);

struct GenParams {
  int n = 4;
  int m = 2;
  long long p_max = 10;
  long long w_max = 10;
  double density = 0.3;  // prec_random_dag / prec_unit arc probability
};

UnrelatedInstance generate_unrelated(std::uint64_t seed, Family family,
                                     const GenParams& params);
PrecInstance generate_prec(std::uint64_t seed, Family family,
                           const GenParams& params);

using Instance = std::variant<UnrelatedInstance, PrecInstance>;
Instance generate(std::uint64_t seed, Family family, const GenParams& params);

// ---------------------------------------------------------------------------
// Serialization (JSON; schema in README)
// ---------------------------------------------------------------------------

std::string to_json(const UnrelatedInstance& inst);
std::string to_json(const PrecInstance& inst);
std::string to_json(const Instance& inst);
std::string to_json(const Assignment& sol);
std::string to_json(const Schedule& sol);

Instance instance_from_json(const std::string& text);

using Solution = std::variant<Assignment, Schedule>;
Solution solution_from_json(const std::string& text);

}  // namespace schedkit::model
