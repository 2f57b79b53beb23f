#include "schedkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "json.hpp"

namespace schedkit::model {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void UnrelatedInstance::validate() const {
  if (n_jobs < 0 || n_machines < 0)
    throw validation_error("negative job or machine count");
  std::vector<char> covered(n_jobs, 0);
  std::vector<std::vector<char>> seen(n_jobs);
  for (auto& row : seen) row.assign(n_machines, 0);
  for (const auto& e : edges) {
    if (e.job < 0 || e.job >= n_jobs)
      throw validation_error("edge job index out of range");
    if (e.machine < 0 || e.machine >= n_machines)
      throw validation_error("edge machine index out of range");
    if (e.p < 1) throw validation_error("edge processing time must be >= 1");
    if (seen[e.job][e.machine])
      throw validation_error("duplicate (job, machine) edge");
    seen[e.job][e.machine] = 1;
    covered[e.job] = 1;
  }
  for (int j = 0; j < n_jobs; ++j)
    if (!covered[j])
      throw validation_error("job " + std::to_string(j) +
                             " has no incident edge");
  if (weights) {
    if (static_cast<int>(weights->size()) != n_jobs)
      throw validation_error("weights length differs from n_jobs");
    for (long long w : *weights)
      if (w < 1) throw validation_error("job weights must be positive");
  }
  if (q && *q <= 1.0) throw validation_error("norm exponent q must be > 1");
}

std::vector<std::vector<int>> UnrelatedInstance::edges_of_job() const {
  std::vector<std::vector<int>> out(n_jobs);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    out[edges[e].job].push_back(e);
  return out;
}

std::vector<std::vector<int>> UnrelatedInstance::edges_of_machine() const {
  std::vector<std::vector<int>> out(n_machines);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    out[edges[e].machine].push_back(e);
  return out;
}

void PrecInstance::validate() const {
  if (n_jobs < 0) throw validation_error("negative job count");
  if (m < 1) throw validation_error("machine count must be >= 1");
  if (static_cast<int>(sizes.size()) != n_jobs)
    throw validation_error("sizes length differs from n_jobs");
  if (static_cast<int>(weights.size()) != n_jobs)
    throw validation_error("weights length differs from n_jobs");
  for (long long p : sizes)
    if (p < 1) throw validation_error("job sizes must be positive");
  for (long long w : weights)
    if (w < 0) throw validation_error("job weights must be non-negative");
  for (auto [a, b] : prec) {
    if (a < 0 || a >= n_jobs || b < 0 || b >= n_jobs)
      throw validation_error("precedence arc index out of range");
    if (a == b) throw validation_error("precedence self-loop");
  }
  topo_order();  // cycle check
}

std::vector<int> PrecInstance::topo_order() const {
  std::vector<int> indeg(n_jobs, 0);
  std::vector<std::vector<int>> succ(n_jobs);
  for (auto [a, b] : prec) {
    succ[a].push_back(b);
    ++indeg[b];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int j = 0; j < n_jobs; ++j)
    if (indeg[j] == 0) ready.push(j);
  std::vector<int> order;
  order.reserve(n_jobs);
  while (!ready.empty()) {
    int j = ready.top();
    ready.pop();
    order.push_back(j);
    for (int k : succ[j])
      if (--indeg[k] == 0) ready.push(k);
  }
  if (static_cast<int>(order.size()) != n_jobs)
    throw validation_error("precedence arcs contain a cycle");
  return order;
}

long long PrecInstance::total_size() const {
  return std::accumulate(sizes.begin(), sizes.end(), 0LL);
}

std::vector<long long> Schedule::starts(const PrecInstance& inst) const {
  std::vector<long long> s(completion.size());
  for (size_t j = 0; j < completion.size(); ++j)
    s[j] = completion[j] - inst.sizes[j];
  return s;
}

const char* objective_name(Objective o) {
  switch (o) {
    case Objective::makespan: return "makespan";
    case Objective::weighted_completion: return "weighted_completion";
    case Objective::lq_norm: return "lq_norm";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

void validate_solution(const UnrelatedInstance& inst, const Assignment& sol) {
  if (static_cast<int>(sol.machine_of.size()) != inst.n_jobs)
    throw validation_error("assignment length differs from n_jobs");
  std::vector<std::vector<char>> has(inst.n_jobs);
  for (auto& row : has) row.assign(inst.n_machines, 0);
  for (const auto& e : inst.edges) has[e.job][e.machine] = 1;
  for (int j = 0; j < inst.n_jobs; ++j) {
    int i = sol.machine_of[j];
    if (i < 0 || i >= inst.n_machines)
      throw validation_error("assigned machine out of range for job " +
                             std::to_string(j));
    if (!has[j][i])
      throw validation_error("assignment uses non-edge (job " +
                             std::to_string(j) + ", machine " +
                             std::to_string(i) + ")");
  }
}

std::vector<long long> machine_loads(const UnrelatedInstance& inst,
                                     const Assignment& sol) {
  std::vector<long long> load(inst.n_machines, 0);
  std::vector<std::vector<long long>> p(inst.n_jobs);
  for (auto& row : p) row.assign(inst.n_machines, -1);
  for (const auto& e : inst.edges) p[e.job][e.machine] = e.p;
  for (int j = 0; j < inst.n_jobs; ++j)
    load[sol.machine_of[j]] += p[j][sol.machine_of[j]];
  return load;
}

long long smith_cost(const std::vector<std::pair<long long, long long>>& pw) {
  // Sort by p/w ascending; equal ratios keep input (job index) order.
  std::vector<int> idx(pw.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return pw[a].first * pw[b].second < pw[b].first * pw[a].second;
  });
  long long cum = 0, total = 0;
  for (int k : idx) {
    cum += pw[k].first;
    total += pw[k].second * cum;
  }
  return total;
}

long double lq_pow(const std::vector<long long>& loads, double q) {
  long double s = 0;
  for (long long l : loads)
    if (l > 0) s += std::pow(static_cast<long double>(l), (long double)q);
  return s;
}

ObjectiveValue evaluate(const UnrelatedInstance& inst, const Assignment& sol,
                        Objective obj, std::optional<double> q_override) {
  validate_solution(inst, sol);
  std::vector<long long> load = machine_loads(inst, sol);
  switch (obj) {
    case Objective::makespan: {
      long long v = load.empty() ? 0 : *std::max_element(load.begin(), load.end());
      return {obj, static_cast<double>(std::max(v, 0LL))};
    }
    case Objective::weighted_completion: {
      if (!inst.weights)
        throw validation_error("weighted completion requires job weights");
      std::vector<std::vector<long long>> p(inst.n_jobs);
      for (auto& row : p) row.assign(inst.n_machines, -1);
      for (const auto& e : inst.edges) p[e.job][e.machine] = e.p;
      long long total = 0;
      for (int i = 0; i < inst.n_machines; ++i) {
        std::vector<std::pair<long long, long long>> pw;
        for (int j = 0; j < inst.n_jobs; ++j)
          if (sol.machine_of[j] == i) pw.push_back({p[j][i], (*inst.weights)[j]});
        total += smith_cost(pw);
      }
      return {obj, static_cast<double>(total)};
    }
    case Objective::lq_norm: {
      double q = q_override ? *q_override : (inst.q ? *inst.q : 0.0);
      if (q <= 1.0) throw argument_error("lq_norm requires exponent q > 1");
      long double s = lq_pow(load, q);
      return {obj, static_cast<double>(std::pow(s, (long double)1.0 / q))};
    }
  }
  throw internal_error("unknown objective");
}

void validate_solution(const PrecInstance& inst, const Schedule& sol) {
  if (static_cast<int>(sol.completion.size()) != inst.n_jobs)
    throw validation_error("completion vector length differs from n_jobs");
  for (int j = 0; j < inst.n_jobs; ++j)
    if (sol.completion[j] < inst.sizes[j])
      throw validation_error("job " + std::to_string(j) +
                             " completes before its own size");
  for (auto [a, b] : inst.prec)
    if (sol.completion[a] > sol.completion[b] - inst.sizes[b])
      throw validation_error("precedence arc (" + std::to_string(a) + ", " +
                             std::to_string(b) + ") violated");
  // Congestion: at most m intervals cover any unit slot.
  std::vector<std::pair<long long, int>> ev;
  for (int j = 0; j < inst.n_jobs; ++j) {
    ev.push_back({sol.completion[j] - inst.sizes[j], +1});
    ev.push_back({sol.completion[j], -1});
  }
  std::sort(ev.begin(), ev.end());
  int cur = 0;
  for (auto [t, d] : ev) {
    cur += d;
    if (cur > inst.m)
      throw validation_error("more than m jobs run concurrently at time " +
                             std::to_string(t));
  }
}

ObjectiveValue evaluate(const PrecInstance& inst, const Schedule& sol) {
  validate_solution(inst, sol);
  long long total = 0;
  for (int j = 0; j < inst.n_jobs; ++j)
    total += inst.weights[j] * sol.completion[j];
  return {Objective::weighted_completion, static_cast<double>(total)};
}

// ---------------------------------------------------------------------------
// Brute-force oracle: unrelated machines
// ---------------------------------------------------------------------------

namespace {

struct UnrelatedSearch {
  UnrelatedSearch(const UnrelatedInstance& in, Objective o) : inst(in), obj(o) {}
  const UnrelatedInstance& inst;
  Objective obj;
  double q = 2.0;
  std::vector<std::vector<std::pair<int, long long>>> options;  // per job
  std::vector<long long> load;
  std::vector<int> cur;
  std::vector<int> best;
  long double best_val = std::numeric_limits<long double>::max();
  std::vector<std::vector<std::pair<long long, long long>>> on_machine;

  long double partial_value() const {
    switch (obj) {
      case Objective::makespan: {
        long long v = 0;
        for (long long l : load) v = std::max(v, l);
        return v;
      }
      case Objective::lq_norm:
        return lq_pow(load, q);
      case Objective::weighted_completion: {
        long long total = 0;
        for (const auto& pw : on_machine) total += smith_cost(pw);
        return total;
      }
    }
    return 0;
  }

  void dfs(int j) {
    if (j == inst.n_jobs) {
      long double v = partial_value();
      if (v < best_val) {
        best_val = v;
        best = cur;
      }
      return;
    }
    for (auto [i, p] : options[j]) {
      load[i] += p;
      if (obj == Objective::weighted_completion)
        on_machine[i].push_back({p, (*inst.weights)[j]});
      // All three objectives are nondecreasing when jobs are added.
      if (partial_value() < best_val) {
        cur[j] = i;
        dfs(j + 1);
      }
      load[i] -= p;
      if (obj == Objective::weighted_completion) on_machine[i].pop_back();
    }
  }
};

}  // namespace

std::pair<Assignment, ObjectiveValue> brute_force_unrelated(
    const UnrelatedInstance& inst, Objective obj,
    std::optional<double> q_override, const BruteForceCaps& caps) {
  inst.validate();
  if (inst.n_jobs > caps.max_jobs)
    throw size_error("brute_force_unrelated: " + std::to_string(inst.n_jobs) +
                     " jobs exceed cap " + std::to_string(caps.max_jobs));
  UnrelatedSearch s(inst, obj);
  if (obj == Objective::lq_norm) {
    double q = q_override ? *q_override : (inst.q ? *inst.q : 0.0);
    if (q <= 1.0) throw argument_error("lq_norm requires exponent q > 1");
    s.q = q;
  }
  if (obj == Objective::weighted_completion && !inst.weights)
    throw validation_error("weighted completion requires job weights");
  s.options.resize(inst.n_jobs);
  for (const auto& e : inst.edges) s.options[e.job].push_back({e.machine, e.p});
  s.load.assign(inst.n_machines, 0);
  s.cur.assign(inst.n_jobs, -1);
  s.on_machine.resize(inst.n_machines);
  s.dfs(0);
  Assignment a{s.best};
  return {a, evaluate(inst, a, obj, q_override)};
}

// ---------------------------------------------------------------------------
// Brute-force oracle: precedence-constrained schedules
// ---------------------------------------------------------------------------

namespace {

// Branch and bound over schedules built in nondecreasing start order, with
// starts restricted to 0 and completion times of already placed jobs.
struct PrecSearch {
  const PrecInstance& inst;
  std::vector<std::vector<int>> preds;
  std::vector<long long> chain;  // longest-chain lower bound on completion
  long long horizon;
  std::vector<int> cong;            // per unit slot
  std::vector<long long> comp;      // completion of placed jobs, -1 otherwise
  std::vector<long long> best_comp;
  long long best_val = std::numeric_limits<long long>::max();
  int placed = 0;
  long long partial = 0;

  explicit PrecSearch(const PrecInstance& in) : inst(in) {
    preds.resize(inst.n_jobs);
    for (auto [a, b] : inst.prec) preds[b].push_back(a);
    chain.assign(inst.n_jobs, 0);
    for (int j : inst.topo_order()) {
      long long q = 0;
      for (int p : preds[j]) q = std::max(q, chain[p]);
      chain[j] = q + inst.sizes[j];
    }
    horizon = inst.total_size() + 1;
    cong.assign(horizon + 1, 0);
    comp.assign(inst.n_jobs, -1);
  }

  bool fits(long long s, long long p) const {
    for (long long t = s; t < s + p; ++t)
      if (cong[t] >= inst.m) return false;
    return true;
  }

  void mark(long long s, long long p, int d) {
    for (long long t = s; t < s + p; ++t) cong[t] += d;
  }

  long long lower_bound(long long last_start) const {
    long long lb = partial;
    for (int j = 0; j < inst.n_jobs; ++j) {
      if (comp[j] >= 0) continue;
      long long c = std::max(chain[j], last_start + inst.sizes[j]);
      for (int p : preds[j])
        if (comp[p] >= 0) c = std::max(c, comp[p] + inst.sizes[j]);
      lb += inst.weights[j] * c;
    }
    return lb;
  }

  void dfs(long long last_start) {
    if (placed == inst.n_jobs) {
      if (partial < best_val) {
        best_val = partial;
        best_comp = comp;
      }
      return;
    }
    if (lower_bound(last_start) >= best_val) return;
    // Candidate events: 0 and completions of placed jobs.
    std::vector<long long> events{0};
    for (int j = 0; j < inst.n_jobs; ++j)
      if (comp[j] >= 0) events.push_back(comp[j]);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    for (int j = 0; j < inst.n_jobs; ++j) {
      if (comp[j] >= 0) continue;
      long long ready = 0;
      bool ok = true;
      for (int p : preds[j]) {
        if (comp[p] < 0) {
          ok = false;  // predecessor would have to start earlier
          break;
        }
        ready = std::max(ready, comp[p]);
      }
      if (!ok) continue;
      long long lo = std::max(ready, last_start);
      for (long long s : events) {
        if (s < lo) continue;
        if (s + inst.sizes[j] > horizon || !fits(s, inst.sizes[j])) continue;
        mark(s, inst.sizes[j], +1);
        comp[j] = s + inst.sizes[j];
        partial += inst.weights[j] * comp[j];
        ++placed;
        dfs(s);
        --placed;
        partial -= inst.weights[j] * comp[j];
        comp[j] = -1;
        mark(s, inst.sizes[j], -1);
      }
    }
  }
};

// Greedy warm start: earliest-fit list schedule for one priority order.
long long list_schedule_value(const PrecInstance& inst,
                              const std::vector<int>& order,
                              std::vector<long long>* out) {
  long long horizon = inst.total_size() + 1;
  std::vector<int> cong(horizon + 1, 0);
  std::vector<long long> comp(inst.n_jobs, -1);
  std::vector<std::vector<int>> preds(inst.n_jobs);
  for (auto [a, b] : inst.prec) preds[b].push_back(a);
  long long total = 0;
  for (int j : order) {
    long long t = 0;
    for (int p : preds[j]) t = std::max(t, comp[p]);
    for (;; ++t) {
      bool ok = true;
      for (long long u = t; u < t + inst.sizes[j]; ++u)
        if (cong[u] >= inst.m) {
          ok = false;
          break;
        }
      if (ok) break;
    }
    for (long long u = t; u < t + inst.sizes[j]; ++u) ++cong[u];
    comp[j] = t + inst.sizes[j];
    total += inst.weights[j] * comp[j];
  }
  if (out) *out = comp;
  return total;
}

}  // namespace

std::pair<Schedule, ObjectiveValue> brute_force_prec(
    const PrecInstance& inst, const BruteForceCaps& caps) {
  inst.validate();
  if (inst.n_jobs > caps.max_jobs)
    throw size_error("brute_force_prec: " + std::to_string(inst.n_jobs) +
                     " jobs exceed cap " + std::to_string(caps.max_jobs));
  if (inst.total_size() > caps.max_total_size)
    throw size_error("brute_force_prec: total size " +
                     std::to_string(inst.total_size()) + " exceeds cap " +
                     std::to_string(caps.max_total_size));
  PrecSearch s(inst);
  // Warm starts from a few precedence-respecting priority orders.
  {
    std::vector<int> topo = inst.topo_order();
    std::vector<long long> comp;
    long long v = list_schedule_value(inst, topo, &comp);
    if (v < s.best_val) {
      s.best_val = v;
      s.best_comp = comp;
    }
    // Smith-flavoured order: stable sort of the topological order by
    // ascending size/weight, keeping it precedence-feasible via repair.
    std::vector<int> rank(inst.n_jobs);
    for (int k = 0; k < inst.n_jobs; ++k) rank[topo[k]] = k;
    std::vector<int> order = topo;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return inst.sizes[a] * inst.weights[b] < inst.sizes[b] * inst.weights[a];
    });
    // Repair into a topological order preserving the sort as priority.
    std::vector<int> prio(inst.n_jobs);
    for (int k = 0; k < inst.n_jobs; ++k) prio[order[k]] = k;
    std::vector<int> indeg(inst.n_jobs, 0);
    std::vector<std::vector<int>> succ(inst.n_jobs);
    for (auto [a, b] : inst.prec) {
      succ[a].push_back(b);
      ++indeg[b];
    }
    auto cmp = [&](int a, int b) { return prio[a] > prio[b]; };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
    for (int j = 0; j < inst.n_jobs; ++j)
      if (indeg[j] == 0) ready.push(j);
    std::vector<int> repaired;
    while (!ready.empty()) {
      int j = ready.top();
      ready.pop();
      repaired.push_back(j);
      for (int k : succ[j])
        if (--indeg[k] == 0) ready.push(k);
    }
    v = list_schedule_value(inst, repaired, &comp);
    if (v < s.best_val) {
      s.best_val = v;
      s.best_comp = comp;
    }
  }
  s.best_val += 1;  // warm starts are upper bounds, not yet proven optimal
  s.dfs(0);
  Schedule sched{s.best_comp};
  return {sched, evaluate(inst, sched)};
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

std::optional<Family> family_from_name(const std::string& name) {
  if (name == "unrelated_dense") return Family::unrelated_dense;
  if (name == "unrelated_sparse") return Family::unrelated_sparse;
  if (name == "restricted_assignment") return Family::restricted_assignment;
  if (name == "prec_chain") return Family::prec_chain;
  if (name == "prec_random_dag") return Family::prec_random_dag;
  if (name == "prec_unit") return Family::prec_unit;
  return {};
}

const char* family_name(Family f) {
  switch (f) {
    case Family::unrelated_dense: return "unrelated_dense";
    case Family::unrelated_sparse: return "unrelated_sparse";
    case Family::restricted_assignment: return "restricted_assignment";
    case Family::prec_chain: return "prec_chain";
    case Family::prec_random_dag: return "prec_random_dag";
    case Family::prec_unit: return "prec_unit";
  }
  return "?";
}

bool family_is_prec(Family f) {
  return f == Family::prec_chain || f == Family::prec_random_dag ||
         f == Family::prec_unit;
}

UnrelatedInstance generate_unrelated(std::uint64_t seed, Family family,
                                     const GenParams& params) {
  if (family_is_prec(family))
    throw argument_error("family generates precedence instances");
  if (params.n < 1 || params.m < 1 || params.p_max < 1 || params.w_max < 1)
    throw argument_error("generator parameters must be positive");
  Rng rng(seed);
  UnrelatedInstance inst;
  inst.n_jobs = params.n;
  inst.n_machines = params.m;
  std::vector<long long> w(params.n);
  for (auto& x : w) x = rng.next_int(1, params.w_max);
  inst.weights = w;
  switch (family) {
    case Family::unrelated_dense:
      for (int j = 0; j < params.n; ++j)
        for (int i = 0; i < params.m; ++i)
          inst.edges.push_back({j, i, rng.next_int(1, params.p_max)});
      break;
    case Family::unrelated_sparse:
      for (int j = 0; j < params.n; ++j) {
        int deg = static_cast<int>(rng.next_int(1, std::min(params.m, 3)));
        std::vector<int> machines(params.m);
        std::iota(machines.begin(), machines.end(), 0);
        for (int k = 0; k < deg; ++k) {
          int pick = static_cast<int>(
              rng.next_int(k, static_cast<long long>(params.m) - 1));
          std::swap(machines[k], machines[pick]);
        }
        std::sort(machines.begin(), machines.begin() + deg);
        for (int k = 0; k < deg; ++k)
          inst.edges.push_back({j, machines[k], rng.next_int(1, params.p_max)});
      }
      break;
    case Family::restricted_assignment:
      for (int j = 0; j < params.n; ++j) {
        long long pj = rng.next_int(1, params.p_max);
        std::vector<int> eligible;
        for (int i = 0; i < params.m; ++i)
          if (rng.next_double() < 0.6) eligible.push_back(i);
        if (eligible.empty())
          eligible.push_back(
              static_cast<int>(rng.next_int(0, params.m - 1)));
        for (int i : eligible) inst.edges.push_back({j, i, pj});
      }
      break;
    default:
      throw argument_error("unhandled unrelated family");
  }
  inst.validate();
  return inst;
}

PrecInstance generate_prec(std::uint64_t seed, Family family,
                           const GenParams& params) {
  if (!family_is_prec(family))
    throw argument_error("family generates unrelated instances");
  if (params.n < 1 || params.m < 1 || params.p_max < 1 || params.w_max < 1)
    throw argument_error("generator parameters must be positive");
  if (params.density < 0.0 || params.density > 1.0)
    throw argument_error("density must lie in [0, 1]");
  Rng rng(seed);
  PrecInstance inst;
  inst.n_jobs = params.n;
  inst.m = params.m;
  inst.sizes.resize(params.n);
  inst.weights.resize(params.n);
  for (auto& p : inst.sizes)
    p = family == Family::prec_unit ? 1 : rng.next_int(1, params.p_max);
  for (auto& w : inst.weights) w = rng.next_int(1, params.w_max);
  switch (family) {
    case Family::prec_chain:
      for (int j = 0; j + 1 < params.n; ++j) inst.prec.push_back({j, j + 1});
      break;
    case Family::prec_random_dag:
    case Family::prec_unit:
      for (int a = 0; a < params.n; ++a)
        for (int b = a + 1; b < params.n; ++b)
          if (rng.next_double() < params.density) inst.prec.push_back({a, b});
      break;
    default:
      throw argument_error("unhandled precedence family");
  }
  inst.validate();
  return inst;
}

Instance generate(std::uint64_t seed, Family family, const GenParams& params) {
  if (family_is_prec(family)) return generate_prec(seed, family, params);
  return generate_unrelated(seed, family, params);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

std::string to_json(const UnrelatedInstance& inst) {
  json j;
  j["kind"] = "unrelated";
  j["n_jobs"] = inst.n_jobs;
  j["n_machines"] = inst.n_machines;
  json edges = json::array();
  for (const auto& e : inst.edges) edges.push_back({e.job, e.machine, e.p});
  j["edges"] = std::move(edges);
  j["weights"] = inst.weights ? json(*inst.weights) : json(nullptr);
  j["q"] = inst.q ? json(*inst.q) : json(nullptr);
  return j.dump();
}

std::string to_json(const PrecInstance& inst) {
  json j;
  j["kind"] = "prec";
  j["n_jobs"] = inst.n_jobs;
  j["m"] = inst.m;
  j["sizes"] = inst.sizes;
  j["weights"] = inst.weights;
  json arcs = json::array();
  for (auto [a, b] : inst.prec) arcs.push_back({a, b});
  j["prec"] = std::move(arcs);
  return j.dump();
}

std::string to_json(const Instance& inst) {
  return std::visit([](const auto& x) { return to_json(x); }, inst);
}

std::string to_json(const Assignment& sol) {
  json j;
  j["assignment"] = sol.machine_of;
  return j.dump();
}

std::string to_json(const Schedule& sol) {
  json j;
  j["completion"] = sol.completion;
  return j.dump();
}

namespace {

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
}

const json& require_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end())
    throw parse_error(std::string("missing required field '") + name + "'");
  return *it;
}

template <typename T>
T field_as(const json& j, const char* name) {
  try {
    return require_field(j, name).get<T>();
  } catch (const json::exception& e) {
    throw parse_error(std::string("field '") + name + "': " + e.what());
  }
}

}  // namespace

Instance instance_from_json(const std::string& text) {
  json j = parse_text(text);
  std::string kind = field_as<std::string>(j, "kind");
  if (kind == "unrelated") {
    UnrelatedInstance inst;
    inst.n_jobs = field_as<int>(j, "n_jobs");
    inst.n_machines = field_as<int>(j, "n_machines");
    for (const auto& e : require_field(j, "edges")) {
      if (!e.is_array() || e.size() != 3)
        throw parse_error("field 'edges': entries must be [job, machine, p]");
      inst.edges.push_back(
          {e[0].get<int>(), e[1].get<int>(), e[2].get<long long>()});
    }
    if (j.contains("weights") && !j["weights"].is_null())
      inst.weights = j["weights"].get<std::vector<long long>>();
    if (j.contains("q") && !j["q"].is_null()) inst.q = j["q"].get<double>();
    inst.validate();
    return inst;
  }
  if (kind == "prec") {
    PrecInstance inst;
    inst.n_jobs = field_as<int>(j, "n_jobs");
    inst.m = field_as<int>(j, "m");
    inst.sizes = field_as<std::vector<long long>>(j, "sizes");
    if (j.contains("weights") && !j["weights"].is_null())
      inst.weights = j["weights"].get<std::vector<long long>>();
    else
      inst.weights.assign(inst.n_jobs, 1);
    if (j.contains("prec"))
      for (const auto& e : j["prec"]) {
        if (!e.is_array() || e.size() != 2)
          throw parse_error("field 'prec': entries must be [j, j2]");
        inst.prec.push_back({e[0].get<int>(), e[1].get<int>()});
      }
    inst.validate();
    return inst;
  }
  throw parse_error("field 'kind' must be \"unrelated\" or \"prec\"");
}

Solution solution_from_json(const std::string& text) {
  json j = parse_text(text);
  if (j.contains("assignment"))
    return Assignment{j["assignment"].get<std::vector<int>>()};
  if (j.contains("completion"))
    return Schedule{j["completion"].get<std::vector<long long>>()};
  throw parse_error("solution needs field 'assignment' or 'completion'");
}

}  // namespace schedkit::model
