#include "schedkit/unrelated.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>

#include "schedkit/matching.hpp"
#include "schedkit/mpc.hpp"

namespace schedkit::unrelated {

namespace {

std::atomic<long long> g_lq_flags{0};

}  // namespace

long long lq_audit_flags() { return g_lq_flags; }
void reset_lq_audit_flags() { g_lq_flags = 0; }

// ---------------------------------------------------------------------------
// Grid and elementary formulas
// ---------------------------------------------------------------------------

TauGrid TauGrid::up_to(double eps, double target) {
  if (!(eps > 0)) throw argument_error("TauGrid: eps must be positive");
  TauGrid g;
  g.eps = eps;
  g.tau = {0.0, 1.0};
  while (g.tau.back() < target * (1.0 - 1e-12))
    g.tau.push_back(g.tau.back() * (1.0 + eps));
  return g;
}

int TauGrid::first_at_least(double value) const {
  for (int d = 1; d <= D(); ++d)
    if (tau[d] >= value * (1.0 - 1e-12)) return d;
  throw argument_error("TauGrid: value beyond the grid");
}

double rho(double p, double C, double theta) {
  if (!(p >= 0) || !(p <= C))
    throw argument_error("rho: need 0 <= p <= C");
  if (!(theta > 0)) throw argument_error("rho: need theta > 0");
  return std::min(std::max(p + theta - C, 0.0), p);
}

double lq_cost_coeff(double q, double tau_d, double p) {
  return std::pow(tau_d, q) - std::pow(tau_d - p, q);
}

std::vector<double> fast_half_doubling(const std::vector<double>& y) {
  std::vector<double> out(y.size(), 0.0);
  double used = 0.0;
  for (size_t k = 0; k < y.size(); ++k) {
    out[k] = std::min(std::max(1.0 - used, 0.0), 2.0 * y[k]);
    used += out[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared machinery
// ---------------------------------------------------------------------------

namespace {

struct EdgeView {
  int job;
  int machine;
  double p;     // possibly rescaled
  int orig_id;  // index into the instance's edge list
};

struct GuessAttempt {
  bool ok = false;
  std::vector<double> y_edge;  // per EdgeView, fractional assignment
  std::vector<EdgeView> edges;
  long long rows = 0, nonzeros = 0, steps = 0;
};

// Smallest grid index whose attempt succeeds; the top index must succeed.
int search_guesses(int top, const std::function<bool(int)>& attempt,
                   int* tried) {
  std::vector<int> status(top + 1, -1);  // -1 unknown, 0 fail, 1 ok
  auto eval = [&](int k) {
    if (status[k] < 0) {
      status[k] = attempt(k) ? 1 : 0;
      ++*tried;
    }
    return status[k] == 1;
  };
  int lo = 0, hi = top;
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (eval(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  if (!eval(lo))
    throw internal_error("guess search: the top guess failed to solve");
  return lo;
}

std::vector<long long> min_p_per_job(const model::UnrelatedInstance& inst) {
  std::vector<long long> best(inst.n_jobs,
                              std::numeric_limits<long long>::max());
  for (const auto& e : inst.edges) best[e.job] = std::min(best[e.job], e.p);
  return best;
}

model::Assignment greedy_min_p(const model::UnrelatedInstance& inst) {
  std::vector<long long> best(inst.n_jobs,
                              std::numeric_limits<long long>::max());
  model::Assignment a;
  a.machine_of.assign(inst.n_jobs, -1);
  for (const auto& e : inst.edges)
    if (e.p < best[e.job]) {
      best[e.job] = e.p;
      a.machine_of[e.job] = e.machine;
    }
  return a;
}

// Rescale so that every job's fractional mass is exactly 1, and audit the
// packing rows against the post-rescale envelope.
void rescale_per_job(int n_jobs, std::vector<EdgeView>& edges,
                     std::vector<double>& x) {
  std::vector<double> mass(n_jobs, 0.0);
  for (size_t k = 0; k < edges.size(); ++k) mass[edges[k].job] += x[k];
  for (size_t k = 0; k < edges.size(); ++k) {
    if (mass[edges[k].job] <= kFeasTol)
      throw internal_error("rescale: job with zero fractional mass");
    x[k] /= mass[edges[k].job];
  }
}

// round_by_grouping over a job subset: compact the live jobs, round, expand.
std::vector<int> round_live(int n_jobs, int n_machines,
                            const std::vector<EdgeView>& edges,
                            const std::vector<double>& p,
                            const std::vector<double>& x, double eps,
                            const std::vector<char>& live) {
  std::vector<int> compact(n_jobs, -1);
  int nl = 0;
  for (int j = 0; j < n_jobs; ++j)
    if (live[j]) compact[j] = nl++;
  std::vector<std::pair<int, int>> je;
  je.reserve(edges.size());
  for (const auto& e : edges) je.push_back({compact[e.job], e.machine});
  auto sigma = matching::round_by_grouping(nl, n_machines, je, p, x, eps);
  std::vector<int> out(n_jobs, -1);
  for (int j = 0; j < n_jobs; ++j)
    if (live[j]) out[j] = sigma[compact[j]];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Makespan
// ---------------------------------------------------------------------------

SolveResult solve_makespan(const model::UnrelatedInstance& inst, double eps) {
  if (!(eps > 0 && eps < 1))
    throw argument_error("solve_makespan: eps must lie in (0, 1)");
  inst.validate();
  SolveResult result;
  if (inst.n_jobs == 0) {
    result.value = 0;
    return result;
  }

  auto greedy = greedy_min_p(inst);
  double greedy_val =
      model::evaluate(inst, greedy, model::Objective::makespan).value;
  // greedy is an m-approximation, so opt lies in [greedy/m, greedy].
  double lo = greedy_val / inst.n_machines;
  std::vector<double> guesses{lo};
  while (guesses.back() < greedy_val * (1.0 - 1e-12))
    guesses.push_back(guesses.back() * (1.0 + eps));

  GuessAttempt best;
  auto attempt = [&](int k) {
    double P = guesses[k];
    GuessAttempt at;
    for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
      const auto& ed = inst.edges[e];
      if (static_cast<double>(ed.p) <= P * (1.0 + 1e-12))
        at.edges.push_back({ed.job, ed.machine,
                            static_cast<double>(ed.p), e});
    }
    std::vector<int> degree(inst.n_jobs, 0);
    for (const auto& e : at.edges) ++degree[e.job];
    for (int j = 0; j < inst.n_jobs; ++j)
      if (degree[j] == 0) return false;  // some job cannot meet this guess

    mpc::MpcProblem lp;
    lp.n_vars = static_cast<int>(at.edges.size());
    lp.packing.rows.resize(inst.n_machines);
    lp.covering.rows.resize(inst.n_jobs);
    for (int k2 = 0; k2 < lp.n_vars; ++k2) {
      lp.packing.rows[at.edges[k2].machine].push_back({k2, at.edges[k2].p / P});
      lp.covering.rows[at.edges[k2].job].push_back({k2, 1.0});
    }
    lp.packing.rows.erase(
        std::remove_if(lp.packing.rows.begin(), lp.packing.rows.end(),
                       [](const auto& r) { return r.empty(); }),
        lp.packing.rows.end());
    at.rows = lp.n_rows();
    at.nonzeros = lp.nonzeros();
    auto sol = mpc::solve_mpc(lp, eps);
    at.steps = sol.steps;
    if (sol.status != mpc::MpcStatus::solved) return false;
    at.y_edge = std::move(sol.x);
    rescale_per_job(inst.n_jobs, at.edges, at.y_edge);
    at.ok = true;
    best = std::move(at);
    return true;
  };

  int k = search_guesses(static_cast<int>(guesses.size()) - 1, attempt,
                         &result.stats.guesses_tried);
  if (!attempt(k))  // refresh `best` for the accepted guess
    throw internal_error("solve_makespan: accepted guess stopped solving");
  result.guess = guesses[k];
  result.stats.rows = best.rows;
  result.stats.nonzeros = best.nonzeros;
  result.stats.mpc_steps = best.steps;

  std::vector<std::pair<int, int>> je;
  std::vector<double> p;
  for (const auto& e : best.edges) {
    je.push_back({e.job, e.machine});
    p.push_back(e.p);
  }
  result.assignment.machine_of = matching::round_by_grouping(
      inst.n_jobs, inst.n_machines, je, p, best.y_edge, eps);
  result.value =
      model::evaluate(inst, result.assignment, model::Objective::makespan)
          .value;
  return result;
}

// ---------------------------------------------------------------------------
// Weighted completion time
// ---------------------------------------------------------------------------

namespace {

// Time-indexed variables (edge, d) with tau_d >= p.
struct TimeIndexed {
  TauGrid grid;
  std::vector<std::pair<int, int>> vars;  // (edge index, d)
  std::vector<double> x;
};

// Smith order of edge ids on one machine: nondecreasing p/w, ties by job.
std::vector<int> smith_order(const std::vector<EdgeView>& edges,
                             const std::vector<int>& machine_edges,
                             const std::vector<long long>& w) {
  std::vector<int> order = machine_edges;
  std::sort(order.begin(), order.end(), [&](int e1, int e2) {
    double l = edges[e1].p * static_cast<double>(w[edges[e2].job]);
    double r = edges[e2].p * static_cast<double>(w[edges[e1].job]);
    if (l != r) return l < r;
    return edges[e1].job < edges[e2].job;
  });
  return order;
}

struct Fenwick {
  std::vector<double> tree;
  explicit Fenwick(int n) : tree(n + 1, 0.0) {}
  void add(int i, double v) {
    for (++i; i < static_cast<int>(tree.size()); i += i & -i) tree[i] += v;
  }
  double prefix(int i) const {  // sum of [0, i)
    double s = 0;
    for (; i > 0; i -= i & -i) s += tree[i];
    return s;
  }
  double total() const { return prefix(static_cast<int>(tree.size()) - 1); }
};

// Expected Smith-rule cost of independent rounding by y, fixed job by job to
// the machine minimizing the conditional expectation.
model::Assignment derandomize_wc(const model::UnrelatedInstance& inst,
                                 const std::vector<EdgeView>& edges,
                                 std::vector<double> y) {
  const auto& w = *inst.weights;
  std::vector<std::vector<int>> on_machine(inst.n_machines);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    on_machine[edges[e].machine].push_back(e);

  // Per machine: Smith position of each edge, plus two prefix-sum trees over
  // y*p (for predecessors) and y*w (for successors).
  std::vector<std::vector<int>> order(inst.n_machines);
  std::vector<int> pos(edges.size(), -1);
  std::vector<Fenwick> tree_p, tree_w;
  tree_p.reserve(inst.n_machines);
  tree_w.reserve(inst.n_machines);
  for (int i = 0; i < inst.n_machines; ++i) {
    order[i] = smith_order(edges, on_machine[i], w);
    for (int k = 0; k < static_cast<int>(order[i].size()); ++k)
      pos[order[i][k]] = k;
    tree_p.emplace_back(static_cast<int>(order[i].size()));
    tree_w.emplace_back(static_cast<int>(order[i].size()));
    for (int k = 0; k < static_cast<int>(order[i].size()); ++k) {
      int e = order[i][k];
      tree_p[i].add(k, y[e] * edges[e].p);
      tree_w[i].add(k, y[e] * w[edges[e].job]);
    }
  }

  // contrib(e): marginal cost of assigning edge e's job to its machine.
  // prefix/suffix queries exclude the job's own slot at pos[e].
  auto contrib = [&](int e) {
    int i = edges[e].machine, j = edges[e].job;
    double before = tree_p[i].prefix(pos[e]);
    double after = tree_w[i].total() - tree_w[i].prefix(pos[e] + 1);
    return w[j] * before + edges[e].p * after + edges[e].p * w[j];
  };

  std::vector<std::vector<int>> of_job(inst.n_jobs);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    of_job[edges[e].job].push_back(e);

  model::Assignment a;
  a.machine_of.assign(inst.n_jobs, -1);
  for (int j = 0; j < inst.n_jobs; ++j) {
    double expected = 0;
    int best_e = -1;
    double best_v = std::numeric_limits<double>::max();
    for (int e : of_job[j]) {
      double c = contrib(e);
      expected += y[e] * c;
      if (c < best_v) {
        best_v = c;
        best_e = e;
      }
    }
    if (best_e < 0)
      throw internal_error("derandomize: job with no candidate edge");
    if (best_v > expected + 1e-6 * (1.0 + std::abs(expected)))
      throw audit_error("derandomize: conditional expectation increased");
    a.machine_of[j] = edges[best_e].machine;
    for (int e : of_job[j]) {
      double target = e == best_e ? 1.0 : 0.0;
      int i = edges[e].machine;
      tree_p[i].add(pos[e], (target - y[e]) * edges[e].p);
      tree_w[i].add(pos[e], (target - y[e]) * w[edges[e].job]);
      y[e] = target;
    }
  }
  return a;
}

}  // namespace

SolveResult solve_weighted_completion(const model::UnrelatedInstance& inst,
                                      double eps, const WcOptions& options) {
  if (!(eps > 0 && eps < 1))
    throw argument_error("solve_weighted_completion: eps must lie in (0, 1)");
  inst.validate();
  if (!inst.weights)
    throw argument_error("solve_weighted_completion: weights required");
  const auto& w = *inst.weights;
  SolveResult result;
  if (inst.n_jobs == 0) return result;

  auto greedy = greedy_min_p(inst);
  double greedy_val =
      model::evaluate(inst, greedy, model::Objective::weighted_completion)
          .value;
  if (greedy_val <= 0) {  // all weights zero is excluded by validation
    result.assignment = greedy;
    return result;
  }
  // Greedy is an (n+1)/2-approximation for this objective.
  double lo = 2.0 * greedy_val / (inst.n_jobs + 1);
  std::vector<double> guesses{lo};
  while (guesses.back() < greedy_val * (1.0 - 1e-12))
    guesses.push_back(guesses.back() * (1.0 + eps));

  long long max_p = 1;
  for (const auto& e : inst.edges) max_p = std::max(max_p, e.p);

  GuessAttempt best;
  auto attempt = [&](int k) {
    double phi = guesses[k];
    GuessAttempt at;
    for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
      const auto& ed = inst.edges[e];
      if (static_cast<double>(ed.p) * w[ed.job] <= phi * (1.0 + 1e-12))
        at.edges.push_back({ed.job, ed.machine, static_cast<double>(ed.p), e});
    }
    std::vector<int> degree(inst.n_jobs, 0);
    for (const auto& e : at.edges) ++degree[e.job];
    for (int j = 0; j < inst.n_jobs; ++j)
      if (degree[j] == 0) return false;

    TauGrid grid = TauGrid::up_to(
        eps, static_cast<double>(inst.n_jobs) * static_cast<double>(max_p));
    const int D = grid.D();
    std::vector<std::pair<int, int>> vars;  // (edge, d)
    for (int e = 0; e < static_cast<int>(at.edges.size()); ++e)
      for (int d = grid.first_at_least(at.edges[e].p); d <= D; ++d)
        vars.push_back({e, d});

    const double volume_scale = options.thin_constraints ? 1.0 - eps : 1.0;
    mpc::MpcProblem lp;
    lp.n_vars = static_cast<int>(vars.size());
    // Objective row: sum w_j tau_d x / ((1+eps) phi) <= 1.
    lp.packing.rows.emplace_back();
    auto& obj_row = lp.packing.rows[0];
    for (int v = 0; v < lp.n_vars; ++v) {
      auto [e, d] = vars[v];
      obj_row.push_back(
          {v, w[at.edges[e].job] * grid.tau[d] / ((1.0 + eps) * phi)});
    }
    // Volume rows per (machine, r): jobs finishing at tau_d occupy
    // rho(p, tau_d, tau_r) of the machine before tau_r.
    std::vector<std::vector<std::pair<int, double>>> vol_rows(
        static_cast<size_t>(inst.n_machines) * (D + 1));
    for (int v = 0; v < lp.n_vars; ++v) {
      auto [e, d] = vars[v];
      const auto& ev = at.edges[e];
      for (int r = 1; r <= D; ++r) {
        if (options.thin_constraints &&
            grid.tau[d] < (eps / inst.n_jobs) * grid.tau[r])
          continue;
        double coeff = rho(volume_scale * ev.p, grid.tau[d], grid.tau[r]);
        if (coeff <= 0) continue;
        vol_rows[static_cast<size_t>(ev.machine) * (D + 1) + r].push_back(
            {v, coeff / grid.tau[r]});
      }
    }
    for (auto& row : vol_rows)
      if (!row.empty()) lp.packing.rows.push_back(std::move(row));
    lp.covering.rows.resize(inst.n_jobs);
    for (int v = 0; v < lp.n_vars; ++v)
      lp.covering.rows[at.edges[vars[v].first].job].push_back({v, 1.0});

    at.rows = lp.n_rows();
    at.nonzeros = lp.nonzeros();
    auto sol = mpc::solve_mpc(lp, eps);
    at.steps = sol.steps;
    if (sol.status != mpc::MpcStatus::solved) return false;

    // Fold the time dimension and rescale each job's mass to exactly 1.
    std::vector<double> mass(inst.n_jobs, 0.0);
    at.y_edge.assign(at.edges.size(), 0.0);
    for (int v = 0; v < lp.n_vars; ++v) {
      at.y_edge[vars[v].first] += sol.x[v];
      mass[at.edges[vars[v].first].job] += sol.x[v];
    }
    // Validity audit straight from x before rescaling.
    for (size_t rix = 1; rix < lp.packing.rows.size(); ++rix) {
      double lhs = 0;
      for (auto [c, coeff] : lp.packing.rows[rix]) lhs += coeff * sol.x[c];
      if (lhs > (1.0 + eps) + 1e-9)
        throw audit_error("wc volume row exceeded the solver envelope");
    }
    for (int j = 0; j < inst.n_jobs; ++j)
      if (mass[j] < 1.0 / (1.0 + eps) - 1e-9)
        throw audit_error("wc covering row below the solver envelope");
    for (size_t e = 0; e < at.edges.size(); ++e) {
      double m = mass[at.edges[e].job];
      if (m <= kFeasTol) return false;
      at.y_edge[e] /= m;
    }
    at.ok = true;
    best = std::move(at);
    return true;
  };

  int k = search_guesses(static_cast<int>(guesses.size()) - 1, attempt,
                         &result.stats.guesses_tried);
  if (!attempt(k))
    throw internal_error("solve_weighted_completion: accepted guess stopped");
  result.guess = guesses[k];
  result.stats.rows = best.rows;
  result.stats.nonzeros = best.nonzeros;
  result.stats.mpc_steps = best.steps;

  if (options.deterministic) {
    result.assignment = derandomize_wc(inst, best.edges, best.y_edge);
  } else {
    Rng rng(options.seed);
    std::vector<std::vector<int>> of_job(inst.n_jobs);
    for (int e = 0; e < static_cast<int>(best.edges.size()); ++e)
      of_job[best.edges[e].job].push_back(e);
    result.assignment.machine_of.assign(inst.n_jobs, -1);
    for (int j = 0; j < inst.n_jobs; ++j) {
      double r = rng.next_double(), acc = 0;
      int pick = of_job[j].back();
      for (int e : of_job[j]) {
        acc += best.y_edge[e];
        if (r < acc) {
          pick = e;
          break;
        }
      }
      result.assignment.machine_of[j] = best.edges[pick].machine;
    }
  }
  result.value = model::evaluate(inst, result.assignment,
                                 model::Objective::weighted_completion)
                     .value;
  return result;
}

// ---------------------------------------------------------------------------
// L_q norm of loads
// ---------------------------------------------------------------------------

namespace {

// Derandomized independent rounding for q = 2: fix each job to the machine
// minimizing E[sum_i load_i^2] given the remaining fractional masses.
model::Assignment derandomize_l2(int n_jobs, int n_machines,
                                 const std::vector<EdgeView>& edges,
                                 std::vector<double> y) {
  std::vector<double> load(n_machines, 0.0);
  for (size_t e = 0; e < edges.size(); ++e)
    load[edges[e].machine] += y[e] * edges[e].p;
  std::vector<std::vector<int>> of_job(n_jobs);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    of_job[edges[e].job].push_back(e);
  model::Assignment a;
  a.machine_of.assign(n_jobs, -1);
  for (int j = 0; j < n_jobs; ++j) {
    double expected = 0;
    int best_e = -1;
    double best_v = std::numeric_limits<double>::max();
    for (int e : of_job[j]) {
      double rest = load[edges[e].machine] - y[e] * edges[e].p;
      double c = 2.0 * edges[e].p * rest + edges[e].p * edges[e].p;
      expected += y[e] * c;
      if (c < best_v) {
        best_v = c;
        best_e = e;
      }
    }
    if (best_v > expected + 1e-6 * (1.0 + std::abs(expected)))
      throw audit_error("derandomize_l2: conditional expectation increased");
    a.machine_of[j] = edges[best_e].machine;
    for (int e : of_job[j]) {
      load[edges[e].machine] -= y[e] * edges[e].p;
      y[e] = e == best_e ? 1.0 : 0.0;
      load[edges[e].machine] += y[e] * edges[e].p;
    }
  }
  return a;
}

}  // namespace

SolveResult solve_lq(const model::UnrelatedInstance& inst, double q,
                     double eps, std::uint64_t seed) {
  (void)seed;  // all rounding branches are deterministic
  if (!(eps > 0 && eps < 1))
    throw argument_error("solve_lq: eps must lie in (0, 1)");
  if (!(q > 1.0))
    throw argument_error("solve_lq: q must exceed 1 (q = 1 is greedy min-p)");
  inst.validate();
  SolveResult result;
  if (inst.n_jobs == 0) return result;

  // Size preprocessing: P' bounds the optimum from below, n P' from above.
  auto minp = min_p_per_job(inst);
  long long p_prime = *std::max_element(minp.begin(), minp.end());
  const double scale = inst.n_jobs / (eps * static_cast<double>(p_prime));

  std::vector<int> pre_assigned(inst.n_jobs, -1);
  std::vector<EdgeView> live;
  for (int j = 0; j < inst.n_jobs; ++j)
    if (static_cast<double>(minp[j]) < eps * p_prime / inst.n_jobs)
      pre_assigned[j] = -2;  // tiny everywhere it matters; assign greedily
  for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
    const auto& ed = inst.edges[e];
    if (pre_assigned[ed.job] == -2) continue;
    if (static_cast<double>(ed.p) >
        static_cast<double>(inst.n_jobs) * p_prime * (1.0 + 1e-12))
      continue;  // longer than n P': never used by the optimum
    live.push_back({ed.job, ed.machine, ed.p * scale, e});
  }
  for (int j = 0; j < inst.n_jobs; ++j)
    if (pre_assigned[j] == -2) {
      long long bp = std::numeric_limits<long long>::max();
      for (const auto& ed : inst.edges)
        if (ed.job == j && ed.p < bp) {
          bp = ed.p;
          pre_assigned[j] = ed.machine;
        }
    }

  std::vector<char> is_live_job(inst.n_jobs, 0);
  for (const auto& e : live) is_live_job[e.job] = 1;
  int n_live = 0;
  for (int j = 0; j < inst.n_jobs; ++j) n_live += is_live_job[j];

  if (n_live == 0) {
    result.assignment.machine_of = pre_assigned;
    result.value =
        model::evaluate(inst, result.assignment, model::Objective::lq_norm, q)
            .value;
    return result;
  }

  // Guess grid over the scaled sizes.
  double p_prime_s = 0;
  {
    std::vector<double> best(inst.n_jobs,
                             std::numeric_limits<double>::max());
    for (const auto& e : live) best[e.job] = std::min(best[e.job], e.p);
    for (int j = 0; j < inst.n_jobs; ++j)
      if (is_live_job[j]) p_prime_s = std::max(p_prime_s, best[j]);
  }
  std::vector<double> guesses{p_prime_s};
  double top = p_prime_s * n_live;
  while (guesses.back() < top * (1.0 - 1e-12))
    guesses.push_back(guesses.back() * (1.0 + eps));

  bool restricted = true;
  {
    std::vector<long long> pj(inst.n_jobs, -1);
    for (const auto& e : inst.edges) {
      if (pj[e.job] < 0) pj[e.job] = e.p;
      if (pj[e.job] != e.p) restricted = false;
    }
  }

  GuessAttempt best;
  auto attempt = [&](int k) {
    double P = guesses[k];
    const double phi = std::pow(P, q);
    GuessAttempt at;
    for (const auto& e : live)
      if (e.p <= P * (1.0 + 1e-12)) at.edges.push_back(e);
    std::vector<int> degree(inst.n_jobs, 0);
    for (const auto& e : at.edges) ++degree[e.job];
    for (int j = 0; j < inst.n_jobs; ++j)
      if (is_live_job[j] && degree[j] == 0) return false;

    TauGrid grid = TauGrid::up_to(eps, P);
    const int D = grid.D();
    std::vector<std::pair<int, int>> vars;
    for (int e = 0; e < static_cast<int>(at.edges.size()); ++e)
      for (int d = grid.first_at_least(at.edges[e].p); d <= D; ++d)
        vars.push_back({e, d});

    mpc::MpcProblem lp;
    lp.n_vars = static_cast<int>(vars.size());
    lp.packing.rows.emplace_back();
    for (int v = 0; v < lp.n_vars; ++v) {
      auto [e, d] = vars[v];
      double c = lq_cost_coeff(q, grid.tau[d], at.edges[e].p);
      lp.packing.rows[0].push_back(
          {v, c / (std::pow(1.0 + eps, q) * phi)});
    }
    std::vector<std::vector<std::pair<int, double>>> vol_rows(
        static_cast<size_t>(inst.n_machines) * (D + 1));
    for (int v = 0; v < lp.n_vars; ++v) {
      auto [e, d] = vars[v];
      const auto& ev = at.edges[e];
      for (int r = 1; r <= D; ++r) {
        double coeff = rho(ev.p, grid.tau[d], grid.tau[r]);
        if (coeff <= 0) continue;
        vol_rows[static_cast<size_t>(ev.machine) * (D + 1) + r].push_back(
            {v, coeff / grid.tau[r]});
      }
    }
    for (auto& row : vol_rows)
      if (!row.empty()) lp.packing.rows.push_back(std::move(row));
    for (int j = 0; j < inst.n_jobs; ++j)
      if (is_live_job[j]) lp.covering.rows.emplace_back();
    std::vector<int> cover_row(inst.n_jobs, -1);
    {
      int r = 0;
      for (int j = 0; j < inst.n_jobs; ++j)
        if (is_live_job[j]) cover_row[j] = r++;
    }
    for (int v = 0; v < lp.n_vars; ++v)
      lp.covering.rows[cover_row[at.edges[vars[v].first].job]].push_back(
          {v, 1.0});

    at.rows = lp.n_rows();
    at.nonzeros = lp.nonzeros();
    auto sol = mpc::solve_mpc(lp, eps);
    at.steps = sol.steps;
    if (sol.status != mpc::MpcStatus::solved) return false;

    std::vector<double> mass(inst.n_jobs, 0.0);
    at.y_edge.assign(at.edges.size(), 0.0);
    for (int v = 0; v < lp.n_vars; ++v) {
      at.y_edge[vars[v].first] += sol.x[v];
      mass[at.edges[vars[v].first].job] += sol.x[v];
    }
    // Validity audit straight from x: volume rows within the solver
    // envelope, job masses within the covering slack.
    for (size_t rix = 1; rix < lp.packing.rows.size(); ++rix) {
      double lhs = 0;
      for (auto [c, coeff] : lp.packing.rows[rix]) lhs += coeff * sol.x[c];
      if (lhs > (1.0 + eps) + 1e-9)
        throw audit_error("lq volume row exceeded the solver envelope");
    }
    for (int j = 0; j < inst.n_jobs; ++j)
      if (is_live_job[j] && mass[j] < 1.0 / (1.0 + eps) - 1e-9)
        throw audit_error("lq covering row below the solver envelope");
    for (size_t e = 0; e < at.edges.size(); ++e) {
      double m = mass[at.edges[e].job];
      if (m <= kFeasTol) return false;
      at.y_edge[e] /= m;
    }

    // Fractional-load audit: both envelope quantities stay within a
    // generous (1+eps)^{8q} of the budget; excesses are flagged, not fatal.
    double sum_pq = 0;
    std::vector<double> g_load(inst.n_machines, 0.0);
    for (size_t e = 0; e < at.edges.size(); ++e) {
      sum_pq += std::pow(at.edges[e].p, q) * at.y_edge[e];
      g_load[at.edges[e].machine] += at.edges[e].p * at.y_edge[e];
    }
    double sum_gq = 0;
    for (double g : g_load) sum_gq += std::pow(g, q);
    double envelope = std::pow(1.0 + eps, 8.0 * q) * phi;
    if (sum_pq > envelope * (1 + 1e-9) || sum_gq > envelope * (1 + 1e-9)) {
      ++g_lq_flags;
      std::cerr << "solve_lq: fractional-load audit exceeded its envelope "
                   "(flagged)\n";
    }
    at.ok = true;
    best = std::move(at);
    return true;
  };

  int k = search_guesses(static_cast<int>(guesses.size()) - 1, attempt,
                         &result.stats.guesses_tried);
  if (!attempt(k))
    throw internal_error("solve_lq: accepted guess stopped solving");
  result.guess = guesses[k] / scale;
  result.stats.rows = best.rows;
  result.stats.nonzeros = best.nonzeros;
  result.stats.mpc_steps = best.steps;

  std::vector<int> live_assignment(inst.n_jobs, -1);
  if (std::abs(q - 2.0) < 1e-12) {
    auto a = derandomize_l2(inst.n_jobs, inst.n_machines, best.edges,
                            best.y_edge);
    live_assignment = a.machine_of;
  } else if (restricted) {
    std::vector<double> p;
    for (const auto& e : best.edges) p.push_back(e.p);
    live_assignment = round_live(inst.n_jobs, inst.n_machines, best.edges, p,
                                 best.y_edge, eps, is_live_job);
  } else {
    // Fast-half doubling per job, then grouping on the doubled masses.
    std::vector<std::vector<int>> of_job(inst.n_jobs);
    for (int e = 0; e < static_cast<int>(best.edges.size()); ++e)
      of_job[best.edges[e].job].push_back(e);
    std::vector<double> y2(best.edges.size(), 0.0);
    for (int j = 0; j < inst.n_jobs; ++j) {
      if (of_job[j].empty()) continue;
      auto& es = of_job[j];
      std::sort(es.begin(), es.end(), [&](int a, int b) {
        if (best.edges[a].p != best.edges[b].p)
          return best.edges[a].p < best.edges[b].p;
        return best.edges[a].machine < best.edges[b].machine;
      });
      std::vector<double> y_sorted;
      for (int e : es) y_sorted.push_back(best.y_edge[e]);
      auto doubled = fast_half_doubling(y_sorted);
      for (size_t t = 0; t < es.size(); ++t) y2[es[t]] = doubled[t];
    }
    std::vector<double> p;
    for (const auto& e : best.edges) p.push_back(e.p);
    live_assignment = round_live(inst.n_jobs, inst.n_machines, best.edges, p,
                                 y2, eps, is_live_job);
  }

  result.assignment.machine_of.assign(inst.n_jobs, -1);
  for (int j = 0; j < inst.n_jobs; ++j)
    result.assignment.machine_of[j] =
        is_live_job[j] ? live_assignment[j] : pre_assigned[j];
  result.value =
      model::evaluate(inst, result.assignment, model::Objective::lq_norm, q)
          .value;
  return result;
}

}  // namespace schedkit::unrelated
