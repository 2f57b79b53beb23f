#include "schedkit/prec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "schedkit/flow.hpp"
#include "schedkit/schedule_tree.hpp"

namespace schedkit::prec {

using model::PrecInstance;
using model::Schedule;

std::vector<long long> chain_bounds(const PrecInstance& inst) {
  std::vector<std::vector<int>> preds(inst.n_jobs);
  for (auto [a, b] : inst.prec) preds[b].push_back(a);
  std::vector<long long> q(inst.n_jobs, 0);
  for (int j : inst.topo_order()) {
    long long best = 0;
    for (int p : preds[j]) best = std::max(best, q[p]);
    q[j] = best + inst.sizes[j];
  }
  return q;
}

// ---------------------------------------------------------------------------
// LP construction
// ---------------------------------------------------------------------------

PrecLp build_prec_lp(const PrecInstance& inst, double eps) {
  inst.validate();
  if (inst.total_size() > (1LL << 40))
    throw size_error(
        "build_prec_lp: total size beyond 2^40 is not supported; the grid "
        "would not stay polynomially bounded");
  PrecLp lp;
  lp.q = chain_bounds(inst);
  lp.grid = unrelated::TauGrid::up_to(
      eps, static_cast<double>(std::max<long long>(inst.total_size(), 1)));
  const int D = lp.grid.D();

  lp.var_of_job.assign(inst.n_jobs, std::vector<int>(D + 1, -1));
  for (int j = 0; j < inst.n_jobs; ++j) {
    // x_{j,d} fixed to 0 while tau_d < q_j and to 1 at d = D.
    for (int d = 1; d <= D - 1; ++d) {
      if (lp.grid.tau[d] < static_cast<double>(lp.q[j]) * (1.0 - 1e-12))
        continue;
      lp.var_of_job[j][d] = static_cast<int>(lp.vars.size());
      lp.vars.push_back({j, d});
    }
  }
  for (int j = 0; j < inst.n_jobs; ++j)
    for (int d = 1; d + 1 <= D - 1; ++d)
      if (lp.var_of_job[j][d] >= 0 && lp.var_of_job[j][d + 1] >= 0)
        lp.monotone_edges.push_back(
            {lp.var_of_job[j][d], lp.var_of_job[j][d + 1]});
  for (auto [a, b] : inst.prec)
    for (int d = 1; d <= D - 1; ++d)
      if (lp.var_of_job[b][d] >= 0) {
        // q_a <= q_b - p_b < tau_d, so a's variable exists as well.
        if (lp.var_of_job[a][d] < 0)
          throw internal_error("build_prec_lp: missing predecessor variable");
        lp.monotone_edges.push_back(
            {lp.var_of_job[b][d], lp.var_of_job[a][d]});
      }

  // One capacity row per time index: sum_j p_j x_{j,d} <= m tau_d.
  lp.capacity.n_cols = static_cast<int>(lp.vars.size());
  std::vector<std::vector<std::pair<int, double>>> rows(D + 1);
  for (int v = 0; v < static_cast<int>(lp.vars.size()); ++v) {
    auto [j, d] = lp.vars[v];
    rows[d].push_back({v, static_cast<double>(inst.sizes[j]) /
                              (inst.m * lp.grid.tau[d])});
  }
  for (auto& row : rows)
    if (!row.empty()) lp.capacity.rows.push_back(std::move(row));

  lp.objective.assign(lp.vars.size(), 0.0);
  for (int v = 0; v < static_cast<int>(lp.vars.size()); ++v) {
    auto [j, d] = lp.vars[v];
    lp.objective[v] = static_cast<double>(inst.weights[j]) * lp.grid.eta(d);
  }
  double w_total = static_cast<double>(
      std::accumulate(inst.weights.begin(), inst.weights.end(), 0LL));
  lp.phi = eps * w_total;
  return lp;
}

// ---------------------------------------------------------------------------
// LP solve
// ---------------------------------------------------------------------------

namespace {

std::vector<double> completions_from(const PrecInstance& inst,
                                     const PrecLp& lp,
                                     const std::vector<double>& x) {
  const int D = lp.grid.D();
  std::vector<double> c(inst.n_jobs, 0.0);
  for (int j = 0; j < inst.n_jobs; ++j) {
    double acc = lp.grid.tau[D];
    for (int d = 1; d <= D - 1; ++d)
      if (lp.var_of_job[j][d] >= 0)
        acc -= lp.grid.eta(d) * x[lp.var_of_job[j][d]];
    c[j] = acc;
  }
  return c;
}

void audit_fractional(const PrecInstance& inst, const PrecLp& lp,
                      const std::vector<double>& c, double eps) {
  for (int j = 0; j < inst.n_jobs; ++j)
    if (c[j] < static_cast<double>(lp.q[j]) * (1.0 - 1e-9) - 1e-9)
      throw audit_error("prec LP: completion below the chain bound");
  for (auto [a, b] : inst.prec)
    if (c[a] > c[b] + 1e-9)
      throw audit_error("prec LP: completions violate precedence order");
  // Prefix-volume bound with generous slack: at most (2+5eps) m C of work
  // can fractionally complete by C.
  std::vector<int> order(inst.n_jobs);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x1, int x2) { return c[x1] < c[x2]; });
  double prefix = 0;
  for (int j : order) {
    prefix += static_cast<double>(inst.sizes[j]);
    if (prefix > (2.0 + 5.0 * eps) * inst.m * c[j] + 1e-6)
      throw audit_error("prec LP: prefix-volume bound violated");
  }
}

}  // namespace

PrecLpSolution solve_prec_lp(const PrecInstance& inst, double eps) {
  if (!(eps > 0 && eps < 1))
    throw argument_error("solve_prec_lp: eps must lie in (0, 1)");
  PrecLpSolution sol;
  sol.lp = build_prec_lp(inst, eps);
  const PrecLp& lp = sol.lp;
  sol.x.assign(lp.vars.size(), 0.0);
  if (inst.n_jobs == 0) return sol;

  if (lp.phi <= 0.0) {
    // All weights are zero: every point of the polytope scores the same;
    // x = 0 is feasible and the completions collapse to tau_D.
    sol.completion = completions_from(inst, lp, sol.x);
    audit_fractional(inst, lp, sol.completion, eps);
    return sol;
  }

  mwu::PackingProblem problem;
  problem.n_vars = static_cast<int>(lp.vars.size());
  problem.P = lp.capacity;
  problem.a = lp.objective;
  flow::RawFlowGraph oracle_graph;
  oracle_graph.n = problem.n_vars;
  oracle_graph.edges = lp.monotone_edges;
  oracle_graph.a = lp.objective;
  oracle_graph.b.assign(problem.n_vars, 0.0);
  const double a_norm =
      std::accumulate(lp.objective.begin(), lp.objective.end(), 0.0);
  problem.oracle = [&oracle_graph, a_norm](const std::vector<double>& b,
                                           double e, double phi) {
    // The flow oracle meets b.y <= (1+e')^2; pass e' with (1+e')^2 = 1+e so
    // the aggregated constraint is met at the advertised slack. Shrinking
    // phi only strengthens the additive guarantee, so clamp it into the
    // oracle's admissible range on tiny instances.
    double e_inner = std::sqrt(1.0 + e) - 1.0;
    double phi_eff = std::min(phi, 0.499 * a_norm);
    flow::RawFlowGraph g = oracle_graph;
    g.b = b;
    return flow::aggregate_oracle(g, e_inner, phi_eff);
  };

  sol.x = mwu::solve_packing(problem, eps, lp.phi, {}, &sol.stats);
  sol.completion = completions_from(inst, lp, sol.x);
  audit_fractional(inst, lp, sol.completion, eps);
  return sol;
}

// ---------------------------------------------------------------------------
// List scheduling
// ---------------------------------------------------------------------------

Schedule list_scheduling(const PrecInstance& inst,
                         const std::vector<double>& priority) {
  inst.validate();
  if (static_cast<int>(priority.size()) != inst.n_jobs)
    throw argument_error("list_scheduling: priority vector sized wrongly");
  for (auto [a, b] : inst.prec)
    if (priority[a] > priority[b] + 1e-12)
      throw argument_error(
          "list_scheduling: priorities must respect precedence");
  Schedule out;
  out.completion.assign(inst.n_jobs, 0);
  if (inst.n_jobs == 0) return out;

  std::vector<int> rank(inst.n_jobs);
  {
    auto topo = inst.topo_order();
    for (int k = 0; k < inst.n_jobs; ++k) rank[topo[k]] = k;
  }
  std::vector<int> order(inst.n_jobs);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (priority[x] != priority[y]) return priority[x] < priority[y];
    if (rank[x] != rank[y]) return rank[x] < rank[y];
    return x < y;
  });

  std::vector<std::vector<int>> preds(inst.n_jobs);
  for (auto [a, b] : inst.prec) preds[b].push_back(a);

  long long max_p = *std::max_element(inst.sizes.begin(), inst.sizes.end());
  IdleIntervals idle(inst.total_size() + max_p + 2);
  CriticalCounters counters(inst.m);
  for (int j : order) {
    long long t = 0;
    for (int p : preds[j]) t = std::max(t, out.completion[p]);
    long long start = idle.find(t, inst.sizes[j]);
    out.completion[j] = start + inst.sizes[j];
    counters.insert(out.completion[j]);
    for (auto [from, to] : counters.increase(start, out.completion[j]))
      idle.remove(from, to);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rounding
// ---------------------------------------------------------------------------

namespace {

Schedule schedule_single_machine(const PrecInstance& inst,
                                 const std::vector<double>& c) {
  std::vector<int> rank(inst.n_jobs);
  {
    auto topo = inst.topo_order();
    for (int k = 0; k < inst.n_jobs; ++k) rank[topo[k]] = k;
  }
  std::vector<int> order(inst.n_jobs);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (c[x] != c[y]) return c[x] < c[y];
    if (rank[x] != rank[y]) return rank[x] < rank[y];
    return x < y;
  });
  Schedule out;
  out.completion.assign(inst.n_jobs, 0);
  long long t = 0;
  for (int j : order) {
    t += inst.sizes[j];
    out.completion[j] = t;
  }
  return out;
}

// tau_d for the smallest d with x_{j,d} >= theta (the time by which a theta
// fraction of the job is fractionally complete).
double quantile_completion(const PrecLp& lp, const std::vector<double>& x,
                           int job, double theta) {
  const int D = lp.grid.D();
  for (int d = 1; d <= D - 1; ++d) {
    int v = lp.var_of_job[job][d];
    double value = v >= 0 ? x[v] : 0.0;
    if (value >= theta) return lp.grid.tau[d];
  }
  return lp.grid.tau[D];  // x_{j,D} = 1
}

}  // namespace

Schedule round_prec(const PrecInstance& inst, const PrecLpSolution& lp_sol,
                    PrecMode mode, const PrecOptions& options) {
  switch (mode) {
    case PrecMode::single_machine: {
      if (inst.m != 1)
        throw argument_error("round_prec: single_machine needs m == 1");
      return schedule_single_machine(inst, lp_sol.completion);
    }
    case PrecMode::unit_det:
    case PrecMode::unit_theta: {
      for (long long p : inst.sizes)
        if (p != 1)
          throw argument_error("round_prec: unit modes need unit sizes");
      if (mode == PrecMode::unit_det)
        return list_scheduling(inst, lp_sol.completion);
      if (options.theta_samples < 1)
        throw argument_error("round_prec: need at least one theta sample");
      // theta quantiles respect precedence because x_{j',d} <= x_{j,d}.
      const PrecLp& lp = lp_sol.lp;
      Rng rng(options.seed);
      Schedule best;
      double best_value = std::numeric_limits<double>::max();
      for (int rep = 0; rep < options.theta_samples; ++rep) {
        double theta = rng.next_open_closed(0.0, 1.0);
        std::vector<double> f(inst.n_jobs);
        for (int j = 0; j < inst.n_jobs; ++j)
          f[j] = quantile_completion(lp, lp_sol.x, j, theta);
        Schedule s = list_scheduling(inst, f);
        double value = model::evaluate(inst, s).value;
        if (value < best_value) {
          best_value = value;
          best = s;
        }
      }
      return best;
    }
    case PrecMode::general: {
      auto q = chain_bounds(inst);
      std::vector<double> f(inst.n_jobs);
      for (int j = 0; j < inst.n_jobs; ++j)
        f[j] = lp_sol.completion[j] + static_cast<double>(q[j]) -
               static_cast<double>(inst.sizes[j]);
      for (auto [a, b] : inst.prec)
        if (f[b] - f[a] < static_cast<double>(inst.sizes[a]) - 1e-9)
          throw internal_error("round_prec: priority gap below p_j");
      return list_scheduling(inst, f);
    }
  }
  throw argument_error("round_prec: unknown mode");
}

PrecResult solve_prec(const PrecInstance& inst, double eps, PrecMode mode,
                      const PrecOptions& options) {
  PrecResult result;
  auto lp_sol = solve_prec_lp(inst, eps);
  result.stats = lp_sol.stats;
  {
    const PrecLp& lp = lp_sol.lp;
    double ax = 0;
    for (size_t v = 0; v < lp.vars.size(); ++v)
      ax += lp.objective[v] * lp_sol.x[v];
    double w_total = static_cast<double>(
        std::accumulate(inst.weights.begin(), inst.weights.end(), 0LL));
    result.lp_objective = w_total * lp.grid.tau[lp.grid.D()] - ax;
  }
  result.schedule = round_prec(inst, lp_sol, mode, options);
  result.value = model::evaluate(inst, result.schedule);
  return result;
}

}  // namespace schedkit::prec
