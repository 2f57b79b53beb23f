// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "schedkit/flow.hpp"
#include "schedkit/matching.hpp"
#include "schedkit/model.hpp"
#include "schedkit/mpc.hpp"
#include "schedkit/prec.hpp"
#include "schedkit/schedule_tree.hpp"
#include "schedkit/unrelated.hpp"

#include "test_oracles.hpp"

using namespace schedkit;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  double seconds = 0;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// --------------------------------------------------------------------------
// 1. Makespan ratio, 20 seeds, eps = 0.2, < 10 s.
// --------------------------------------------------------------------------
Outcome criterion_makespan() {
  Outcome out;
  auto t0 = Clock::now();
  const double eps = 0.2, bound = 2 + 3 * eps;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    model::GenParams params;
    params.n = 5 + static_cast<int>(seed % 3);  // 5..7
    params.m = 2 + static_cast<int>(seed % 2);  // 2..3
    params.p_max = 10;
    auto family = seed % 2 == 0 ? model::Family::unrelated_dense
                                : model::Family::unrelated_sparse;
    auto inst = model::generate_unrelated(seed, family, params);
    auto res = unrelated::solve_makespan(inst, eps);
    auto opt =
        model::brute_force_unrelated(inst, model::Objective::makespan).second;
    double ratio = res.value / opt.value;
    worst = std::max(worst, ratio);
    if (ratio > bound + 1e-9) out.pass = false;
  }
  out.seconds = seconds_since(t0);
  if (out.seconds >= 10.0) out.pass = false;
  out.detail = "worst ratio " + fmt(worst) + " vs bound " + fmt(bound) +
               ", " + fmt(out.seconds) + "s";
  return out;
}

// --------------------------------------------------------------------------
// 2. Weighted completion ratio, deterministic rounding, < 30 s.
// --------------------------------------------------------------------------
Outcome criterion_wct() {
  Outcome out;
  auto t0 = Clock::now();
  const double eps = 0.2, bound = 1.5 + 3 * eps;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    model::GenParams params;
    params.n = 4 + static_cast<int>(seed % 3);  // 4..6
    params.m = 2 + static_cast<int>(seed % 2);
    params.p_max = 8;
    params.w_max = 9;
    auto family = seed % 2 == 0 ? model::Family::unrelated_dense
                                : model::Family::unrelated_sparse;
    auto inst = model::generate_unrelated(seed + 100, family, params);
    auto res = unrelated::solve_weighted_completion(inst, eps);
    auto opt = model::brute_force_unrelated(
                   inst, model::Objective::weighted_completion)
                   .second;
    double ratio = res.value / opt.value;
    worst = std::max(worst, ratio);
    if (ratio > bound + 1e-9) out.pass = false;
  }
  out.seconds = seconds_since(t0);
  if (out.seconds >= 30.0) out.pass = false;
  out.detail = "worst ratio " + fmt(worst) + " vs bound " + fmt(bound) +
               ", " + fmt(out.seconds) + "s";
  return out;
}

// --------------------------------------------------------------------------
// 3. L_q ratios: q=2 derandomized, general q in {1.5, 3}, restricted; < 60 s.
// --------------------------------------------------------------------------
Outcome criterion_lq() {
  Outcome out;
  auto t0 = Clock::now();
  const double eps = 0.2;
  double worst_l2 = 0, worst_gen = 0, worst_res = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    model::GenParams params;
    params.n = 4 + static_cast<int>(seed % 3);
    params.m = 2 + static_cast<int>(seed % 2);
    params.p_max = 9;
    auto family = seed % 2 == 0 ? model::Family::unrelated_dense
                                : model::Family::unrelated_sparse;
    auto inst = model::generate_unrelated(seed + 300, family, params);
    auto res = unrelated::solve_lq(inst, 2.0, eps, seed);
    auto opt =
        model::brute_force_unrelated(inst, model::Objective::lq_norm, 2.0)
            .second;
    worst_l2 = std::max(worst_l2, res.value / opt.value);
  }
  if (worst_l2 > std::sqrt(2.0) + 3 * eps + 1e-9) out.pass = false;

  for (double q : {1.5, 3.0}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      model::GenParams params;
      params.n = 4 + static_cast<int>(seed % 3);
      params.m = 2 + static_cast<int>(seed % 2);
      params.p_max = 9;
      auto inst = model::generate_unrelated(
          seed + 500, model::Family::unrelated_dense, params);
      auto res = unrelated::solve_lq(inst, q, eps, seed);
      auto opt =
          model::brute_force_unrelated(inst, model::Objective::lq_norm, q)
              .second;
      worst_gen = std::max(worst_gen, res.value / opt.value);
    }
  }
  if (worst_gen > 4 + 3 * eps + 1e-9) out.pass = false;

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    model::GenParams params;
    params.n = 4 + static_cast<int>(seed % 3);
    params.m = 2 + static_cast<int>(seed % 2);
    params.p_max = 9;
    auto inst = model::generate_unrelated(
        seed + 700, model::Family::restricted_assignment, params);
    auto res = unrelated::solve_lq(inst, 3.0, eps, seed);
    auto opt =
        model::brute_force_unrelated(inst, model::Objective::lq_norm, 3.0)
            .second;
    worst_res = std::max(worst_res, res.value / opt.value);
  }
  if (worst_res > 2 + 3 * eps + 1e-9) out.pass = false;

  out.seconds = seconds_since(t0);
  if (out.seconds >= 60.0) out.pass = false;
  out.detail = "worst ratios: L2 " + fmt(worst_l2) + " (<= " +
               fmt(std::sqrt(2.0) + 0.6) + "), general " + fmt(worst_gen) +
               " (<= 4.6), restricted " + fmt(worst_res) + " (<= 2.6), " +
               fmt(out.seconds) + "s";
  return out;
}

// --------------------------------------------------------------------------
// 4. Precedence ratios: single machine, unit m=2 (best of 20 thetas),
//    general m=2; kappa <= 10; < 60 s.
// --------------------------------------------------------------------------
model::PrecInstance prec_instance_with_few_arcs(std::uint64_t seed,
                                                model::Family family,
                                                model::GenParams params) {
  for (std::uint64_t bump = 0;; bump += 1000) {
    auto inst = model::generate_prec(seed + bump, family, params);
    if (static_cast<int>(inst.prec.size()) <= 10) return inst;
  }
}

Outcome criterion_prec() {
  Outcome out;
  auto t0 = Clock::now();
  const double eps = 0.2;
  double worst_single = 0, worst_unit = 0, worst_general = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    model::GenParams params;
    params.n = 4 + static_cast<int>(seed % 4);  // 4..7
    params.m = 1;
    params.p_max = 4;
    params.w_max = 6;
    params.density = 0.25;
    auto inst = prec_instance_with_few_arcs(seed + 1000,
                                            model::Family::prec_random_dag,
                                            params);
    auto res = prec::solve_prec(inst, eps, prec::PrecMode::single_machine);
    auto opt = model::brute_force_prec(inst).second;
    worst_single = std::max(worst_single, res.value.value / opt.value);
  }
  if (worst_single > 2 + 3 * eps + 1e-9) out.pass = false;

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    model::GenParams params;
    params.n = 4 + static_cast<int>(seed % 4);
    params.m = 2;
    params.w_max = 6;
    params.density = 0.3;
    auto inst = prec_instance_with_few_arcs(seed + 2000,
                                            model::Family::prec_unit, params);
    prec::PrecOptions opt;
    opt.seed = seed;
    opt.theta_samples = 20;
    auto res = prec::solve_prec(inst, eps, prec::PrecMode::unit_theta, opt);
    auto best = model::brute_force_prec(inst).second;
    worst_unit = std::max(worst_unit, res.value.value / best.value);
  }
  if (worst_unit > 1 + std::sqrt(2.0) + 3 * eps + 1e-9) out.pass = false;

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    model::GenParams params;
    params.n = 4 + static_cast<int>(seed % 4);
    params.m = 2;
    params.p_max = 4;
    params.w_max = 6;
    params.density = 0.25;
    auto inst = prec_instance_with_few_arcs(seed + 3000,
                                            model::Family::prec_random_dag,
                                            params);
    auto res = prec::solve_prec(inst, eps, prec::PrecMode::general);
    auto opt = model::brute_force_prec(inst).second;
    worst_general = std::max(worst_general, res.value.value / opt.value);
  }
  if (worst_general > 6 + 3 * eps + 1e-9) out.pass = false;

  out.seconds = seconds_since(t0);
  if (out.seconds >= 60.0) out.pass = false;
  out.detail = "worst ratios: single " + fmt(worst_single) +
               " (<= 2.6), unit " + fmt(worst_unit) + " (<= " +
               fmt(1 + std::sqrt(2.0) + 0.6) + "), general " +
               fmt(worst_general) + " (<= 6.6), " + fmt(out.seconds) + "s";
  return out;
}

// --------------------------------------------------------------------------
// 5. Flow approximation on 200 random DAGs at eps in {0.1, 0.5}; < 10 s.
//    Also exercises solve_nfp per instance so the witness audit (criterion
//    6) covers these graphs.
// --------------------------------------------------------------------------
Outcome criterion_flow() {
  Outcome out;
  auto t0 = Clock::now();
  Rng rng(424242);
  double worst_slack = 1.0;
  for (int rep = 0; rep < 200; ++rep) {
    auto inst = testor::random_normalized_dag(rng, 12);
    double exact = testor::max_flow_exact(inst);
    for (double eps : {0.1, 0.5}) {
      auto f = flow::max_flow_approx(inst, eps);
      double got = 0;
      for (int v = 0; v < inst.n; ++v)
        if (inst.is_source(v))
          for (int e : inst.out_edges[v]) got += f[e];
      if (got < exact / (1 + eps) - 1e-9) out.pass = false;
      if (exact > 0) worst_slack = std::min(worst_slack, got / exact);
      flow::solve_nfp(inst, eps, 0.25);  // witness audit fires internally
    }
  }
  out.seconds = seconds_since(t0);
  if (out.seconds >= 10.0) out.pass = false;
  out.detail = "worst value/optimum " + fmt(worst_slack) + ", " +
               fmt(out.seconds) + "s";
  return out;
}

// --------------------------------------------------------------------------
// 7. Mixed packing/covering batches: 100 feasible, 100 infeasible.
// --------------------------------------------------------------------------
mpc::MpcProblem random_feasible_mpc(Rng& rng, int n, int rows_p, int rows_c,
                                    double margin) {
  mpc::MpcProblem p;
  p.n_vars = n;
  std::vector<double> x0(n);
  for (auto& v : x0) v = 0.1 + rng.next_double();
  auto random_row = [&]() {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < n; ++j)
      if (rng.next_double() < 0.5) row.push_back({j, 0.05 + rng.next_double()});
    if (row.empty())
      row.push_back({static_cast<int>(rng.next_int(0, n - 1)),
                     0.05 + rng.next_double()});
    return row;
  };
  for (int i = 0; i < rows_p; ++i) {
    auto row = random_row();
    double dot = 0;
    for (auto [c, v] : row) dot += v * x0[c];
    for (auto& [c, v] : row) v /= dot * (1 + margin);
    p.packing.rows.push_back(std::move(row));
  }
  for (int k = 0; k < rows_c; ++k) {
    auto row = random_row();
    double dot = 0;
    for (auto [c, v] : row) dot += v * x0[c];
    for (auto& [c, v] : row) v *= (1 + margin) / dot;
    p.covering.rows.push_back(std::move(row));
  }
  return p;
}

Outcome criterion_mpc() {
  Outcome out;
  auto t0 = Clock::now();
  const double eps = 0.2;
  Rng rng(99);
  int solved = 0;
  for (int rep = 0; rep < 100; ++rep) {
    int n = 2 + static_cast<int>(rng.next_int(0, 18));
    int rp = 1 + static_cast<int>(rng.next_int(0, 9));
    int rc = 1 + static_cast<int>(rng.next_int(0, 9));
    auto p = random_feasible_mpc(rng, n, rp, rc, 0.3);
    auto r = mpc::solve_mpc(p, eps);
    if (r.status != mpc::MpcStatus::solved) {
      out.pass = false;
      continue;
    }
    ++solved;
    for (double v : p.packing.times(r.x))
      if (v > 1 + eps + 1e-9) out.pass = false;
    for (double v : p.covering.times(r.x))
      if (v < 1.0 / (1 + eps) - 1e-9) out.pass = false;
  }
  int exhausted = 0;
  for (int rep = 0; rep < 100; ++rep) {
    // A packing row dominating a covering row by more than (1+eps)^2 leaves
    // no room even for the relaxed system.
    int n = 1 + static_cast<int>(rng.next_int(0, 19));
    mpc::MpcProblem p;
    p.n_vars = n;
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < n; ++j) row.push_back({j, 0.1 + rng.next_double()});
    auto prow = row;
    for (auto& [c, v] : prow) v *= (1 + eps) * (1 + eps) * 1.25;
    p.covering.rows = {row};
    p.packing.rows = {prow};
    auto r = mpc::solve_mpc(p, eps);
    if (r.status == mpc::MpcStatus::infeasible_or_budget_exhausted)
      ++exhausted;
    else
      out.pass = false;
  }
  out.seconds = seconds_since(t0);
  out.detail = std::to_string(solved) + "/100 feasible solved, " +
               std::to_string(exhausted) + "/100 infeasible exhausted, " +
               fmt(out.seconds) + "s";
  return out;
}

// --------------------------------------------------------------------------
// 8. Data-structure differentials and the list-scheduling reference.
// --------------------------------------------------------------------------
struct SlotArray {
  std::vector<char> busy;
  explicit SlotArray(long long horizon) : busy(horizon, 0) {}
  long long find(long long t, long long p) const {
    for (long long s = t;; ++s) {
      bool ok = true;
      for (long long u = s; u < s + p; ++u) {
        if (u >= static_cast<long long>(busy.size())) return -1;
        if (busy[u]) {
          ok = false;
          break;
        }
      }
      if (ok) return s;
    }
  }
  void remove(long long t, long long t2) {
    for (long long u = t; u < t2; ++u) busy[u] = 1;
  }
};

struct CounterArray {
  int m;
  std::vector<std::pair<long long, long long>> pts;
  explicit CounterArray(int m_in) : m(m_in), pts{{0, 0}} {}
  bool contains(long long t) const {
    for (auto& [k, v] : pts)
      if (k == t) return true;
    return false;
  }
  void insert(long long t) {
    if (contains(t)) return;
    long long pv = 0;
    for (auto& [k, v] : pts)
      if (k < t) pv = v;
    pts.push_back({t, pv});
    std::sort(pts.begin(), pts.end());
  }
  bool all_below(long long from, long long to) const {
    for (auto& [k, v] : pts)
      if (k >= from && k < to && v >= m) return false;
    return true;
  }
  std::vector<std::pair<long long, long long>> increase(long long from,
                                                        long long to) {
    std::vector<std::pair<long long, long long>> out;
    for (size_t i = 0; i < pts.size(); ++i)
      if (pts[i].first >= from && pts[i].first < to) {
        ++pts[i].second;
        if (pts[i].second == m)
          out.push_back(
              {pts[i].first, i + 1 < pts.size() ? pts[i + 1].first : -1});
      }
    return out;
  }
  long long value(long long t) const {
    for (auto& [k, v] : pts)
      if (k == t) return v;
    return -1;
  }
};

model::Schedule list_scheduling_naive(const model::PrecInstance& inst,
                                      const std::vector<double>& priority) {
  std::vector<int> rank(inst.n_jobs);
  auto topo = inst.topo_order();
  for (int k = 0; k < inst.n_jobs; ++k) rank[topo[k]] = k;
  std::vector<int> order(inst.n_jobs);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (priority[x] != priority[y]) return priority[x] < priority[y];
    if (rank[x] != rank[y]) return rank[x] < rank[y];
    return x < y;
  });
  std::vector<std::vector<int>> preds(inst.n_jobs);
  for (auto [a, b] : inst.prec) preds[b].push_back(a);
  long long horizon = inst.total_size() +
                      *std::max_element(inst.sizes.begin(), inst.sizes.end()) +
                      2;
  std::vector<int> cong(horizon + 1, 0);
  model::Schedule out;
  out.completion.assign(inst.n_jobs, 0);
  for (int j : order) {
    long long t = 0;
    for (int p : preds[j]) t = std::max(t, out.completion[p]);
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
    out.completion[j] = t + inst.sizes[j];
  }
  return out;
}

Outcome criterion_structures() {
  Outcome out;
  auto t0 = Clock::now();
  long long divergences = 0;
  {
    Rng rng(6060);
    for (int seq = 0; seq < 1000; ++seq) {
      long long horizon = 25 + rng.next_int(0, 40);
      prec::IdleIntervals ds(horizon);
      SlotArray ref(horizon);
      for (int op = 0; op < 30; ++op) {
        long long t = rng.next_int(0, horizon - 2);
        long long p = rng.next_int(1, 5);
        long long want = ref.find(t, p);
        if (want < 0) break;
        if (ds.find(t, p) != want) ++divergences;
        if (rng.next_double() < 0.7) {
          ds.remove(want, want + p);
          ref.remove(want, want + p);
        }
      }
    }
  }
  {
    Rng rng(7070);
    for (int seq = 0; seq < 1000; ++seq) {
      int m = 1 + static_cast<int>(rng.next_int(0, 3));
      prec::CriticalCounters cc(m);
      CounterArray ref(m);
      cc.insert(1000);
      ref.insert(1000);
      for (int op = 0; op < 40; ++op) {
        if (rng.next_double() < 0.45) {
          long long t = rng.next_int(1, 40);
          cc.insert(t);
          ref.insert(t);
        } else {
          long long from = rng.next_int(0, 39);
          long long to = from + rng.next_int(1, 8);
          if (!ref.all_below(from, to)) continue;
          if (cc.increase(from, to) != ref.increase(from, to)) ++divergences;
        }
        for (auto& [k, v] : ref.pts)
          if (!cc.contains(k) || cc.value(k) != v) ++divergences;
      }
    }
  }
  int mismatched_schedules = 0;
  {
    Rng rng(8080);
    model::GenParams params;
    params.p_max = 4;
    params.w_max = 5;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      params.n = 4 + static_cast<int>(seed % 6);
      params.m = 1 + static_cast<int>(seed % 3);
      params.density = 0.35;
      auto inst =
          model::generate_prec(seed + 5000, model::Family::prec_random_dag,
                               params);
      auto q = prec::chain_bounds(inst);
      std::vector<double> f(inst.n_jobs);
      for (int j = 0; j < inst.n_jobs; ++j)
        f[j] = static_cast<double>(q[j]) + 0.25 * rng.next_double();
      for (auto [a, b] : inst.prec) f[b] = std::max(f[b], f[a]);
      if (prec::list_scheduling(inst, f).completion !=
          list_scheduling_naive(inst, f).completion)
        ++mismatched_schedules;
    }
  }
  if (divergences != 0 || mismatched_schedules != 0) out.pass = false;
  out.seconds = seconds_since(t0);
  out.detail = std::to_string(divergences) + " divergences, " +
               std::to_string(mismatched_schedules) +
               " schedule mismatches, " + fmt(out.seconds) + "s";
  return out;
}

// --------------------------------------------------------------------------
// 10. Scaling smoke test (logged, not asserted).
// --------------------------------------------------------------------------
Outcome criterion_scaling() {
  Outcome out;
  auto t0 = Clock::now();
  std::vector<int> sizes{40, 80, 160};  // |E| = n * m with m = 5
  std::vector<double> means;
  for (int n : sizes) {
    model::GenParams params;
    params.n = n;
    params.m = 5;
    params.p_max = 10;
    auto inst = model::generate_unrelated(1, model::Family::unrelated_dense,
                                          params);
    unrelated::solve_makespan(inst, 0.2);  // warm-up, not measured
    double total = 0;
    for (int run = 0; run < 5; ++run) {
      auto s = Clock::now();
      unrelated::solve_makespan(inst, 0.2);
      total += seconds_since(s);
    }
    means.push_back(total / 5);
  }
  std::string trend;
  for (size_t k = 0; k + 1 < means.size(); ++k) {
    double ratio = means[k + 1] / std::max(means[k], 1e-9);
    trend += " x" + fmt(ratio);
  }
  out.seconds = seconds_since(t0);
  out.detail = "edge doubling time ratios:" + trend + " (informational), " +
               fmt(out.seconds) + "s";
  return out;  // logged, never asserted
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  // Criteria 6 and 9 are derived from the others below.
  Entry entries[] = {
      {1, "makespan ratio suite", criterion_makespan},
      {2, "weighted completion ratio suite", criterion_wct},
      {3, "L_q ratio suites", criterion_lq},
      {4, "precedence ratio suites", criterion_prec},
      {5, "flow approximation suite", criterion_flow},
      {7, "mixed packing/covering contract", criterion_mpc},
      {8, "data-structure differentials", criterion_structures},
      {10, "scaling smoke test", criterion_scaling},
  };

  flow::reset_witness_audit_count();
  unrelated::reset_lq_audit_flags();

  bool all_pass = true;
  bool audits_clean = true;
  std::string audit_note;
  long long witness_before_45 = 0, witness_after_45 = 0;

  std::vector<std::pair<int, std::string>> lines;
  for (const auto& e : entries) {
    if (e.id == 4) witness_before_45 = flow::witness_audit_count();
    Outcome o;
    try {
      o = e.fn();
    } catch (const audit_error& err) {
      o.pass = false;
      o.detail = std::string("audit fired: ") + err.what();
      audits_clean = false;
      audit_note = err.what();
    } catch (const error& err) {
      o.pass = false;
      o.detail = err.what();
    }
    if (e.id == 5) witness_after_45 = flow::witness_audit_count();
    if (!o.pass) all_pass = false;
    lines.push_back({e.id, std::string(o.pass ? "[PASS]" : "[FAIL]") +
                               " criterion " + std::to_string(e.id) + ": " +
                               e.name + " (" + o.detail + ")"});
  }

  // 6. Witness-cut inequality: every solve_nfp in suites 4-5 checked it
  // (violations would have thrown audit_error above).
  long long witness_checks = witness_after_45 - witness_before_45;
  bool c6 = audits_clean && witness_checks > 0;
  lines.push_back({6, std::string(c6 ? "[PASS]" : "[FAIL]") +
                          " criterion 6: witness-cut inequality (" +
                          std::to_string(witness_checks) +
                          " checks in suites 4-5, all held)"});
  if (!c6) all_pass = false;

  // 9. Structural audits (grouping load bound, prefix-volume bound,
  // completion monotonicity, derandomization monotone cost) never fired.
  bool c9 = audits_clean;
  lines.push_back(
      {9, std::string(c9 ? "[PASS]" : "[FAIL]") +
              " criterion 9: per-run structural audits (" +
              (audits_clean ? std::string("none fired") : audit_note) +
              ", L_q envelope flags: " +
              std::to_string(unrelated::lq_audit_flags()) + ")"});
  if (!c9) all_pass = false;

  std::sort(lines.begin(), lines.end());
  for (auto& [id, text] : lines) std::printf("%s\n", text.c_str());
  std::printf("%s\n", all_pass ? "ACCEPTANCE: all criteria passed"
                               : "ACCEPTANCE: FAILURES present");
  return all_pass ? 0 : 1;
}
