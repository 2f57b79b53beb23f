#include "schedkit/matching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace schedkit::matching {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();
constexpr double kSupportTol = 1e-12;

struct HopcroftKarp {
  const Bipartite& h;
  std::vector<int> match_left, match_right, level;

  explicit HopcroftKarp(const Bipartite& b)
      : h(b), match_left(b.n_left, -1), match_right(b.n_right, -1),
        level(b.n_left, kInf) {}

  bool bfs() {
    std::deque<int> dq;
    for (int u = 0; u < h.n_left; ++u) {
      if (match_left[u] < 0) {
        level[u] = 0;
        dq.push_back(u);
      } else {
        level[u] = kInf;
      }
    }
    bool reachable_free = false;
    while (!dq.empty()) {
      int u = dq.front();
      dq.pop_front();
      for (int v : h.adj[u]) {
        int w = match_right[v];
        if (w < 0) {
          reachable_free = true;
        } else if (level[w] == kInf) {
          level[w] = level[u] + 1;
          dq.push_back(w);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(int u) {
    for (int v : h.adj[u]) {
      int w = match_right[v];
      if (w < 0 || (level[w] == level[u] + 1 && dfs(w))) {
        match_left[u] = v;
        match_right[v] = u;
        return true;
      }
    }
    level[u] = kInf;
    return false;
  }
};

}  // namespace

std::vector<int> match_expanding(const Bipartite& h, double eps) {
  if (!(eps > 0)) throw argument_error("match_expanding: eps must be positive");
  for (const auto& row : h.adj)
    for (int v : row)
      if (v < 0 || v >= h.n_right)
        throw validation_error("match_expanding: neighbour index out of range");
  if (h.n_left == 0) return {};

  // With (1+eps) expansion, all left vertices are matched once no
  // augmenting path of length <= 2L+1 remains, L = floor(log_{1+eps}|S|)+1.
  // One Hopcroft-Karp phase raises the shortest augmenting length by >= 2,
  // so L+1 phases suffice.
  const int phases =
      static_cast<int>(std::floor(std::log(std::max(h.n_left, 1)) /
                                  std::log1p(eps))) + 2;
  HopcroftKarp hk(h);
  for (int phase = 0; phase < phases; ++phase) {
    if (!hk.bfs()) break;
    for (int u = 0; u < h.n_left; ++u)
      if (hk.match_left[u] < 0) hk.dfs(u);
  }
  for (int u = 0; u < h.n_left; ++u)
    if (hk.match_left[u] < 0)
      throw expansion_error(
          "match_expanding: left vertex " + std::to_string(u) +
          " uncovered after the phase budget; expansion property violated");
  return hk.match_left;
}

std::vector<std::pair<int, int>> machine_grouping(const std::vector<double>& p,
                                                  const std::vector<double>& x,
                                                  double eps) {
  if (p.size() != x.size())
    throw argument_error("machine_grouping: p and x sized differently");
  std::vector<int> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int d1, int d2) {
    return p[d1] > p[d2];
  });
  double total = 0;
  for (double v : x) total += v;
  std::vector<std::pair<int, int>> out;
  if (total < kSupportTol) return out;
  int groups = static_cast<int>(std::ceil((1 + eps) * total - 1e-9));
  double z_prev = 0;
  for (int d : order) {
    double z_next = z_prev + x[d];
    // Groups r whose open interval ((r-1)/(1+eps), r/(1+eps)) meets the open
    // mass interval (z_prev, z_next); touching boundaries create no edge.
    int r_lo = static_cast<int>(std::floor(z_prev * (1 + eps))) + 1;
    for (int r = std::max(1, r_lo); r <= groups; ++r) {
      if ((r - 1) / (1.0 + eps) >= z_next) break;
      out.push_back({d, r});
    }
    z_prev = z_next;
  }
  return out;
}

std::vector<int> round_by_grouping(int n_jobs, int n_machines,
                                   const std::vector<std::pair<int, int>>& edges,
                                   const std::vector<double>& p_edge,
                                   const std::vector<double>& x_edge,
                                   double eps) {
  if (!(eps > 0)) throw argument_error("round_by_grouping: eps must be positive");
  const int n_edges = static_cast<int>(edges.size());
  std::vector<double> x_of_job(n_jobs, 0.0);
  for (int e = 0; e < n_edges; ++e) {
    if (x_edge[e] < -kSupportTol)
      throw argument_error("round_by_grouping: negative fractional value");
    x_of_job[edges[e].first] += x_edge[e];
  }
  for (int j = 0; j < n_jobs; ++j)
    if (std::abs(x_of_job[j] - 1.0) > 1e-6)
      throw argument_error("round_by_grouping: x(delta(j)) must equal 1");

  std::vector<std::vector<int>> support(n_machines);  // edge ids per machine
  for (int e = 0; e < n_edges; ++e)
    if (x_edge[e] >= kSupportTol) support[edges[e].second].push_back(e);

  // Per machine: jobs sorted by p nonincreasing; prefix mass Z_d; a group
  // vertex per 1/(1+eps) of mass; job d joins group r when the open
  // intervals (Z_{d-1}, Z_d) and ((r-1)/(1+eps), r/(1+eps)) intersect.
  Bipartite h;
  h.n_left = n_jobs;
  h.adj.assign(n_jobs, {});
  std::vector<int> group_machine;  // right vertex -> machine
  long long h_edges = 0;
  for (int i = 0; i < n_machines; ++i) {
    auto& sup = support[i];
    // Sort ties (equal p) by job index so the construction is deterministic.
    std::stable_sort(sup.begin(), sup.end(), [&](int e1, int e2) {
      if (p_edge[e1] != p_edge[e2]) return p_edge[e1] > p_edge[e2];
      return edges[e1].first < edges[e2].first;
    });
    std::vector<double> p_sup, x_sup;
    for (int e : sup) {
      p_sup.push_back(p_edge[e]);
      x_sup.push_back(x_edge[e]);
    }
    auto memberships = machine_grouping(p_sup, x_sup, eps);
    if (memberships.empty()) continue;
    int groups = 0;
    for (auto [d, r] : memberships) groups = std::max(groups, r);
    int first_group = h.n_right;
    for (int r = 0; r < groups; ++r) {
      group_machine.push_back(i);
      ++h.n_right;
    }
    for (auto [d, r] : memberships) {
      h.adj[edges[sup[d]].first].push_back(first_group + r - 1);
      ++h_edges;
    }
  }
  if (h_edges > n_edges + static_cast<long long>(std::ceil((1 + eps) * n_jobs)) +
                    n_machines)
    throw internal_error("round_by_grouping: group graph too large");

  auto matched = match_expanding(h, eps);
  std::vector<int> sigma(n_jobs, -1);
  for (int j = 0; j < n_jobs; ++j) sigma[j] = group_machine[matched[j]];

  // Per-machine load bound audit.
  std::vector<double> frac_load(n_machines, 0.0), int_load(n_machines, 0.0),
      biggest(n_machines, 0.0);
  for (int e = 0; e < n_edges; ++e)
    frac_load[edges[e].second] += p_edge[e] * x_edge[e];
  std::vector<std::vector<double>> p_of(n_jobs);
  for (auto& row : p_of) row.assign(n_machines, -1.0);
  for (int e = 0; e < n_edges; ++e)
    p_of[edges[e].first][edges[e].second] = p_edge[e];
  for (int j = 0; j < n_jobs; ++j) {
    double p = p_of[j][sigma[j]];
    if (p < 0)
      throw internal_error("round_by_grouping: job matched outside support");
    int_load[sigma[j]] += p;
    biggest[sigma[j]] = std::max(biggest[sigma[j]], p);
  }
  for (int i = 0; i < n_machines; ++i)
    if (int_load[i] > (1 + eps) * frac_load[i] + biggest[i] + 1e-6)
      throw audit_error("round_by_grouping: per-machine load bound violated");
  return sigma;
}

model::Assignment round_by_grouping(const model::UnrelatedInstance& inst,
                                    const std::vector<double>& x_edge,
                                    double eps) {
  std::vector<std::pair<int, int>> edges;
  std::vector<double> p;
  edges.reserve(inst.edges.size());
  for (const auto& e : inst.edges) {
    edges.push_back({e.job, e.machine});
    p.push_back(static_cast<double>(e.p));
  }
  return model::Assignment{round_by_grouping(inst.n_jobs, inst.n_machines,
                                             edges, p, x_edge, eps)};
}

}  // namespace schedkit::matching
