#include "schedkit/flow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>

#include "json.hpp"

namespace schedkit::flow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::atomic<long long> g_witness_checks{0};

std::vector<char> reach_forward(const FlowInstance& g,
                                const std::vector<char>& from) {
  std::vector<char> seen = from;
  std::deque<int> dq;
  for (int v = 0; v < g.n; ++v)
    if (seen[v]) dq.push_back(v);
  while (!dq.empty()) {
    int v = dq.front();
    dq.pop_front();
    for (int e : g.out_edges[v]) {
      int w = g.edges[e].second;
      if (!seen[w]) {
        seen[w] = 1;
        dq.push_back(w);
      }
    }
  }
  return seen;
}

std::vector<char> reach_backward(const FlowInstance& g,
                                 const std::vector<char>& to) {
  std::vector<char> seen = to;
  std::deque<int> dq;
  for (int v = 0; v < g.n; ++v)
    if (seen[v]) dq.push_back(v);
  while (!dq.empty()) {
    int v = dq.front();
    dq.pop_front();
    for (int e : g.in_edges[v]) {
      int w = g.edges[e].first;
      if (!seen[w]) {
        seen[w] = 1;
        dq.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

long long witness_audit_count() { return g_witness_checks; }
void reset_witness_audit_count() { g_witness_checks = 0; }

// ---------------------------------------------------------------------------
// FlowInstance
// ---------------------------------------------------------------------------

double FlowInstance::supply_total() const {
  return std::accumulate(a.begin(), a.end(), 0.0);
}

void FlowInstance::finalize() {
  out_edges.assign(n, {});
  in_edges.assign(n, {});
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    auto [u, v] = edges[e];
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw validation_error("flow edge endpoint out of range");
    out_edges[u].push_back(e);
    in_edges[v].push_back(e);
  }
  // Kahn; rejects cycles (callers must contract strongly connected
  // components first).
  std::vector<int> indeg(n, 0);
  for (auto [u, v] : edges) ++indeg[v];
  std::deque<int> dq;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) dq.push_back(v);
  topo_rank.assign(n, -1);
  int rank = 0;
  while (!dq.empty()) {
    int v = dq.front();
    dq.pop_front();
    topo_rank[v] = rank++;
    for (int e : out_edges[v])
      if (--indeg[edges[e].second] == 0) dq.push_back(edges[e].second);
  }
  if (rank != n)
    throw validation_error("flow graph has a cycle; contract SCCs first");
}

std::pair<FlowInstance, LiftInfo> normalize(const RawFlowGraph& raw,
                                            double gamma) {
  if (static_cast<int>(raw.a.size()) != raw.n ||
      static_cast<int>(raw.b.size()) != raw.n)
    throw validation_error("normalize: supply/demand vectors sized wrongly");
  for (int v = 0; v < raw.n; ++v)
    if (raw.a[v] < 0 || raw.b[v] < 0 || !std::isfinite(raw.a[v]) ||
        !std::isfinite(raw.b[v]))
      throw validation_error("normalize: supplies and demands must be >= 0");
  if (gamma < 0) throw argument_error("normalize: gamma must be >= 0");

  // Cycle check happens on the raw shape first.
  {
    FlowInstance probe;
    probe.n = raw.n;
    probe.edges = raw.edges;
    probe.finalize();
  }

  std::vector<std::vector<int>> out(raw.n), in(raw.n);
  for (int e = 0; e < static_cast<int>(raw.edges.size()); ++e) {
    out[raw.edges[e].first].push_back(e);
    in[raw.edges[e].second].push_back(e);
  }

  LiftInfo lift;
  lift.norm_of.assign(raw.n, -1);
  lift.fixed_y.assign(raw.n, std::numeric_limits<double>::quiet_NaN());
  lift.norm_edge_of.assign(raw.edges.size(), -1);

  // Pass 1: vertices unreachable from the supply-carrying set get y = 0.
  std::vector<char> from_s(raw.n, 0), keep1(raw.n, 0);
  {
    std::deque<int> dq;
    for (int v = 0; v < raw.n; ++v)
      if (raw.a[v] > 0) {
        from_s[v] = 1;
        dq.push_back(v);
      }
    while (!dq.empty()) {
      int v = dq.front();
      dq.pop_front();
      for (int e : out[v]) {
        int w = raw.edges[e].second;
        if (!from_s[w]) {
          from_s[w] = 1;
          dq.push_back(w);
        }
      }
    }
    keep1 = from_s;
  }
  // Pass 2: surviving vertices that cannot reach a surviving demand get
  // y = 1; their supply becomes a constant offset.
  std::vector<char> keep(raw.n, 0);
  {
    std::deque<int> dq;
    for (int v = 0; v < raw.n; ++v)
      if (keep1[v] && raw.b[v] > 0) {
        keep[v] = 1;
        dq.push_back(v);
      }
    while (!dq.empty()) {
      int v = dq.front();
      dq.pop_front();
      for (int e : in[v]) {
        int w = raw.edges[e].first;
        if (keep1[w] && !keep[w]) {
          keep[w] = 1;
          dq.push_back(w);
        }
      }
    }
  }
  for (int v = 0; v < raw.n; ++v) {
    if (!keep1[v]) {
      lift.fixed_y[v] = 0.0;
    } else if (!keep[v]) {
      lift.fixed_y[v] = 1.0;
      lift.offset += raw.a[v];
    }
  }

  FlowInstance inst;
  inst.gamma = gamma;
  for (int v = 0; v < raw.n; ++v)
    if (keep[v]) lift.norm_of[v] = inst.n++;
  inst.a.assign(inst.n, 0.0);
  inst.b.assign(inst.n, 0.0);
  lift.pendant_of.assign(inst.n, -1);
  for (int v = 0; v < raw.n; ++v)
    if (keep[v]) {
      inst.a[lift.norm_of[v]] = raw.a[v];
      inst.b[lift.norm_of[v]] = raw.b[v];
    }
  for (int e = 0; e < static_cast<int>(raw.edges.size()); ++e) {
    auto [u, v] = raw.edges[e];
    if (keep[u] && keep[v]) {
      lift.norm_edge_of[e] = static_cast<int>(inst.edges.size());
      inst.edges.push_back({lift.norm_of[u], lift.norm_of[v]});
    }
  }

  std::vector<int> out_deg(inst.n, 0), in_deg(inst.n, 0);
  for (auto [u, v] : inst.edges) {
    ++out_deg[u];
    ++in_deg[v];
  }
  // Pendant sinks first: a sink needs one when it still has out-edges or
  // also carries supply.
  int old_n = inst.n;
  for (int v = 0; v < old_n; ++v) {
    if (inst.b[v] > 0 && (out_deg[v] > 0 || inst.a[v] > 0)) {
      int fresh = inst.n++;
      inst.a.push_back(0.0);
      inst.b.push_back(inst.b[v]);
      inst.b[v] = 0.0;
      inst.edges.push_back({v, fresh});
      lift.pendant_of.push_back(v);
    }
  }
  // Pendant sources: needed when the source has in-edges or some out-edge
  // leads directly to a (final) sink.
  old_n = inst.n;
  std::vector<char> is_final_sink(inst.n, 0);
  for (int v = 0; v < inst.n; ++v) is_final_sink[v] = inst.b[v] > 0;
  for (int v = 0; v < old_n; ++v) {
    if (!(inst.a[v] > 0)) continue;
    bool direct_to_sink = false;
    for (auto [u, w] : inst.edges)
      if (u == v && is_final_sink[w]) direct_to_sink = true;
    if (in_deg[v] > 0 || direct_to_sink) {
      int fresh = inst.n++;
      inst.a.push_back(inst.a[v]);
      inst.b.push_back(0.0);
      inst.a[v] = 0.0;
      inst.edges.push_back({fresh, v});
      lift.pendant_of.push_back(v);
    }
  }
  inst.finalize();
  return {inst, lift};
}

RawFlowGraph raw_flow_from_json(const std::string& text, double* gamma_out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  auto need = [&](const char* f) -> const nlohmann::json& {
    auto it = j.find(f);
    if (it == j.end())
      throw parse_error(std::string("missing required field '") + f + "'");
    return *it;
  };
  RawFlowGraph raw;
  raw.n = need("vertices").get<int>();
  for (const auto& e : need("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw parse_error("field 'edges': entries must be [u, v]");
    raw.edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  raw.a.assign(raw.n, 0.0);
  raw.b.assign(raw.n, 0.0);
  try {
    for (const auto& s : need("supplies"))
      raw.a.at(s[0].get<int>()) = s[1].get<double>();
    for (const auto& d : need("demands"))
      raw.b.at(d[0].get<int>()) = d[1].get<double>();
  } catch (const std::out_of_range&) {
    throw parse_error("supply/demand vertex index out of range");
  }
  if (gamma_out)
    *gamma_out = j.contains("gamma") ? j["gamma"].get<double>() : 1.0;
  return raw;
}

FlowInstance flow_instance_from_json(const std::string& text) {
  double gamma = 1.0;
  RawFlowGraph raw = raw_flow_from_json(text, &gamma);
  auto [inst, lift] = normalize(raw, gamma);
  return inst;
}

std::string to_json(const FlowInstance& inst) {
  nlohmann::json j;
  j["vertices"] = inst.n;
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : inst.edges) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  nlohmann::json sup = nlohmann::json::array(), dem = nlohmann::json::array();
  for (int v = 0; v < inst.n; ++v) {
    if (inst.a[v] > 0) sup.push_back({v, inst.a[v]});
    if (inst.b[v] > 0) dem.push_back({v, inst.b[v]});
  }
  j["supplies"] = std::move(sup);
  j["demands"] = std::move(dem);
  j["gamma"] = inst.gamma;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Handled graphs
// ---------------------------------------------------------------------------

HandledGraph HandledGraph::trivial(const FlowInstance& base_inst) {
  HandledGraph g;
  g.base = &base_inst;
  g.n = base_inst.n;
  g.pi.resize(g.n);
  std::iota(g.pi.begin(), g.pi.end(), 0);
  g.edges = base_inst.edges;
  g.edge_base.resize(g.edges.size());
  std::iota(g.edge_base.begin(), g.edge_base.end(), 0);
  g.handle_of.assign(g.edges.size(), -1);
  g.build_adjacency();
  return g;
}

void HandledGraph::build_adjacency() {
  out_edges.assign(n, {});
  in_edges.assign(n, {});
  std::vector<int> outdeg(n, 0), indeg(n, 0);
  for (auto [u, v] : edges) {
    ++outdeg[u];
    ++indeg[v];
  }
  for (int v = 0; v < n; ++v) {
    out_edges[v].reserve(outdeg[v]);
    in_edges[v].reserve(indeg[v]);
  }
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    out_edges[edges[e].first].push_back(e);
    in_edges[edges[e].second].push_back(e);
  }
  topo_vertices.resize(n);
  std::iota(topo_vertices.begin(), topo_vertices.end(), 0);
  const auto& rank = base->topo_rank;
  std::sort(topo_vertices.begin(), topo_vertices.end(), [&](int x, int y) {
    int rx = rank[pi[x]], ry = rank[pi[y]];
    return rx != ry ? rx < ry : x < y;
  });
}

double out_of(const HandledGraph& g, const Flow& f, int v) {
  double s = 0;
  for (int e : g.out_edges[v]) s += f[e];
  return s;
}

double into(const HandledGraph& g, const Flow& f, int v) {
  double s = 0;
  for (int e : g.in_edges[v]) s += f[e];
  return s;
}

double flow_value(const HandledGraph& g, const Flow& f) {
  double s = 0;
  for (int v = 0; v < g.base->n; ++v)
    if (g.base->is_source(v)) s += out_of(g, f, v);
  return s;
}

void audit_flow(const FlowInstance& inst, const Flow& f) {
  const double tol = 1e-7 * (1.0 + inst.supply_total());
  for (double v : f)
    if (v < -tol || !std::isfinite(v))
      throw internal_error("flow audit: negative or non-finite edge value");
  auto sum_of = [&](const std::vector<int>& ids) {
    double s = 0;
    for (int e : ids) s += f[e];
    return s;
  };
  for (int v = 0; v < inst.n; ++v) {
    if (inst.is_source(v)) {
      if (sum_of(inst.out_edges[v]) > inst.a[v] + tol)
        throw internal_error("flow audit: supply exceeded");
    } else if (inst.is_sink(v)) {
      if (sum_of(inst.in_edges[v]) > inst.gamma * inst.b[v] + tol)
        throw internal_error("flow audit: demand exceeded");
    } else if (std::abs(sum_of(inst.out_edges[v]) - sum_of(inst.in_edges[v])) >
               tol) {
      throw internal_error("flow audit: conservation violated");
    }
  }
}

void audit_flow(const HandledGraph& g, const Flow& f) {
  const FlowInstance& base = *g.base;
  const double tol = 1e-7 * (1.0 + base.supply_total());
  for (double v : f)
    if (v < -tol || !std::isfinite(v))
      throw internal_error("flow audit: negative or non-finite edge value");
  for (int v = 0; v < g.n; ++v) {
    int pre = g.pi[v];
    if (base.is_source(pre)) {
      if (out_of(g, f, v) > base.a[pre] + tol)
        throw internal_error("flow audit: supply exceeded");
    } else if (base.is_sink(pre)) {
      if (into(g, f, v) > base.gamma * base.b[pre] + tol)
        throw internal_error("flow audit: demand exceeded");
    } else if (std::abs(out_of(g, f, v) - into(g, f, v)) > tol) {
      throw internal_error("flow audit: conservation violated");
    }
  }
}

// ---------------------------------------------------------------------------
// Sub-flows and projections
// ---------------------------------------------------------------------------

Flow subflow_from(const HandledGraph& g, const Flow& f,
                  const std::vector<char>& from_sources) {
  const FlowInstance& base = *g.base;
  Flow out(g.edges.size(), 0.0);
  std::vector<double> excess(g.n, 0.0);
  for (int v = 0; v < base.n; ++v)
    if (base.is_source(v) && from_sources[v]) excess[v] = out_of(g, f, v);
  for (int v : g.topo_vertices) {
    if (excess[v] <= kFeasTol) continue;
    if (base.is_sink(g.pi[v])) continue;  // absorbed
    double need = excess[v];
    for (int e : g.out_edges[v]) {
      if (need <= kFeasTol) break;
      double take = std::min(need, f[e] - out[e]);
      if (take <= 0) continue;
      out[e] += take;
      need -= take;
      excess[g.edges[e].second] += take;
    }
    if (need > 1e-6)
      throw internal_error("subflow_from: excess could not be routed");
    excess[v] = 0;
  }
  return out;
}

Flow subflow_to(const HandledGraph& g, const Flow& f,
                const std::vector<char>& to_sinks) {
  const FlowInstance& base = *g.base;
  Flow out(g.edges.size(), 0.0);
  std::vector<double> excess(g.n, 0.0);
  for (int v = 0; v < base.n; ++v)
    if (base.is_sink(v) && to_sinks[v]) excess[v] = into(g, f, v);
  const auto& order = g.topo_vertices;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (excess[v] <= kFeasTol) continue;
    if (base.is_source(g.pi[v])) continue;
    double need = excess[v];
    for (int e : g.in_edges[v]) {
      if (need <= kFeasTol) break;
      double take = std::min(need, f[e] - out[e]);
      if (take <= 0) continue;
      out[e] += take;
      need -= take;
      excess[g.edges[e].first] += take;
    }
    if (need > 1e-6)
      throw internal_error("subflow_to: excess could not be routed");
    excess[v] = 0;
  }
  return out;
}

std::vector<double> project_onto(const HandledGraph& g, const Flow& f,
                                 const std::vector<char>& target_base_edges) {
  std::vector<double> out(g.base->edges.size(), 0.0);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (f[e] <= kFeasTol) continue;
    int be = g.edge_base[e];
    if (!target_base_edges[be])
      throw internal_error("project: support edge " + std::to_string(e) +
                           " has no pre-image edge in the target");
    out[be] += f[e];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Blocking flow (DFS with current-arc pointers on a DAG)
// ---------------------------------------------------------------------------

Flow blocking_flow(const ResidualGraph& r) {
  std::vector<std::vector<int>> out(r.n);
  {
    std::vector<int> deg(r.n, 0);
    for (auto [u, v] : r.edges) ++deg[u];
    for (int v = 0; v < r.n; ++v) out[v].reserve(deg[v]);
  }
  for (int e = 0; e < static_cast<int>(r.edges.size()); ++e)
    out[r.edges[e].first].push_back(e);
  Flow g(r.edges.size(), 0.0);
  std::vector<size_t> cur(r.n, 0);

  std::vector<int> path;  // edge ids from source to the current vertex
  int v = r.source;
  while (true) {
    if (v == r.sink) {
      double bottleneck = kInf;
      for (int e : path) bottleneck = std::min(bottleneck, r.cap[e] - g[e]);
      if (!std::isfinite(bottleneck))
        throw internal_error("blocking_flow: unbounded augmenting path");
      for (int e : path) g[e] += bottleneck;
      // Retreat to below the first saturated edge.
      size_t keep = 0;
      while (keep < path.size() && r.cap[path[keep]] - g[path[keep]] > kFeasTol)
        ++keep;
      path.resize(keep);
      v = path.empty() ? r.source : r.edges[path.back()].second;
      continue;
    }
    bool advanced = false;
    while (cur[v] < out[v].size()) {
      int e = out[v][cur[v]];
      if (r.cap[e] - g[e] > kFeasTol) {
        path.push_back(e);
        v = r.edges[e].second;
        advanced = true;
        break;
      }
      ++cur[v];
    }
    if (advanced) continue;
    if (v == r.source) break;  // exhausted
    // Dead end: drop the edge that led here.
    int e = path.back();
    path.pop_back();
    int u = r.edges[e].first;
    ++cur[u];
    v = u;
  }

  // Post-hoc: a residual DFS must not reach the sink.
  std::vector<char> seen(r.n, 0);
  std::deque<int> dq{r.source};
  seen[r.source] = 1;
  while (!dq.empty()) {
    int x = dq.front();
    dq.pop_front();
    for (int e : out[x])
      if (r.cap[e] - g[e] > kFeasTol && !seen[r.edges[e].second]) {
        seen[r.edges[e].second] = 1;
        dq.push_back(r.edges[e].second);
      }
  }
  if (seen[r.sink])
    throw internal_error("blocking_flow: residual path survived");
  return g;
}

// ---------------------------------------------------------------------------
// Shortcut layering (0-1 BFS on the doubled graph)
// ---------------------------------------------------------------------------

ShortcutLayers shortcut_bfs(const HandledGraph& g, const Flow& f) {
  const FlowInstance& base = *g.base;
  const int N = g.n;
  const int INF = ShortcutLayers::kUnreached;
  std::vector<int> dist(2 * N, INF);
  std::vector<int> level, next, stack;
  for (int s = 0; s < base.n; ++s)
    if (base.is_source(s) && base.a[s] - out_of(g, f, s) > kFeasTol) {
      dist[s] = 0;
      level.push_back(s);
    }
  int d = 0;
  while (!level.empty()) {
    // Exhaust the 0-weight closure of the current level, collecting
    // (+1)-weight crossings into the next one.
    stack = level;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (dist[x] != d) continue;
      if (x < N) {
        int v = x;
        for (int e : g.out_edges[v]) {  // forward travel along graph edges
          int w = g.edges[e].second;
          if (d < dist[w]) {
            dist[w] = d;
            stack.push_back(w);
          }
        }
        if (v < base.n && base.is_sink(v) && d + 1 < dist[v + N]) {
          dist[v + N] = d + 1;
          next.push_back(v + N);
        }
      } else {
        int v = x - N;
        for (int e : g.in_edges[v])  // backward travel along flow support
          if (f[e] > kFeasTol) {
            int w = g.edges[e].first;
            if (d < dist[w + N]) {
              dist[w + N] = d;
              stack.push_back(w + N);
            }
          }
        if (v < base.n && base.is_source(v) && d + 1 < dist[v]) {
          dist[v] = d + 1;
          next.push_back(v);
        }
      }
    }
    level.clear();
    for (int x : next)
      if (dist[x] == d + 1) level.push_back(x);
    next.clear();
    ++d;
  }
  ShortcutLayers out;
  out.source_layer.assign(base.n, INF);
  out.sink_layer.assign(base.n, INF);
  for (int v = 0; v < base.n; ++v) {
    if (base.is_source(v) && dist[v] < INF) out.source_layer[v] = dist[v] / 2;
    if (base.is_sink(v) && dist[v + N] < INF)
      out.sink_layer[v] = (dist[v + N] - 1) / 2;
  }
  for (int t = 0; t < base.n; ++t)
    if (base.is_sink(t) && base.gamma * base.b[t] - into(g, f, t) > kFeasTol &&
        dist[t + N] < out.shortest_augmenting)
      out.shortest_augmenting = dist[t + N];
  return out;
}

// ---------------------------------------------------------------------------
// Witness cut
// ---------------------------------------------------------------------------

namespace {

int cut_rounds(const FlowInstance& inst, double eps, double phi) {
  double a1 = inst.supply_total();
  if (a1 <= 0 || phi <= 0) return 0;
  double v = std::log(3.0 * a1 / phi) / std::log1p(eps);
  if (v < 0) return 0;
  return static_cast<int>(std::floor(v));
}

}  // namespace

namespace {

WitnessCut find_cut_impl(const HandledGraph& g, const Flow& f, double eps,
                         double phi, const ShortcutLayers& layers) {
  const FlowInstance& base = *g.base;
  const int L = cut_rounds(base, eps, phi);
  if (layers.shortest_augmenting <= 2 * L + 1)
    throw internal_error("find_cut: an augmenting path of length <= 2L+1 "
                         "remains; run more rounds first");

  // Cost of the prefix S^{<=l}: supplies beyond l plus demands up to l.
  std::vector<double> a_at(L + 2, 0.0), b_at(L + 2, 0.0);
  double a_total = 0;
  for (int v = 0; v < base.n; ++v) {
    if (base.is_source(v)) {
      a_total += base.a[v];
      int l = layers.source_layer[v];
      if (l <= L) a_at[l] += base.a[v];
    }
    if (base.is_sink(v)) {
      int l = layers.sink_layer[v];
      if (l <= L) b_at[l] += base.b[v];
    }
  }
  WitnessCut cut;
  double best = kInf, a_prefix = 0, b_prefix = 0;
  for (int l = 0; l <= L; ++l) {
    a_prefix += a_at[l];
    b_prefix += b_at[l];
    double cost = (a_total - a_prefix) + base.gamma * b_prefix / (1.0 + eps);
    if (cost < best - kFeasTol) {
      best = cost;
      cut.ell_star = l;
    }
  }
  std::vector<char> in_cut(base.n, 0);
  for (int v = 0; v < base.n; ++v)
    if (base.is_source(v) && layers.source_layer[v] <= cut.ell_star) {
      in_cut[v] = 1;
      cut.sources.push_back(v);
    }
  auto reached = reach_forward(base, in_cut);
  double b_reached = 0, a_out = 0;
  for (int v = 0; v < base.n; ++v) {
    if (base.is_sink(v) && reached[v]) {
      cut.sinks_reachable.push_back(v);
      b_reached += base.b[v];
    }
    if (base.is_source(v) && !in_cut[v]) a_out += base.a[v];
  }
  cut.lhs = a_out + base.gamma * b_reached / (1.0 + eps);

  double val = flow_value(g, f);
  ++g_witness_checks;
  if (cut.lhs > val + phi / 3.0 + 1e-9)
    throw audit_error("witness-cut inequality violated: " +
                      std::to_string(cut.lhs) + " > " + std::to_string(val) +
                      " + phi/3");
  return cut;
}

}  // namespace

WitnessCut find_cut(const HandledGraph& g, const Flow& f, double eps,
                    double phi) {
  return find_cut_impl(g, f, eps, phi, shortcut_bfs(g, f));
}

// ---------------------------------------------------------------------------
// inc_len: one augmentation round
// ---------------------------------------------------------------------------

namespace {

std::pair<HandledGraph, Flow> inc_len_impl(int ell, const HandledGraph& g,
                                           const Flow& f,
                                           const ShortcutLayers& layers) {
  const FlowInstance& base = *g.base;
  const int n = base.n;
  const int n_base_edges = static_cast<int>(base.edges.size());

  if (layers.shortest_augmenting < 2 * ell + 1)
    throw internal_error("inc_len: shortest augmenting path shorter than "
                         "2*ell+1 (driver bug)");

  if (ell == 0 && g.n_handles == 0) {
    // Single peel from every source on a handle-free graph reproduces f
    // edge for edge; augment in place along the whole graph.
    HandledGraph out = g;
    Flow fp = f;
    ResidualGraph r;
    r.n = out.n + 2;
    r.source = out.n;
    r.sink = out.n + 1;
    for (int e = 0; e < n_base_edges; ++e) {
      r.edges.push_back(base.edges[e]);
      r.cap.push_back(kInf);
    }
    for (int v = 0; v < n; ++v) {
      if (base.is_source(v)) {
        double cap = base.a[v] - out_of(out, fp, v);
        if (cap > kFeasTol) {
          r.edges.push_back({r.source, v});
          r.cap.push_back(cap);
        }
      }
      if (base.is_sink(v)) {
        double cap = base.gamma * base.b[v] - into(out, fp, v);
        if (cap > kFeasTol) {
          r.edges.push_back({v, r.sink});
          r.cap.push_back(cap);
        }
      }
    }
    Flow gb = blocking_flow(r);
    for (int e = 0; e < n_base_edges; ++e) fp[e] += gb[e];
    audit_flow(out, fp);
#ifndef NDEBUG
    if (shortcut_bfs(out, fp).shortest_augmenting < 3)
      throw internal_error("inc_len: augmenting path length did not grow");
#endif
    return {std::move(out), std::move(fp)};
  }

  // Layers capped at ell: the last layer absorbs everything farther away,
  // so the peeling below consumes the whole flow.
  std::vector<int> src_lay(n, -1), snk_lay(n, -1);
  for (int v = 0; v < n; ++v) {
    if (base.is_source(v)) src_lay[v] = std::min(layers.source_layer[v], ell);
    if (base.is_sink(v)) snk_lay[v] = std::min(layers.sink_layer[v], ell);
  }

  // Piece i spans the base subgraph between layer-i sources and layer-i
  // sinks; handle i copies the subgraph between layer-(i+1) sources and
  // layer-i sinks.
  std::vector<std::vector<char>> fwd(ell + 2), bwd(ell + 1);
  for (int i = 0; i <= ell + 1; ++i) {
    std::vector<char> seed(n, 0);
    if (i <= ell) {
      for (int v = 0; v < n; ++v)
        if (src_lay[v] == i) seed[v] = 1;
      fwd[i] = reach_forward(base, seed);
    }
  }
  for (int i = 0; i <= ell; ++i) {
    std::vector<char> seed(n, 0);
    for (int v = 0; v < n; ++v)
      if (snk_lay[v] == i) seed[v] = 1;
    bwd[i] = reach_backward(base, seed);
  }

  std::vector<int> piece_of(n, -1);
  for (int i = 0; i <= ell; ++i)
    for (int v = 0; v < n; ++v)
      if (fwd[i][v] && bwd[i][v]) {
        if (piece_of[v] != -1)
          throw internal_error("inc_len: forward pieces are not disjoint");
        piece_of[v] = i;
      }

  // Assemble the new handled graph: the base plus one handle per i < ell.
  HandledGraph out;
  out.base = &base;
  out.n = n;
  out.pi.resize(n);
  std::iota(out.pi.begin(), out.pi.end(), 0);
  out.edges = base.edges;
  out.edge_base.resize(n_base_edges);
  std::iota(out.edge_base.begin(), out.edge_base.end(), 0);
  out.handle_of.assign(n_base_edges, -1);
  out.n_handles = std::max(ell, 0);

  std::vector<std::vector<char>> minus_set(std::max(ell, 0));
  std::vector<std::vector<int>> copy_id(std::max(ell, 0));
  std::vector<std::vector<int>> handle_edge_of(std::max(ell, 0));
  for (int i = 0; i < ell; ++i) {
    minus_set[i].assign(n, 0);
    copy_id[i].assign(n, -1);
    handle_edge_of[i].assign(n_base_edges, -1);
    for (int v = 0; v < n; ++v) {
      if (!(fwd[i + 1][v] && bwd[i][v])) continue;
      minus_set[i][v] = 1;
      if (base.is_source(v) || base.is_sink(v)) {
        copy_id[i][v] = v;  // shared endpoints
      } else {
        copy_id[i][v] = out.n++;
        out.pi.push_back(v);
      }
    }
    for (int e = 0; e < n_base_edges; ++e) {
      auto [u, v] = base.edges[e];
      if (minus_set[i][u] && minus_set[i][v]) {
        handle_edge_of[i][e] = static_cast<int>(out.edges.size());
        out.edges.push_back({copy_id[i][u], copy_id[i][v]});
        out.edge_base.push_back(e);
        out.handle_of.push_back(i);
      }
    }
  }
  out.build_adjacency();
  if (out.n > 3 * n || out.edges.size() > 3 * static_cast<size_t>(n_base_edges))
    throw internal_error("inc_len: handled graph exceeded the 3x size bound");

  // Peel the old flow layer by layer and project each piece in place.
  Flow work = f;
  Flow fp(out.edges.size(), 0.0);
  std::vector<char> plus_edges(n_base_edges, 0), minus_edges(n_base_edges, 0);
  for (int i = 0; i <= ell; ++i) {
    std::vector<char> sel(n, 0);
    for (int v = 0; v < n; ++v)
      if (src_lay[v] == i) sel[v] = 1;
    Flow peel = subflow_from(g, work, sel);
    for (size_t e = 0; e < work.size(); ++e)
      work[e] = std::max(0.0, work[e] - peel[e]);
    std::fill(plus_edges.begin(), plus_edges.end(), 0);
    for (int e = 0; e < n_base_edges; ++e) {
      auto [u, v] = base.edges[e];
      plus_edges[e] = piece_of[u] == i && piece_of[v] == i;
    }
    auto proj = project_onto(g, peel, plus_edges);
    for (int e = 0; e < n_base_edges; ++e) fp[e] += proj[e];
    if (i == ell) break;

    std::vector<char> selt(n, 0);
    for (int v = 0; v < n; ++v)
      if (snk_lay[v] == i) selt[v] = 1;
    Flow peel2 = subflow_to(g, work, selt);
    for (size_t e = 0; e < work.size(); ++e)
      work[e] = std::max(0.0, work[e] - peel2[e]);
    std::fill(minus_edges.begin(), minus_edges.end(), 0);
    for (int e = 0; e < n_base_edges; ++e) {
      auto [u, v] = base.edges[e];
      minus_edges[e] = minus_set[i][u] && minus_set[i][v];
    }
    auto proj2 = project_onto(g, peel2, minus_edges);
    for (int e = 0; e < n_base_edges; ++e)
      if (proj2[e] > 0) fp[handle_edge_of[i][e]] += proj2[e];
  }
  double leftover = 0;
  for (double v : work) leftover += v;
  if (leftover > 1e-6)
    throw internal_error("inc_len: peeling left flow behind");

  // Residual graph: forward edges inside pieces, reversed handle edges with
  // the peeled flow as capacity, and residual supply/demand super-edges.
  ResidualGraph r;
  r.n = out.n + 2;
  r.source = out.n;
  r.sink = out.n + 1;
  std::vector<int> r_target;  // out-edge id the residual edge maps to
  std::vector<int> r_sign;
  for (int e = 0; e < n_base_edges; ++e) {
    auto [u, v] = base.edges[e];
    if (piece_of[u] >= 0 && piece_of[u] == piece_of[v]) {
      r.edges.push_back({u, v});
      r.cap.push_back(kInf);
      r_target.push_back(e);
      r_sign.push_back(+1);
    }
  }
  for (int e = n_base_edges; e < static_cast<int>(out.edges.size()); ++e) {
    auto [x, y] = out.edges[e];
    r.edges.push_back({y, x});
    r.cap.push_back(fp[e]);
    r_target.push_back(e);
    r_sign.push_back(-1);
  }
  for (int v = 0; v < n; ++v) {
    if (base.is_source(v) && src_lay[v] == 0) {
      double cap = base.a[v] - out_of(out, fp, v);
      if (cap > kFeasTol) {
        r.edges.push_back({r.source, v});
        r.cap.push_back(cap);
        r_target.push_back(-1);
        r_sign.push_back(0);
      }
    }
    if (base.is_sink(v) && snk_lay[v] == ell) {
      double cap = base.gamma * base.b[v] - into(out, fp, v);
      if (cap > kFeasTol) {
        r.edges.push_back({v, r.sink});
        r.cap.push_back(cap);
        r_target.push_back(-1);
        r_sign.push_back(0);
      }
    }
  }
  Flow gblock = blocking_flow(r);
  for (int e = 0; e < static_cast<int>(r.edges.size()); ++e) {
    if (r_target[e] < 0 || gblock[e] <= 0) continue;
    if (r_sign[e] > 0)
      fp[r_target[e]] += gblock[e];
    else
      fp[r_target[e]] = std::max(0.0, fp[r_target[e]] - gblock[e]);
  }
  audit_flow(out, fp);
#ifndef NDEBUG
  if (shortcut_bfs(out, fp).shortest_augmenting < 2 * ell + 3)
    throw internal_error("inc_len: augmenting path length did not grow");
#endif
  return {std::move(out), std::move(fp)};
}

}  // namespace

std::pair<HandledGraph, Flow> inc_len(int ell, const HandledGraph& g,
                                      const Flow& f) {
  return inc_len_impl(ell, g, f, shortcut_bfs(g, f));
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

NfpResult solve_nfp(const FlowInstance& inst, double eps, double phi,
                    const Flow* warm_start, const HandledGraph* start_graph) {
  if (!(eps > 0)) throw argument_error("solve_nfp: eps must be positive");
  if (!(phi > 0)) throw argument_error("solve_nfp: phi must be positive");

  NfpResult result;
  if (inst.gamma <= 0.0) {
    // All demands vanish: the zero flow with S' = S is a valid witness.
    result.f.assign(inst.edges.size(), 0.0);
    std::vector<char> in_cut(inst.n, 0);
    for (int v = 0; v < inst.n; ++v)
      if (inst.is_source(v)) {
        result.cut.sources.push_back(v);
        in_cut[v] = 1;
      }
    auto reached = reach_forward(inst, in_cut);
    for (int v = 0; v < inst.n; ++v)
      if (inst.is_sink(v) && reached[v]) result.cut.sinks_reachable.push_back(v);
    ++g_witness_checks;
    return result;
  }

  HandledGraph g =
      start_graph ? *start_graph : HandledGraph::trivial(inst);
  Flow f(g.edges.size(), 0.0);
  if (warm_start) {
    if (warm_start->size() != inst.edges.size())
      throw argument_error("solve_nfp: warm start sized for a different graph");
    f = *warm_start;
    audit_flow(g, f);
  }
  const int L = cut_rounds(inst, eps, phi);
  ShortcutLayers layers = shortcut_bfs(g, f);
  for (int ell = 0; ell <= L; ++ell) {
    if (layers.shortest_augmenting == ShortcutLayers::kUnreached)
      break;  // no augmenting path at any length: already maximum
    std::tie(g, f) = inc_len_impl(ell, g, f, layers);
    layers = shortcut_bfs(g, f);
  }
  result.cut = find_cut_impl(g, f, eps, phi, layers);
  std::vector<char> all(inst.edges.size(), 1);
  result.f = project_onto(g, f, all);
  result.value = flow_value(g, f);
  audit_flow(inst, result.f);
  return result;
}

Flow max_flow_approx(const FlowInstance& inst, double eps) {
  if (!(eps > 0)) throw argument_error("max_flow_approx: eps must be positive");
  if (inst.gamma != 1.0)
    throw argument_error("max_flow_approx: instance must have gamma == 1");
  HandledGraph g = HandledGraph::trivial(inst);
  Flow f(g.edges.size(), 0.0);
  const int L = static_cast<int>(std::floor(1.0 / eps));
  ShortcutLayers layers = shortcut_bfs(g, f);
  for (int ell = 0; ell <= L; ++ell) {
    if (layers.shortest_augmenting == ShortcutLayers::kUnreached)
      break;
    std::tie(g, f) = inc_len_impl(ell, g, f, layers);
    layers = shortcut_bfs(g, f);
  }
  std::vector<char> all(inst.edges.size(), 1);
  Flow out = project_onto(g, f, all);
  audit_flow(inst, out);
  return out;
}

// ---------------------------------------------------------------------------
// Aggregated-constraint oracle
// ---------------------------------------------------------------------------

std::vector<double> gamma_sweep(double phi, double eps, double supply_total) {
  std::vector<double> gammas{phi / 3.0};
  while (gammas.back() < supply_total)
    gammas.push_back(gammas.back() * (1.0 + eps));
  return gammas;
}

std::vector<double> aggregate_oracle(const RawFlowGraph& graph, double eps,
                                     double phi) {
  if (!(eps > 0 && eps < 1))
    throw argument_error("aggregate_oracle: eps must lie in (0, 1)");
  double a1 = std::accumulate(graph.a.begin(), graph.a.end(), 0.0);
  std::vector<double> y(graph.n, 0.0);
  if (a1 <= 0) return y;  // zero objective: y = 0 is optimal in Q
  if (!(phi > 0 && phi < a1 / 2))
    throw argument_error("aggregate_oracle: phi must lie in (0, |a|1/2)");

  auto [inst, lift] = normalize(graph, 1.0);
  std::vector<double> y_norm(inst.n, 0.0);

  if (inst.n > 0) {
    std::vector<double> gammas = gamma_sweep(phi, eps, inst.supply_total());

    std::vector<double> a_of(gammas.size(), 0.0), b_of(gammas.size(), 0.0);
    std::vector<std::vector<int>> cut_sources(gammas.size());
    FlowInstance scaled = inst;
    HandledGraph plain = HandledGraph::trivial(scaled);
    Flow warm;  // flows for smaller gamma stay valid as gamma grows
    for (size_t k = 0; k < gammas.size(); ++k) {
      scaled.gamma = gammas[k];
      auto res = solve_nfp(scaled, eps, phi, warm.empty() ? nullptr : &warm,
                           &plain);
      warm = res.f;
      cut_sources[k] = res.cut.sources;
      for (int s : res.cut.sources) a_of[k] += inst.a[s];
      for (int t : res.cut.sinks_reachable) b_of[k] += inst.b[t];
    }

    // Two-constraint LP over the sweep: max a.z with |z|_1 <= 1 and
    // b.z <= (1+eps)^2; an optimum lives on a support of size <= 2.
    const double cap = (1.0 + eps) * (1.0 + eps);
    double best = 0.0;
    std::vector<std::pair<int, double>> best_z;
    for (size_t k = 0; k < gammas.size(); ++k) {
      double zk = b_of[k] > cap ? cap / b_of[k] : 1.0;
      if (a_of[k] * zk > best) {
        best = a_of[k] * zk;
        best_z = {{static_cast<int>(k), zk}};
      }
    }
    for (size_t k = 0; k < gammas.size(); ++k)
      for (size_t l = k + 1; l < gammas.size(); ++l) {
        if (std::abs(b_of[k] - b_of[l]) < 1e-15) continue;
        double zk = (cap - b_of[l]) / (b_of[k] - b_of[l]);
        double zl = 1.0 - zk;
        if (zk < 0 || zk > 1 || zl < 0 || zl > 1) continue;
        double val = a_of[k] * zk + a_of[l] * zl;
        if (val > best) {
          best = val;
          best_z = {{static_cast<int>(k), zk}, {static_cast<int>(l), zl}};
        }
      }

    for (auto [k, zk] : best_z) {
      if (zk <= 0) continue;
      std::vector<char> seed(inst.n, 0);
      for (int s : cut_sources[k]) seed[s] = 1;
      auto reached = reach_forward(inst, seed);
      for (int v = 0; v < inst.n; ++v)
        if (reached[v]) y_norm[v] += zk;
    }

    // The monotone constraints hold exactly by construction; the aggregated
    // demand side must respect the (1+eps)^2 cap.
    for (auto [u, v] : inst.edges)
      if (y_norm[u] > y_norm[v] + 1e-12)
        throw internal_error("aggregate_oracle: monotonicity violated");
    double by = 0;
    for (int v = 0; v < inst.n; ++v) by += inst.b[v] * y_norm[v];
    if (by > cap + 1e-9)
      throw internal_error("aggregate_oracle: demand bound violated");
  }

  for (int v = 0; v < graph.n; ++v) {
    if (!std::isnan(lift.fixed_y[v]))
      y[v] = lift.fixed_y[v];
    else
      y[v] = y_norm[lift.norm_of[v]];
  }
  return y;
}

}  // namespace schedkit::flow
