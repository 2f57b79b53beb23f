#pragma once

#include <string>
#include <utility>
#include <vector>

#include "schedkit/common.hpp"

namespace schedkit::flow {

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

// Arbitrary DAG with per-vertex supplies a >= 0 and demands b >= 0, before
// normalization.
struct RawFlowGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> a;  // supplies
  std::vector<double> b;  // demands
};

// Normalized single-commodity instance: sources have no in-edges, sinks no
// out-edges, no source-sink edges, every vertex lies on some source-to-sink
// path, and a topological order is precomputed. Edge capacities are
// infinite; sink t accepts at most gamma * b_t.
struct FlowInstance {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> a, b;  // per vertex; a > 0 exactly on sources
  double gamma = 1.0;
  std::vector<int> topo_rank;               // position in a topological order
  std::vector<std::vector<int>> out_edges;  // edge ids
  std::vector<std::vector<int>> in_edges;

  bool is_source(int v) const { return a[v] > 0.0; }
  bool is_sink(int v) const { return b[v] > 0.0; }
  double supply_total() const;
  void finalize();  // adjacency + topological order; rejects cycles
};

// Record of the normalization so answers lift back to the raw graph.
struct LiftInfo {
  std::vector<int> norm_of;          // raw vertex -> normalized id, -1 if deleted
  std::vector<double> fixed_y;       // raw vertex -> fixed value, NaN if kept
  double offset = 0.0;               // sum of a_v over vertices fixed to 1
  std::vector<int> norm_edge_of;     // raw edge -> normalized edge id, -1 if gone
  std::vector<int> pendant_of;       // normalized id -> raw vertex it fronts, or -1
};

// Applies the w.l.o.g. reduction: delete vertices unreachable from the
// sources (y fixed 0) or not reaching the sinks (y fixed 1, supply moved to
// the offset), then attach pendant sources/sinks where an invariant fails.
std::pair<FlowInstance, LiftInfo> normalize(const RawFlowGraph& raw,
                                            double gamma);

// {"vertices":N, "edges":[[u,v],...], "supplies":[[s,a_s],...],
//  "demands":[[t,b_t],...], "gamma":g}
RawFlowGraph raw_flow_from_json(const std::string& text, double* gamma_out);
FlowInstance flow_instance_from_json(const std::string& text);
std::string to_json(const FlowInstance& inst);

// ---------------------------------------------------------------------------
// Handled graphs and flows
// ---------------------------------------------------------------------------

// Base graph plus copies of subgraphs ("handles") that share only sources
// and sinks with the base. Vertices 0..base->n-1 are the base; handle
// internals get fresh ids with pi pointing at their pre-image.
struct HandledGraph {
  const FlowInstance* base = nullptr;
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // base edges first, then handles
  std::vector<int> pi;                     // vertex -> base pre-image
  std::vector<int> edge_base;              // edge -> base edge pre-image
  std::vector<int> handle_of;              // edge -> handle id, -1 for base
  std::vector<std::vector<int>> out_edges, in_edges;
  std::vector<int> topo_vertices;          // by base topological rank

  static HandledGraph trivial(const FlowInstance& base);
  void build_adjacency();
  int n_handles = 0;
};

using Flow = std::vector<double>;  // per edge of the owning graph

double flow_value(const HandledGraph& g, const Flow& f);
double out_of(const HandledGraph& g, const Flow& f, int v);
double into(const HandledGraph& g, const Flow& f, int v);
// Conservation + capacity audit; throws internal_error on violation.
void audit_flow(const HandledGraph& g, const Flow& f);
void audit_flow(const FlowInstance& inst, const Flow& f);

// Sub-flow of f sent from the sources marked in from_sources (indicator over
// base vertices): equals f on their out-edges, 0 on other sources' edges,
// <= f everywhere. Computed by pushing along the topological order.
Flow subflow_from(const HandledGraph& g, const Flow& f,
                  const std::vector<char>& from_sources);
Flow subflow_to(const HandledGraph& g, const Flow& f,
                const std::vector<char>& to_sinks);

// Projection of f onto a subgraph (or copy) of the base graph given by a
// base-edge indicator. Result is indexed by base edge id. Support edges
// whose pre-image is missing from the target raise internal_error.
std::vector<double> project_onto(const HandledGraph& g, const Flow& f,
                                 const std::vector<char>& target_base_edges);

// ---------------------------------------------------------------------------
// Blocking flows
// ---------------------------------------------------------------------------

struct ResidualGraph {
  int n = 0;
  int source = 0, sink = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> cap;  // may be +infinity
};

// Flow g <= cap, conserved away from source/sink, such that every
// source-to-sink path has a saturated edge (re-verified by a residual DFS).
Flow blocking_flow(const ResidualGraph& r);

// ---------------------------------------------------------------------------
// Alternating-reachability layering ("shortcut" distances)
// ---------------------------------------------------------------------------

struct ShortcutLayers {
  // Layer of each base vertex: sources at alternating distance 2*layer,
  // sinks at 2*layer+1; kUnreached when no alternating path arrives.
  static constexpr int kUnreached = 1 << 29;
  std::vector<int> source_layer, sink_layer;
  int shortest_augmenting = kUnreached;  // odd length, or kUnreached
};

ShortcutLayers shortcut_bfs(const HandledGraph& g, const Flow& f);

// ---------------------------------------------------------------------------
// Witness cuts and the driver
// ---------------------------------------------------------------------------

struct WitnessCut {
  int ell_star = 0;
  std::vector<int> sources;          // S'
  std::vector<int> sinks_reachable;  // T(S') in the base graph
  double lhs = 0.0;                  // a(S \ S') + gamma b(T(S')) / (1+eps)
};

// Requires that the shortcut graph has no augmenting path of length at most
// 2L+1 for L = floor(log_{1+eps}(3|a|_1/phi)). Picks the layer prefix
// minimizing a(S^{>l}) + gamma b(T^{<=l})/(1+eps), ties toward smaller l,
// and checks the witness inequality against val(f) exactly.
WitnessCut find_cut(const HandledGraph& g, const Flow& f, double eps,
                    double phi);

// One round of augmentation: peels f by source/sink layers into fresh
// handles, then augments along a blocking flow so that the shortest
// augmenting path length grows from >= 2*ell+1 to >= 2*ell+3.
std::pair<HandledGraph, Flow> inc_len(int ell, const HandledGraph& g,
                                      const Flow& f);

struct NfpResult {
  Flow f;  // on the base graph
  double value = 0.0;
  WitnessCut cut;
};

// Approximate max flow with demand slack: returns f and S' with
// a(S \ S') + gamma b(T(S'))/(1+eps) <= val(f) + phi/3. warm_start, when
// given, must be a valid flow for the instance (any flow valid at a smaller
// gamma qualifies) and seeds the augmentation rounds.
NfpResult solve_nfp(const FlowInstance& inst, double eps, double phi,
                    const Flow* warm_start = nullptr,
                    const HandledGraph* start_graph = nullptr);

// val(f) >= (max flow)/(1+eps); requires gamma == 1.
Flow max_flow_approx(const FlowInstance& inst, double eps);

// ---------------------------------------------------------------------------
// Aggregated-constraint oracle over the monotone polytope
// Q = { y in [0,1]^V : y_v <= y_u for every edge (v,u) }:
// maximize a.y subject to b.y <= 1, within (eps, phi) slack. The returned y
// satisfies the monotone constraints exactly and b.y <= (1+eps)^2.
// ---------------------------------------------------------------------------

std::vector<double> aggregate_oracle(const RawFlowGraph& graph,
                                     double eps, double phi);

// Geometric demand-scale sweep used by the oracle: phi/3, then multiply by
// (1+eps) until the supply total is reached.
std::vector<double> gamma_sweep(double phi, double eps, double supply_total);

// Count of witness-cut inequality checks performed (each throws audit_error
// on violation, so a nonzero count certifies the audits ran and held).
long long witness_audit_count();
void reset_witness_audit_count();

}  // namespace schedkit::flow
