#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "schedkit/matching.hpp"

using namespace schedkit;
using namespace schedkit::matching;

namespace {

// Exhaustive check for a matching covering the whole left side.
bool coverable(const Bipartite& h) {
  std::vector<int> use(h.n_right, -1);
  auto rec = [&](auto&& self, int u) -> bool {
    if (u == h.n_left) return true;
    for (int v : h.adj[u]) {
      if (use[v] >= 0) continue;
      use[v] = u;
      if (self(self, u + 1)) return true;
      use[v] = -1;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace

TEST_CASE("match_expanding covers the left side") {
  Bipartite h;
  h.n_left = 2;
  h.n_right = 3;
  h.adj = {{0, 1}, {1, 2}};
  auto m = match_expanding(h, 0.5);
  CHECK(m[0] != m[1]);
  CHECK((m[0] == 0 || m[0] == 1));
  CHECK((m[1] == 1 || m[1] == 2));
}

TEST_CASE("match_expanding reports expansion violations") {
  Bipartite h;
  h.n_left = 2;
  h.n_right = 1;
  h.adj = {{0}, {0}};
  CHECK_THROWS_AS(match_expanding(h, 0.5), expansion_error);
}

TEST_CASE("match_expanding: singleton") {
  Bipartite h;
  h.n_left = 1;
  h.n_right = 1;
  h.adj = {{0}};
  CHECK(match_expanding(h, 0.5) == std::vector<int>{0});
}

TEST_CASE("match_expanding covers exactly when brute force can (|S| <= 8)") {
  // For |S| <= 8 and eps <= 0.35 the phase budget
  // floor(log_{1+eps}|S|) + 2 >= |S| already reaches a maximum matching, so
  // coverage must coincide with brute-force coverability.
  Rng rng(31);
  int covered = 0;
  for (int rep = 0; rep < 250; ++rep) {
    Bipartite h;
    h.n_left = 1 + static_cast<int>(rng.next_int(0, 7));
    h.n_right = h.n_left + static_cast<int>(rng.next_int(0, 3));
    h.adj.assign(h.n_left, {});
    for (int u = 0; u < h.n_left; ++u)
      for (int v = 0; v < h.n_right; ++v)
        if (rng.next_double() < 0.45) h.adj[u].push_back(v);
    bool expect = coverable(h);
    try {
      auto m = match_expanding(h, 0.35);
      CHECK(expect);
      std::vector<char> used(h.n_right, 0);
      for (int u = 0; u < h.n_left; ++u) {
        CHECK(std::count(h.adj[u].begin(), h.adj[u].end(), m[u]) == 1);
        CHECK(!used[m[u]]);
        used[m[u]] = 1;
      }
      ++covered;
    } catch (const expansion_error&) {
      CHECK(!expect);
    }
  }
  CHECK(covered > 100);
}

TEST_CASE("machine_grouping: two jobs, eps = 1 gives two groups") {
  // Jobs (p, x) = (5, 0.6) and (3, 0.4): masses (0, 0.6) and (0.6, 1.0),
  // group boundary at 0.5, so group 1 = {j0} and group 2 = {j0, j1}.
  auto groups = machine_grouping({5, 3}, {0.6, 0.4}, 1.0);
  CHECK(groups == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("machine_grouping: touching boundary creates no edge") {
  // With eps = 1 the group boundary sits at 0.5 exactly; a job whose mass
  // interval ends there stays out of the next group.
  auto groups = machine_grouping({5, 3}, {0.5, 0.5}, 1.0);
  CHECK(groups == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("round_by_grouping: integral x reads off the assignment") {
  std::vector<std::pair<int, int>> edges = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  std::vector<double> p = {4, 9, 2, 7}, x = {1, 0, 0, 1};
  auto sigma = round_by_grouping(2, 2, edges, p, x, 0.5);
  CHECK(sigma == std::vector<int>{0, 1});
}

TEST_CASE("round_by_grouping: single split job lands on a support machine") {
  std::vector<std::pair<int, int>> edges = {{0, 0}, {0, 1}};
  std::vector<double> p = {6, 6}, x = {0.5, 0.5};
  auto sigma = round_by_grouping(1, 2, edges, p, x, 0.5);
  CHECK((sigma[0] == 0 || sigma[0] == 1));
}

TEST_CASE("round_by_grouping: per-machine bound holds on random inputs") {
  Rng rng(8);
  for (int rep = 0; rep < 60; ++rep) {
    int n = 1 + static_cast<int>(rng.next_int(0, 6));
    int m = 1 + static_cast<int>(rng.next_int(0, 3));
    std::vector<std::pair<int, int>> edges;
    std::vector<double> p, x;
    for (int j = 0; j < n; ++j) {
      std::vector<double> mass;
      std::vector<int> machines;
      for (int i = 0; i < m; ++i)
        if (i == j % m || rng.next_double() < 0.5) {
          machines.push_back(i);
          mass.push_back(0.05 + rng.next_double());
        }
      double total = std::accumulate(mass.begin(), mass.end(), 0.0);
      for (size_t k = 0; k < machines.size(); ++k) {
        edges.push_back({j, machines[k]});
        p.push_back(rng.next_int(1, 9));
        x.push_back(mass[k] / total);
      }
    }
    double eps = 0.2 + 0.8 * rng.next_double();
    // The audit inside round_by_grouping would throw on a violation.
    auto sigma = round_by_grouping(n, m, edges, p, x, eps);
    CHECK(static_cast<int>(sigma.size()) == n);
  }
}

TEST_CASE("round_by_grouping rejects unscaled inputs") {
  std::vector<std::pair<int, int>> edges = {{0, 0}};
  std::vector<double> p = {1}, x = {0.7};
  CHECK_THROWS_AS(round_by_grouping(1, 1, edges, p, x, 0.5), argument_error);
}
