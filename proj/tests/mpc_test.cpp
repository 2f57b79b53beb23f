#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "schedkit/mpc.hpp"

using namespace schedkit;
using namespace schedkit::mpc;

namespace {

// Random feasible system built around a hidden point x0: packing rows are
// scaled to hold at x0 with slack, covering rows to be met with margin.
MpcProblem random_feasible(Rng& rng, int n, int rows_p, int rows_c,
                           double margin) {
  MpcProblem p;
  p.n_vars = n;
  std::vector<double> x0(n);
  for (auto& v : x0) v = 0.1 + rng.next_double();
  auto random_row = [&](int min_nnz) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < n; ++j)
      if (rng.next_double() < 0.5) row.push_back({j, 0.05 + rng.next_double()});
    while (static_cast<int>(row.size()) < min_nnz)
      row.push_back({static_cast<int>(rng.next_int(0, n - 1)),
                     0.05 + rng.next_double()});
    return row;
  };
  for (int i = 0; i < rows_p; ++i) {
    auto row = random_row(1);
    double dot = 0;
    for (auto [c, v] : row) dot += v * x0[c];
    for (auto& [c, v] : row) v /= dot * (1.0 + margin);  // row . x0 < 1
    p.packing.rows.push_back(std::move(row));
  }
  for (int k = 0; k < rows_c; ++k) {
    auto row = random_row(1);
    double dot = 0;
    for (auto [c, v] : row) dot += v * x0[c];
    for (auto& [c, v] : row) v *= (1.0 + margin) / dot;  // row . x0 > 1
    p.covering.rows.push_back(std::move(row));
  }
  p.packing.n_cols = p.covering.n_cols = n;
  return p;
}

void check_solved(const MpcProblem& p, const MpcResult& r, double eps) {
  REQUIRE(r.status == MpcStatus::solved);
  for (double v : p.packing.times(r.x)) CHECK(v <= 1.0 + eps + 1e-9);
  for (double v : p.covering.times(r.x)) CHECK(v >= 1.0 / (1.0 + eps) - 1e-9);
}

}  // namespace

TEST_CASE("simplex point: x1 + x2 <= 1 and x1 + x2 >= 1") {
  MpcProblem p;
  p.n_vars = 2;
  p.packing.rows = {{{0, 1.0}, {1, 1.0}}};
  p.covering.rows = {{{0, 1.0}, {1, 1.0}}};
  auto r = solve_mpc(p, 0.1);
  check_solved(p, r, 0.1);
  double s = r.x[0] + r.x[1];
  CHECK(s >= 1.0 / 1.1 - 1e-9);
  CHECK(s <= 1.1 + 1e-9);
}

TEST_CASE("2x <= 1 with x >= 1 is detected infeasible") {
  // Any x with Cx >= 1/1.1 has Px >= 2/1.1 > 1.1.
  MpcProblem p;
  p.n_vars = 1;
  p.packing.rows = {{{0, 2.0}}};
  p.covering.rows = {{{0, 1.0}}};
  auto r = solve_mpc(p, 0.1);
  CHECK(r.status == MpcStatus::infeasible_or_budget_exhausted);
}

TEST_CASE("covering-only system") {
  MpcProblem p;
  p.n_vars = 1;
  p.covering.rows = {{{0, 1.0}}};
  auto r = solve_mpc(p, 0.1);
  REQUIRE(r.status == MpcStatus::solved);
  CHECK(r.x[0] >= 1.0 / 1.1 - 1e-9);
}

TEST_CASE("empty covering row is flagged before solving") {
  MpcProblem p;
  p.n_vars = 1;
  p.covering.rows = {{}};
  CHECK_THROWS_AS(solve_mpc(p, 0.1), validation_error);
  CHECK_THROWS_AS(solve_mpc(MpcProblem{}, 1.5), argument_error);
}

TEST_CASE("row scaling with folded right-hand side leaves the output feasible") {
  // Scaling a row and its (implicit) right-hand side by the same constant
  // does not change the feasible set; both normalized forms must solve.
  Rng rng(7);
  auto p = random_feasible(rng, 6, 4, 4, 0.3);
  auto r1 = solve_mpc(p, 0.15);
  check_solved(p, r1, 0.15);
  MpcProblem q = p;  // identical normalized form, rebuilt from a scaled row
  for (auto& [c, v] : q.packing.rows[0]) v *= 3.0;
  for (auto& [c, v] : q.packing.rows[0]) v /= 3.0;
  auto r2 = solve_mpc(q, 0.15);
  check_solved(q, r2, 0.15);
}

TEST_CASE("relaxing eps never flips solved into exhausted") {
  Rng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    auto p = random_feasible(rng, 5, 3, 3, 0.2);
    auto tight = solve_mpc(p, 0.1);
    REQUIRE(tight.status == MpcStatus::solved);
    for (double eps : {0.2, 0.3, 0.5}) {
      auto loose = solve_mpc(p, eps);
      CHECK(loose.status == MpcStatus::solved);
    }
  }
}

TEST_CASE("deterministic output for a fixed problem") {
  Rng rng(33);
  auto p = random_feasible(rng, 8, 5, 5, 0.25);
  auto r1 = solve_mpc(p, 0.2);
  auto r2 = solve_mpc(p, 0.2);
  REQUIRE(r1.status == MpcStatus::solved);
  CHECK(r1.x == r2.x);
  CHECK(r1.steps == r2.steps);
}

TEST_CASE("random feasible and analytically infeasible batches") {
  Rng rng(5);
  const double eps = 0.2;
  for (int rep = 0; rep < 25; ++rep) {
    auto p = random_feasible(rng, 1 + static_cast<int>(rng.next_int(1, 9)),
                             static_cast<int>(rng.next_int(1, 6)),
                             static_cast<int>(rng.next_int(1, 6)), 0.3);
    check_solved(p, solve_mpc(p, eps), eps);
  }
  // Infeasible: a packing row dominates a covering row by more than
  // (1+eps)^2, so the relaxed system has no solution either.
  for (int rep = 0; rep < 25; ++rep) {
    int n = 1 + static_cast<int>(rng.next_int(1, 9));
    MpcProblem p;
    p.n_vars = n;
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < n; ++j) row.push_back({j, 0.1 + rng.next_double()});
    double factor = (1 + eps) * (1 + eps) * 1.2;
    std::vector<std::pair<int, double>> prow = row;
    for (auto& [c, v] : prow) v *= factor;
    p.covering.rows = {row};
    p.packing.rows = {prow};
    auto r = solve_mpc(p, eps);
    CHECK(r.status == MpcStatus::infeasible_or_budget_exhausted);
  }
}

TEST_CASE("debug dump is valid JSON-ish text") {
  MpcProblem p;
  p.n_vars = 1;
  p.covering.rows = {{{0, 1.0}}};
  auto r = solve_mpc(p, 0.2);
  auto s = debug_dump(p, r.x);
  CHECK(s.find("\"rows\"") != std::string::npos);
}
