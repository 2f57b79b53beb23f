#include "schedkit/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace schedkit::mpc {

void MpcProblem::validate() const {
  auto check = [&](const SparseMatrix& mat, const char* what) {
    for (const auto& row : mat.rows)
      for (auto [c, v] : row) {
        if (c < 0 || c >= n_vars)
          throw validation_error(std::string(what) + " column index out of range");
        if (v < 0.0 || !std::isfinite(v))
          throw validation_error(std::string(what) + " entries must be non-negative");
      }
  };
  check(packing, "packing");
  check(covering, "covering");
  for (const auto& row : covering.rows)
    if (row.empty())
      throw validation_error("empty covering row (trivially infeasible)");
}

namespace {

// Keeps the exponential weights inside double range; only ratios matter, so
// a common log-shift is folded into every weight and every future update.
void apply_shift(std::vector<double>& w, double& sum, double log_factor,
                 const std::vector<char>* active) {
  const double f = std::exp(log_factor);
  sum = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] *= f;
    if (!active || (*active)[i]) sum += w[i];
  }
}

}  // namespace

MpcResult solve_mpc(const MpcProblem& problem, double eps,
                    const MpcOptions& options) {
  if (!(eps > 0.0 && eps < 1.0))
    throw argument_error("solve_mpc: eps must lie in (0, 1)");
  problem.validate();

  const int n = problem.n_vars;
  const int m_pack = problem.packing.n_rows();
  const int m_cover = problem.covering.n_rows();
  const double log_rows = std::log(std::max(problem.n_rows(), 2));
  const long long budget = static_cast<long long>(
      options.budget_constant * static_cast<double>(problem.nonzeros()) *
          log_rows / (eps * eps)) + 1;

  MpcResult result;
  if (m_cover == 0) {  // x = 0 satisfies an all-packing system
    result.status = MpcStatus::solved;
    result.x.assign(n, 0.0);
    return result;
  }

  // Internal accuracy; the coupling argument loses a constant factor, so run
  // tighter than the requested eps and accept when max(Px)/min(Cx) fits in
  // (1+eps)^2 after scaling. The covering target `level` balances the
  // additive ln(rows)/eps0 smoothing loss against the step budget.
  const double eps0 = eps / 4.0;
  const double level = 7.0 * log_rows / (eps * eps);

  auto cols_pack = problem.packing.columns(n);
  auto cols_cover = problem.covering.columns(n);
  std::vector<double> col_max_pack(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (auto [i, v] : cols_pack[j])
      col_max_pack[j] = std::max(col_max_pack[j], v);

  std::vector<double> x(n, 0.0), px(m_pack, 0.0), cx(m_cover, 0.0);
  // y_i = exp(eps0 * px_i - y_shift); z_k = exp(-eps0 * cx_k + z_shift).
  std::vector<double> y(m_pack, 1.0), z(m_cover, 1.0);
  double y_shift = 0.0, z_shift = 0.0;
  std::vector<char> active(m_cover, 1);
  double y_sum = m_pack, z_sum = m_cover;
  int n_active = m_cover;

  long long steps = 0;
  int cursor = 0, scanned = 0;
  bool gave_up = false;
  while (n_active > 0) {
    if (steps >= budget) {
      gave_up = true;
      break;
    }
    // Progress test for the cursor column j: its packing gradient, relative
    // to the total packing weight, must not exceed the covering one.
    int j = cursor;
    double grad_pack = 0, grad_cover = 0, col_max = col_max_pack[j];
    for (auto [i, v] : cols_pack[j]) grad_pack += y[i] * v;
    for (auto [k, v] : cols_cover[j])
      if (active[k]) {
        grad_cover += z[k] * v;
        col_max = std::max(col_max, v);
      }
    bool good = grad_cover > 0.0 &&
                grad_pack * z_sum <= (1.0 + eps0) * grad_cover * y_sum;
    if (!good) {
      cursor = (cursor + 1) % n;
      if (++scanned >= n) {
        gave_up = true;  // no coordinate can progress: infeasible
        break;
      }
      continue;
    }
    scanned = 0;
    ++steps;
    // Step so that no row moves by more than one unit.
    const double delta = 1.0 / col_max;
    x[j] += delta;
    for (auto [i, v] : cols_pack[j]) {
      px[i] += delta * v;
      y_sum -= y[i];
      y[i] = std::exp(eps0 * px[i] - y_shift);
      y_sum += y[i];
    }
    for (auto [k, v] : cols_cover[j]) {
      if (!active[k]) continue;
      cx[k] += delta * v;
      z_sum -= z[k];
      if (cx[k] >= level) {
        active[k] = 0;
        --n_active;
      } else {
        z[k] = std::exp(-eps0 * cx[k] + z_shift);
        z_sum += z[k];
      }
    }
    if (y_sum > 1e250) {
      y_shift += 460.0;  // ~ ln(1e200)
      apply_shift(y, y_sum, -460.0, nullptr);
    }
    if (n_active > 0 && z_sum < 1e-250) {
      z_shift += 460.0;
      apply_shift(z, z_sum, 460.0, &active);
    }
  }

  result.steps = steps;
  if (gave_up) return result;

  double worst_pack = 0.0;
  for (double v : px) worst_pack = std::max(worst_pack, v);
  double worst_cover = std::numeric_limits<double>::max();
  for (double v : cx) worst_cover = std::min(worst_cover, v);

  const double one_eps = 1.0 + eps;
  if (worst_pack > one_eps * one_eps * worst_cover * (1.0 + kFeasTol))
    return result;  // converged but outside the guarantee: treat as failed

  const double scale = worst_pack <= one_eps * worst_cover
                           ? 1.0 / worst_cover
                           : one_eps / worst_pack;
  for (double& v : x) v *= scale;

  // Re-verify from scratch; the incremental accumulators are not trusted.
  auto pv = problem.packing.times(x);
  auto cv = problem.covering.times(x);
  for (double v : pv)
    if (v > one_eps + kFeasTol)
      throw internal_error("solve_mpc: packing violation after scaling");
  for (double v : cv)
    if (v < 1.0 / one_eps - kFeasTol)
      throw internal_error("solve_mpc: covering violation after scaling");

  result.status = MpcStatus::solved;
  result.x = std::move(x);
  return result;
}

std::string debug_dump(const MpcProblem& problem,
                       const std::vector<double>& x) {
  nlohmann::json j;
  auto rows_of = [](const SparseMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : m.rows) {
      nlohmann::json row = nlohmann::json::array();
      for (auto [c, v] : r) row.push_back({c, v});
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["packing"] = {{"rows", rows_of(problem.packing)}};
  j["covering"] = {{"rows", rows_of(problem.covering)}};
  j["x"] = x;
  return j.dump();
}

}  // namespace schedkit::mpc
