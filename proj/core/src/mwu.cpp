#include "schedkit/mwu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace schedkit::mwu {

std::vector<double> solve_packing(const PackingProblem& problem, double eps,
                                  double phi, const MwuOptions& options,
                                  MwuStats* stats) {
  if (!(eps > 0.0 && eps < 1.0))
    throw argument_error("solve_packing: eps must lie in (0, 1)");
  if (!(phi > 0.0)) throw argument_error("solve_packing: phi must be positive");
  if (!problem.oracle) throw argument_error("solve_packing: oracle not set");

  const int n = problem.n_vars;
  const int m = problem.P.n_rows();
  // rho only needs to be >= ln(m)/eps^2; the max() guard keeps the
  // exponential update meaningful when m = 1.
  const double rho = std::max(std::log(std::max(m, 1)), 1.0) / (eps * eps);
  const long long iter_cap = static_cast<long long>(
      options.iter_constant * std::max(m, 1) *
          std::max(std::log(std::max(m, 1)), 1.0) / (eps * eps)) + 1;

  std::vector<double> x(n, 0.0), u(m, 1.0), px(m, 0.0), b(n, 0.0);
  double t = 0.0;
  long long iters = 0;
  while (t < 1.0) {
    if (++iters > iter_cap)
      throw internal_error(
          "solve_packing: iteration cap exceeded (oracle contract violation?)");
    double u_sum = 0.0;
    for (double v : u) u_sum += v;
    std::fill(b.begin(), b.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      const double w = u[i] / u_sum;
      for (auto [c, v] : problem.P.rows[i]) b[c] += w * v;
    }
    std::vector<double> y = problem.oracle(b, eps, phi);
    if (static_cast<int>(y.size()) != n)
      throw internal_error("solve_packing: oracle returned wrong dimension");
    if (stats) ++stats->oracle_calls;

    // Step size: the most violated row may gain at most 1/rho in Px.
    auto py = problem.P.times(y);
    double delta = 1.0 - t;
    for (int i = 0; i < m; ++i)
      if (py[i] > 0.0) delta = std::min(delta, 1.0 / (rho * py[i]));
    if (!(delta > 0.0))
      throw internal_error("solve_packing: non-positive step size");
    if (delta >= 1.0 - t) {
      delta = 1.0 - t;
      t = 1.0;  // clamp exactly
    } else {
      t += delta;
    }
    for (int j = 0; j < n; ++j) x[j] += delta * y[j];
    for (int i = 0; i < m; ++i) {
      u[i] *= std::exp(delta * eps * rho * py[i]);
      px[i] += delta * py[i];
    }
  }
  if (stats) stats->iterations = iters;

  if (options.check_weights) {
    // u_i must track exp(eps * rho * (Px)_i) up to small relative drift.
    auto fresh = problem.P.times(x);
    for (int i = 0; i < m; ++i) {
      double expect = std::exp(eps * rho * fresh[i]);
      if (std::abs(u[i] - expect) > 1e-7 * std::max(u[i], expect))
        throw internal_error("solve_packing: weight-consistency drift");
    }
  }

  // Post-hoc guarantee, recomputed from the returned x.
  const double bound = (1.0 + eps) * (1.0 + eps) + eps;
  for (double v : problem.P.times(x))
    if (v > bound + kFeasTol)
      throw internal_error("solve_packing: packing bound violated");
  return x;
}

}  // namespace schedkit::mwu
