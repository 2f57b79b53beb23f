#pragma once
#include <algorithm>

#include <utility>
#include <vector>

namespace schedkit {

// Row-major sparse non-negative matrix. Rows are (column, value) lists.
struct SparseMatrix {
  int n_cols = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;

  int n_rows() const { return static_cast<int>(rows.size()); }

  long long nonzeros() const {
    long long n = 0;
    for (const auto& r : rows) n += static_cast<long long>(r.size());
    return n;
  }

  void add(int row, int col, double value) {
    if (row >= n_rows()) rows.resize(row + 1);
    rows[row].push_back({col, value});
  }

  std::vector<double> times(const std::vector<double>& x) const {
    std::vector<double> out(rows.size(), 0.0);
    for (size_t i = 0; i < rows.size(); ++i)
      for (auto [c, v] : rows[i]) out[i] += v * x[c];
    return out;
  }

  // Column-major view: per column, the (row, value) incidences.
  std::vector<std::vector<std::pair<int, double>>> columns(int cols_hint) const {
    std::vector<std::vector<std::pair<int, double>>> cols(
        std::max(cols_hint, n_cols));
    for (int i = 0; i < n_rows(); ++i)
      for (auto [c, v] : rows[i]) cols[c].push_back({i, v});
    return cols;
  }
};

}  // namespace schedkit
