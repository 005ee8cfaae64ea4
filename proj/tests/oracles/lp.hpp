#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

// Dense two-phase tableau simplex with Bland's rule:
// minimize c.x subject to A x = b, x >= 0. Returns the optimal value.
inline double solve_lp(std::vector<std::vector<double>> a, std::vector<double> b, const std::vector<double>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  const std::size_t cols = n + m;
  const double eps = 1e-12;
  std::vector<std::vector<double>> t(m, std::vector<double>(cols + 1, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = sign * a[i][j];
    t[i][n + i] = 1.0;
    t[i][cols] = sign * b[i];
    basis[i] = n + i;
  }
  std::vector<double> z(cols + 1, 0.0);

  auto pivot = [&](std::size_t r, std::size_t col) {
    const double p = t[r][col];
    for (double& v : t[r]) v /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t[i][col] == 0.0) continue;
      const double f = t[i][col];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    const double f = z[col];
    for (std::size_t j = 0; j <= cols; ++j) z[j] -= f * t[r][j];
    basis[r] = col;
  };

  auto run = [&](std::size_t allowed) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j)
        if (z[j] < -eps) {
          enter = j;
          break;
        }
      if (enter == allowed) return;
      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] <= eps) continue;
        const double ratio = t[i][cols] / t[i][enter];
        if (ratio < best - eps || (std::abs(ratio - best) <= eps && leave < m && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m) throw std::runtime_error("lp: unbounded");
      pivot(leave, enter);
    }
  };

  // Phase 1: minimize the sum of the artificials.
  for (std::size_t j = 0; j <= cols; ++j) {
    if (j >= n && j < cols) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += t[i][j];
    z[j] = -s;
  }
  run(cols);
  if (-z[cols] > 1e-9) throw std::runtime_error("lp: infeasible");
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(t[i][j]) > 1e-9) {
        pivot(i, j);
        break;
      }
  }

  // Phase 2 over the original columns.
  for (std::size_t j = 0; j <= cols; ++j) {
    double s = j < n ? c[j] : 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) s -= c[basis[i]] * t[i][j];
    z[j] = s;
  }
  run(n);
  return -z[cols];
}

// Balanced transportation problem: supplies p, demands q, unit cost cost[i][j].
inline double transport_lp(const std::vector<double>& p, const std::vector<double>& q,
                           const std::vector<std::vector<double>>& cost) {
  const std::size_t r = p.size();
  const std::size_t k = q.size();
  std::vector<std::vector<double>> a(r + k, std::vector<double>(r * k, 0.0));
  std::vector<double> b(r + k);
  std::vector<double> c(r * k);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      a[i][i * k + j] = 1.0;
      a[r + j][i * k + j] = 1.0;
      c[i * k + j] = cost[i][j];
    }
  for (std::size_t i = 0; i < r; ++i) b[i] = p[i];
  for (std::size_t j = 0; j < k; ++j) b[r + j] = q[j];
  return solve_lp(a, b, c);
}

}  // namespace oracle
