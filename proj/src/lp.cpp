#include "curvlab/lp.hpp"

#include <cmath>

#include "curvlab/core.hpp"

namespace curvlab {

LpSolution solve_lp(const LinearProgram& lp, long max_pivots) {
  const std::size_t m = lp.a.size();
  const std::size_t n = lp.c.size();
  if (lp.b.size() != m) throw InvalidInput("LP: b has the wrong length");
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.a[i].size() != n) throw InvalidInput("LP: row has the wrong length");
    if (lp.b[i] < 0) throw InvalidInput("LP: origin must be feasible (b >= 0)");
  }
  constexpr double eps = 1e-11;

  // tableau rows: [A | I | b], objective row z: [-c | 0 | 0]
  const std::size_t cols = n + m + 1;
  std::vector<double> t((m + 1) * cols, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * cols + c]; };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) at(i, j) = lp.a[i][j];
    at(i, n + i) = 1;
    at(i, cols - 1) = lp.b[i];
  }
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -lp.c[j];
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  LpSolution sol;
  for (;;) {
    // Bland: lowest-index entering column with negative reduced cost
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (at(m, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) {
      sol.status = LpStatus::Optimal;
      break;
    }
    std::size_t leave = m;
    double best = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = at(i, enter);
      if (a <= eps) continue;
      const double ratio = at(i, cols - 1) / a;
      if (leave == m || ratio < best - eps || (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }
    if (++sol.pivots > max_pivots) return sol;

    const double piv = at(leave, enter);
    for (std::size_t c = 0; c < cols; ++c) at(leave, c) /= piv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) at(r, c) -= f * at(leave, c);
      at(r, enter) = 0.0;
    }
    basis[leave] = enter;
  }

  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = at(i, cols - 1);
  sol.objective = 0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.c[j] * sol.x[j];
  return sol;
}

}  // namespace curvlab
