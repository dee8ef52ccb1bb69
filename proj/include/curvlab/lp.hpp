#pragma once

#include <vector>

namespace curvlab {

/// maximize c.x subject to A x <= b, x >= 0, for b >= 0 (the origin is
/// feasible). Dense tableau simplex with Bland's rule.
struct LinearProgram {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;
};

enum class LpStatus { Optimal, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> x;
  double objective = 0;
  long pivots = 0;
};

LpSolution solve_lp(const LinearProgram& lp, long max_pivots = 1000000);

}  // namespace curvlab
