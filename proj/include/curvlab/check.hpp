#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace curvlab {

/// Outcome of one inequality checked at many points. `measured` and `bound`
/// describe the point with the smallest slack.
struct CheckResult {
  bool pass = true;
  double measured = 0;
  double bound = 0;
  double slack = std::numeric_limits<double>::infinity();
  std::int64_t evaluated = 0;
  std::int64_t violations = 0;
  std::vector<std::string> warnings;

  /// Records measured <= bound (with the given absolute tolerance).
  void record(double measured_value, double bound_value, double tol = 0) {
    ++evaluated;
    const double s = bound_value - measured_value;
    if (s < slack || evaluated == 1) {
      slack = s;
      measured = measured_value;
      bound = bound_value;
    }
    if (!(measured_value <= bound_value + tol)) {
      ++violations;
      pass = false;
    }
  }

  /// Like record(), but the verdict comes from an exact comparison.
  void record_exact(double measured_value, double bound_value, bool ok) {
    ++evaluated;
    const double s = bound_value - measured_value;
    if (s < slack || evaluated == 1) {
      slack = s;
      measured = measured_value;
      bound = bound_value;
    }
    if (!ok) {
      ++violations;
      pass = false;
    }
  }

  void merge(const CheckResult& other) {
    if (other.evaluated == 0) {
      warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
      return;
    }
    if (evaluated == 0 || other.slack < slack) {
      slack = other.slack;
      measured = other.measured;
      bound = other.bound;
    }
    evaluated += other.evaluated;
    violations += other.violations;
    pass = pass && other.pass;
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  }
};

/// Known answer to "is every edge curvature nonnegative"; computed when empty.
struct Hypothesis {
  std::optional<bool> nonneg;
};

}  // namespace curvlab
