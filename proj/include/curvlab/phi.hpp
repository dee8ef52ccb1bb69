#pragma once

#include <string>

namespace curvlab {

enum class PhiBranch {
  Exponential,  ///< λ > 0
  Quadratic,    ///< -1/(4dR) < λ <= 0
  Clamp,        ///< λ <= -1/(4dR): φ(t) = min(t, R)
};

const char* to_string(PhiBranch b);

/// Concave nondecreasing reparameterization, constant on [R, ∞). Derivatives
/// at t = R are the left limits.
struct PhiFunction {
  PhiBranch branch = PhiBranch::Clamp;
  double lambda = 0;
  double d = 1;
  double R = 1;

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double d3(double t) const;

  /// λφ' + φ''/(4d) on [0, R]: exact for the exponential branch, an upper
  /// bound for the quadratic branch.
  double ode_target() const;
  /// c with Δ(φ∘f)(x) <= -c 1(f(x) <= R) off K; λ/(2e^{4dλR} - 2), or
  /// 1/(8dR) at λ = 0.
  double conclusion_rate() const;
};

/// Throws InvalidInput unless R >= 1 and d >= 1.
PhiFunction phi_build(double lambda, double d, double R);

struct PhiCheck {
  bool pass = true;
  bool concave = true;
  bool monotone = true;
  bool slope = true;       ///< φ' <= 1 + 1e-9
  bool third = true;       ///< φ''' >= -1e-9 on [0, R)
  bool ode = true;
  bool flat_beyond = true;
  double ode_residual = 0;  ///< worst |λφ' + φ''/(4d) - target| (exponential) or excess (quadratic)
  std::string detail;
};

PhiCheck phi_check(const PhiFunction& phi, int grid = 10000, double tol = 1e-9);

}  // namespace curvlab
