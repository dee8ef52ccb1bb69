#include "curvlab/phi.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/core.hpp"

namespace curvlab {

const char* to_string(PhiBranch b) {
  switch (b) {
    case PhiBranch::Exponential: return "exponential";
    case PhiBranch::Quadratic: return "quadratic";
    case PhiBranch::Clamp: return "clamp";
  }
  return "?";
}

PhiFunction phi_build(double lambda, double d, double R) {
  if (!(R >= 1)) throw InvalidInput("phi: R must be at least 1");
  if (!(d >= 1)) throw InvalidInput("phi: d must be at least 1");
  if (!std::isfinite(lambda)) throw InvalidInput("phi: lambda must be finite");
  PhiFunction p;
  p.lambda = lambda;
  p.d = d;
  p.R = R;
  if (lambda > 0) p.branch = PhiBranch::Exponential;
  else if (lambda > -1 / (4 * d * R)) p.branch = PhiBranch::Quadratic;
  else p.branch = PhiBranch::Clamp;
  return p;
}

// exponential branch: a = 4λd, D = 1 - e^{-aR}
//   φ(t) = (1 - e^{-at} - a t e^{-aR}) / (a D)
//   φ'(t) = (e^{-at} - e^{-aR}) / D,  φ'' = -a e^{-at} / D,  φ''' = a² e^{-at} / D

double PhiFunction::value(double t) const {
  t = std::clamp(t, 0.0, R);
  switch (branch) {
    case PhiBranch::Exponential: {
      const double a = 4 * lambda * d;
      const double D = -std::expm1(-a * R);
      return (-std::expm1(-a * t) - a * t * std::exp(-a * R)) / (a * D);
    }
    case PhiBranch::Quadratic: return (2 * R * t - t * t) / (2 * R);
    case PhiBranch::Clamp: return t;
  }
  return 0;
}

double PhiFunction::d1(double t) const {
  if (t > R) return 0;
  t = std::max(t, 0.0);
  switch (branch) {
    case PhiBranch::Exponential: {
      const double a = 4 * lambda * d;
      return (std::exp(-a * t) - std::exp(-a * R)) / -std::expm1(-a * R);
    }
    case PhiBranch::Quadratic: return (R - t) / R;
    case PhiBranch::Clamp: return 1;
  }
  return 0;
}

double PhiFunction::d2(double t) const {
  if (t > R) return 0;
  t = std::max(t, 0.0);
  switch (branch) {
    case PhiBranch::Exponential: {
      const double a = 4 * lambda * d;
      return -a * std::exp(-a * t) / -std::expm1(-a * R);
    }
    case PhiBranch::Quadratic: return -1 / R;
    case PhiBranch::Clamp: return 0;
  }
  return 0;
}

double PhiFunction::d3(double t) const {
  if (t > R || branch != PhiBranch::Exponential) return 0;
  t = std::max(t, 0.0);
  const double a = 4 * lambda * d;
  return a * a * std::exp(-a * t) / -std::expm1(-a * R);
}

double PhiFunction::ode_target() const {
  switch (branch) {
    case PhiBranch::Exponential: return -lambda / std::expm1(4 * lambda * d * R);
    case PhiBranch::Quadratic: return -1 / (4 * d * R);
    case PhiBranch::Clamp: return lambda;
  }
  return 0;
}

double PhiFunction::conclusion_rate() const {
  if (lambda == 0) return 1 / (8 * d * R);
  return lambda / (2 * std::expm1(4 * d * lambda * R));
}

PhiCheck phi_check(const PhiFunction& phi, int grid, double tol) {
  if (grid < 3) throw InvalidInput("phi_check: grid needs at least 3 points");
  PhiCheck c;
  const double R = phi.R;
  const double h = R / (grid - 1);
  auto note = [&](bool& flag, const std::string& what, double t) {
    if (flag) {
      flag = false;
      if (c.detail.empty()) c.detail = what + " fails at t = " + std::to_string(t);
    }
  };
  for (int i = 0; i < grid; ++i) {
    const double t = i == grid - 1 ? R : i * h;
    const double v = phi.value(t);
    const double p1 = phi.d1(t);
    const double p2 = phi.d2(t);
    if (p2 > tol) note(c.concave, "concavity", t);
    if (i > 0 && i < grid - 1) {
      const double second = phi.value(t - h) + phi.value(t + h) - 2 * v;
      if (second > tol) note(c.concave, "discrete concavity", t);
    }
    if (p1 < -tol || (i > 0 && v < phi.value(t - h) - tol)) note(c.monotone, "monotonicity", t);
    if (p1 > 1 + tol) note(c.slope, "slope bound", t);
    if (i < grid - 1 && phi.d3(t) < -tol) note(c.third, "third derivative sign", t);

    const double lhs = phi.lambda * p1 + p2 / (4 * phi.d);
    if (phi.branch == PhiBranch::Exponential) {
      const double r = std::abs(lhs - phi.ode_target());
      c.ode_residual = std::max(c.ode_residual, r);
      if (!(r < tol)) note(c.ode, "ODE identity", t);
    } else if (phi.branch == PhiBranch::Quadratic) {
      const double r = lhs - phi.ode_target();
      c.ode_residual = std::max(c.ode_residual, r);
      if (r > tol) note(c.ode, "ODE bound", t);
    }
  }
  const double top = phi.value(R);
  for (double t : {R + 0.5, R + 1, 2 * R, 10 * R})
    if (phi.value(t) != top || phi.d1(t) != 0) note(c.flat_beyond, "constancy beyond R", t);
  c.pass = c.concave && c.monotone && c.slope && c.third && c.ode && c.flat_beyond;
  return c;
}

}  // namespace curvlab
