#pragma once

#include <span>

#include "curvlab/graph.hpp"

namespace curvlab {

/// Gamma(f, h)(x) = 1/2 sum_y P(x,y) (f(y) - f(x)) (h(y) - h(x)).
double gamma(const Graph& g, std::span<const double> f, std::span<const double> h, Vertex x);

/// 2 Gamma_2(f, h) = Delta Gamma(f, h) - Gamma(f, Delta h) - Gamma(h, Delta f), Delta = P - I.
/// Reads f and h on B(x, 2) only.
double gamma2(const Graph& g, std::span<const double> f, std::span<const double> h, Vertex x);

/// Largest K with Gamma_2(f,f)(x) >= K Gamma(f,f)(x) for all f: the smallest
/// generalized eigenvalue of the Gamma_2 form against the Gamma form, after
/// minimizing out the values on the sphere of radius 2. Throws InvalidInput
/// when x has no neighbour other than itself.
double be_curvature(const Graph& g, Vertex x);

/// Pointwise CD(K, N) at x: Gamma_2 >= K Gamma + (Delta f)^2 / N for every f,
/// decided through the smallest eigenvalue of the full quadratic form on
/// B(x, 2). N <= 0 stands for N = infinity.
bool cd_holds(const Graph& g, Vertex x, double K, double N, double tol = 1e-9);

}  // namespace curvlab
