#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curvlab/check.hpp"
#include "curvlab/field.hpp"
#include "curvlab/graph.hpp"

namespace curvlab {

/// Vertex split V = X ⊔ K ⊔ Y. Vertices listed in neither `interior` nor
/// `core` belong to Y.
struct Split {
  std::vector<Vertex> core;      // K
  std::vector<Vertex> interior;  // X
};

/// Maximal/minimal 1-Lipschitz extension of data on K: on X the largest value
/// max_z f(z) - d(x, z), on Y the smallest min_z f(z) + d(y, z). `f_on_K` is
/// indexed like `split.core`. Throws InvalidInput when the split is invalid
/// (overlap, or an X-Y edge) or the data is not 1-Lipschitz in the ambient
/// metric, naming the violating pair.
LipField extension_S(const Graph& g, const Split& split, std::span<const double> f_on_K);

/// X = ∅ shorthand.
LipField extension_S(const Graph& g, std::span<const Vertex> core, std::span<const double> f_on_K);

enum class SeparationMode {
  Program,     ///< exact optimum of min_K Δ(Sh) via a linear program
  FixedPoint,  ///< iterate f <- S(f + εΔf)
};

struct SeparationResult {
  LipField f;  ///< normalized to min 0
  double lambda = 0;
  double flat_residual = 0;      ///< max_K |Δf - λ|
  double outside_residual = 0;   ///< max_{V∖K} (Δf - λ)^+
  double descent_residual = 0;   ///< max_{x∉K} (min_{y~x} f(y) - f(x) + 1)^+
  bool min_on_core = false;
  long iterations = 0;
  SeparationMode mode = SeparationMode::Program;
  std::vector<std::string> warnings;

  bool ok(double tol = 1e-8) const {
    return flat_residual <= tol && outside_residual <= tol && descent_residual <= tol &&
           min_on_core && f.lip <= 1 + 1e-9;
  }
};

/// 1-Lipschitz f, equal to its minimal extension off K, with Δf constant on K
/// and no larger outside. K must be nonempty and connected.
SeparationResult separation_solve(const Graph& g, std::span<const Vertex> core,
                                  SeparationMode mode = SeparationMode::Program,
                                  Hypothesis h = {});

/// min_K Δ(S h), the objective maximized by the solver.
double separation_objective(const Graph& g, std::span<const Vertex> core, std::span<const double> h);

/// Random 1-Lipschitz data on K (ambient metric), for property tests.
std::vector<double> random_lipschitz_data(const Graph& g, std::span<const Vertex> core,
                                          std::uint64_t seed);

}  // namespace curvlab
