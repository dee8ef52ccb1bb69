#pragma once

#include <span>
#include <vector>

#include "curvlab/graph.hpp"

namespace curvlab {

/// Real function on the vertices together with its Lipschitz constant over
/// edges (self-loops ignored).
struct LipField {
  std::vector<double> values;
  double lip = 0;

  static LipField from_values(const Graph& g, std::vector<double> values);
  double operator[](Vertex x) const { return values[x]; }
};

double lipschitz_constant(const Graph& g, std::span<const double> f);

/// (Pf)(x) for the lazy walk.
std::vector<double> apply_p(const Graph& g, std::span<const double> f);
/// (P - I)f.
std::vector<double> laplacian(const Graph& g, std::span<const double> f);
double laplacian_at(const Graph& g, std::span<const double> f, Vertex x);

}  // namespace curvlab
