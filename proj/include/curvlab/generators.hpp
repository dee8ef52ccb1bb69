#pragma once

#include <cstdint>
#include <vector>

#include "curvlab/graph.hpp"

namespace curvlab::gen {

Graph cycle(int n);
/// Product of cycles Z_{d1} x ... x Z_{dk}; every side must be >= 3.
Graph torus(const std::vector<int>& dims);
Graph hypercube(int k);
Graph complete(int n);

/// Cayley graph of Z_{o1} x ... x Z_{ok}. `generators` is a multiset that must
/// be closed under negation; zero generators must come in pairs, each pair
/// forming one self-loop.
Graph abelian_cayley(const std::vector<int>& orders,
                     const std::vector<std::vector<int>>& generators);

/// Z_n x Z_m with steps +-(1,0), +-(0,1), +-(1,1).
Graph triangular_torus(int n, int m);
/// Brick-wall honeycomb on Z_n x Z_m: all horizontal edges, vertical edges at
/// even i + j. Needs n, m even and >= 4.
Graph hexagonal_torus(int n, int m);

/// Uniform simple d-regular graph by the pairing model with rejection,
/// retried until simple and connected.
Graph random_regular(int n, int d, std::uint64_t seed);

/// Vertex (a, b) gets id a * |V(h)| + b.
Graph cartesian_product(const Graph& g, const Graph& h);

/// Index of a torus coordinate tuple, first coordinate most significant.
Vertex torus_index(const std::vector<int>& dims, const std::vector<int>& coords);

}  // namespace curvlab::gen
