#pragma once

#include <cstdint>
#include <vector>

#include "curvlab/dist.hpp"
#include "curvlab/graph.hpp"

namespace curvlab {

template <class T>
struct PlanEntry {
  Vertex source;
  Vertex target;
  T mass;
};

template <class T>
struct TransportPlan {
  std::vector<PlanEntry<T>> entries;  // sorted by (source, target)
  T cost = 0;
};

/// Integer-valued 1-Lipschitz potential on the union of two supports.
struct DualPotential {
  std::vector<std::pair<Vertex, std::int64_t>> values;  // sorted by vertex
  /// Throws InvalidInput if x carries no value.
  std::int64_t at(Vertex x) const;
  bool has(Vertex x) const;
};

template <class T>
struct W1Result {
  T cost = 0;
  TransportPlan<T> plan;
  DualPotential dual;
};

template <class T>
T tv_distance(const Dist<T>& mu, const Dist<T>& nu);

/// Wasserstein-1 distance for the graph metric by successive shortest paths on
/// the graph's own edges (unit cost per edge, supplies mu - nu). The flow is
/// confined to a ball around the supports that contains every geodesic
/// between them, so the answer equals the ambient one. Shortest-path ties go
/// to the smallest vertex id. Throws DisconnectedGraph when the supports lie
/// in different components.
template <class T>
W1Result<T> w1(const Graph& g, const Dist<T>& mu, const Dist<T>& nu);

/// Exhaustive maximisation of sum f dmu - sum f dnu over integer potentials
/// that are 1-Lipschitz on the support union. At most 8 support points.
Rational w1_bruteforce(const Graph& g, const Dist<Rational>& mu, const Dist<Rational>& nu);

/// True iff the plan has marginals (mu, nu), the dual is 1-Lipschitz on the
/// support union, and primal cost equals the dual objective (exactly for
/// rationals, within 1e-10 for doubles). Distances are recomputed by BFS.
template <class T>
bool verify_duality(const Graph& g, const Dist<T>& mu, const Dist<T>& nu,
                    const TransportPlan<T>& plan, const DualPotential& dual);

}  // namespace curvlab
