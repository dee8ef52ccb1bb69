#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "curvlab/dist.hpp"
#include "curvlab/field.hpp"
#include "curvlab/check.hpp"
#include "curvlab/graph.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/transport.hpp"

namespace curvlab {

/// One step of the lazy walk from x, exactly.
Dist<Rational> lazy_step(const Graph& g, Vertex x);

/// kappa(x, y) = 1 - W(delta_x P, delta_y P). Throws unless x ~ y.
Rational edge_curvature(const Graph& g, Vertex x, Vertex y);

struct EdgeCurvature {
  Vertex x;
  Vertex y;
  Rational w;
  Rational kappa;
};

struct CurvatureReport {
  std::vector<EdgeCurvature> edges;  // one per adjacent pair x < y
  Rational min_kappa;
  bool nonneg = true;
  std::optional<EdgeCurvature> witness;  // an edge attaining min_kappa when negative
};

/// Every edge in parallel; the result does not depend on the thread count.
CurvatureReport curvature_report(const Graph& g);

struct NonnegDecision {
  bool nonneg;
  Rational min_kappa;
  std::optional<EdgeCurvature> witness;
};

NonnegDecision is_nonneg_curved(const Graph& g);

/// Uses the known answer when present, otherwise decides it.
bool hypothesis_holds(const Graph& g, Hypothesis h);
inline constexpr const char* kHypothesisWarning =
    "curvature hypothesis unmet: graph has a negatively curved edge";

struct ContractionResult {
  double lip_f;
  double lip_pf;  // Lip(P^n f)
  bool pass;
};

/// Lip(P^n f) <= Lip(f), with 1e-12 slack for rounding.
ContractionResult lipschitz_contraction_check(const Graph& g, const LipField& f, int steps = 1);

/// Couples lazy steps from x and y. Adjacent pairs move by an optimal plan of
/// their one-step kernels; farther pairs glue the plans along the geodesic
/// that always steps to the smallest-id vertex one closer to y. Plans are
/// computed once per edge and cached, so keep one instance per thread.
class CoupledWalk {
 public:
  explicit CoupledWalk(const Graph& g) : g_(&g) {}
  std::pair<Vertex, Vertex> step(Vertex x, Vertex y, Rng& rng);

 private:
  struct Plan {
    // per source: cumulative weights over targets
    std::map<Vertex, std::vector<std::pair<Vertex, double>>> rows;
    std::vector<std::pair<Vertex, double>> sources;  // cumulative source masses
  };
  const Plan& plan(Vertex u, Vertex v);
  std::vector<Vertex> geodesic(Vertex x, Vertex y) const;

  const Graph* g_;
  std::map<std::pair<Vertex, Vertex>, Plan> cache_;
  std::map<Vertex, std::vector<std::pair<Vertex, double>>> steps_;
};

std::pair<Vertex, Vertex> coupled_step(const Graph& g, Vertex x, Vertex y, Rng& rng);

namespace serial {
CurvatureReport curvature_report(const Graph& g);
}

}  // namespace curvlab
