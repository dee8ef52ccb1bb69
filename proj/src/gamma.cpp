#include "curvlab/gamma.hpp"

#include <Eigen/Dense>
#include <vector>

#include "curvlab/field.hpp"

namespace curvlab {

namespace {

double p_entry(const Graph& g, Vertex x, std::int64_t count) {
  return static_cast<double>(count) / (2.0 * static_cast<double>(g.degree(x)));
}

// Delta f at x
double lap(const Graph& g, std::span<const double> f, Vertex x) { return laplacian_at(g, f, x); }

struct Local {
  std::vector<Vertex> ball;     // x first, then S1, then S2
  std::size_t s1 = 0, s2 = 0;   // sizes
};

Local local_ball(const Graph& g, Vertex x) {
  const auto dist = bfs_distances(g, x, 2);
  Local l;
  l.ball.push_back(x);
  for (int r = 1; r <= 2; ++r)
    for (std::size_t v = 0; v < dist.size(); ++v)
      if (dist[v] == r) l.ball.push_back(static_cast<Vertex>(v));
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] == 1) ++l.s1;
    if (dist[v] == 2) ++l.s2;
  }
  return l;
}

// Gamma_2 form on the coordinates ball[1..] (f(x) = 0), by polarization of the
// bilinear gamma2 on unit vectors.
Eigen::MatrixXd gamma2_form(const Graph& g, Vertex x, const Local& l) {
  const std::size_t k = l.s1 + l.s2;
  Eigen::MatrixXd q(k, k);
  std::vector<double> ei(g.vertex_count(), 0.0), ej(g.vertex_count(), 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    ei[l.ball[i + 1]] = 1;
    for (std::size_t j = i; j < k; ++j) {
      ej[l.ball[j + 1]] = 1;
      q(i, j) = q(j, i) = gamma2(g, ei, ej, x);
      ej[l.ball[j + 1]] = 0;
    }
    ei[l.ball[i + 1]] = 0;
  }
  return q;
}

}  // namespace

double gamma(const Graph& g, std::span<const double> f, std::span<const double> h, Vertex x) {
  double s = 0;
  for (const auto& nb : g.neighbors(x))
    s += static_cast<double>(nb.count) * (f[nb.target] - f[x]) * (h[nb.target] - h[x]);
  return 0.5 * s / (2.0 * static_cast<double>(g.degree(x)));
}

double gamma2(const Graph& g, std::span<const double> f, std::span<const double> h, Vertex x) {
  // Delta Gamma(f,h) at x needs Gamma(f,h) on the closed neighbourhood.
  auto delta_gamma = [&]() {
    double s = 0;
    const double gx = gamma(g, f, h, x);
    for (const auto& nb : g.neighbors(x))
      s += static_cast<double>(nb.count) * (gamma(g, f, h, nb.target) - gx);
    return s / (2.0 * static_cast<double>(g.degree(x)));
  };
  // Gamma(u, Delta w)(x) with Delta w evaluated lazily on the neighbourhood
  auto gamma_with_lap = [&](std::span<const double> u, std::span<const double> w) {
    const double lx = lap(g, w, x);
    double s = 0;
    for (const auto& nb : g.neighbors(x))
      s += static_cast<double>(nb.count) * (u[nb.target] - u[x]) * (lap(g, w, nb.target) - lx);
    return 0.5 * s / (2.0 * static_cast<double>(g.degree(x)));
  };
  return 0.5 * (delta_gamma() - gamma_with_lap(f, h) - gamma_with_lap(h, f));
}

double be_curvature(const Graph& g, Vertex x) {
  g.require_vertex(x);
  const auto l = local_ball(g, x);
  if (l.s1 == 0) throw InvalidInput("Gamma form at vertex " + std::to_string(x) + " is degenerate");
  const auto q = gamma2_form(g, x, l);
  const auto n1 = static_cast<Eigen::Index>(l.s1), n2 = static_cast<Eigen::Index>(l.s2);

  Eigen::MatrixXd eff = q.topLeftCorner(n1, n1);
  if (n2 > 0) {
    const Eigen::MatrixXd quv = q.topRightCorner(n1, n2);
    const Eigen::MatrixXd qvv = q.bottomRightCorner(n2, n2);
    eff -= quv * qvv.ldlt().solve(quv.transpose());
  }
  // Gamma form is diagonal: 1/2 P(x,u) on S1
  Eigen::VectorXd scale(n1);
  for (Eigen::Index i = 0; i < n1; ++i) {
    const Vertex u = l.ball[i + 1];
    scale(i) = 1.0 / std::sqrt(0.5 * p_entry(g, x, g.multiplicity(x, u)));
  }
  const Eigen::MatrixXd m = scale.asDiagonal() * eff * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool cd_holds(const Graph& g, Vertex x, double K, double N, double tol) {
  g.require_vertex(x);
  const auto l = local_ball(g, x);
  if (l.s1 == 0) return true;
  Eigen::MatrixXd m = gamma2_form(g, x, l);
  const auto n1 = static_cast<Eigen::Index>(l.s1);
  Eigen::VectorXd ell = Eigen::VectorXd::Zero(m.rows());
  for (Eigen::Index i = 0; i < n1; ++i) {
    const Vertex u = l.ball[i + 1];
    const double p = p_entry(g, x, g.multiplicity(x, u));
    m(i, i) -= K * 0.5 * p;
    ell(i) = p;
  }
  if (N > 0) m -= ell * ell.transpose() / N;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) >= -tol;
}

}  // namespace curvlab
