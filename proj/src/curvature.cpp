#include "curvlab/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace curvlab {

LipField LipField::from_values(const Graph& g, std::vector<double> values) {
  if (values.size() != g.vertex_count()) throw InvalidInput("field size does not match vertex count");
  LipField f;
  f.lip = lipschitz_constant(g, values);
  f.values = std::move(values);
  return f;
}

double lipschitz_constant(const Graph& g, std::span<const double> f) {
  double lip = 0;
  for (Vertex x = 0; x < static_cast<Vertex>(g.vertex_count()); ++x)
    for (const auto& nb : g.neighbors(x))
      if (nb.target > x) lip = std::max(lip, std::abs(f[x] - f[nb.target]));
  return lip;
}

std::vector<double> apply_p(const Graph& g, std::span<const double> f) {
  std::vector<double> out(g.vertex_count());
  for (Vertex x = 0; x < static_cast<Vertex>(g.vertex_count()); ++x) {
    double s = 0;
    for (const auto& nb : g.neighbors(x)) s += static_cast<double>(nb.count) * f[nb.target];
    out[x] = 0.5 * f[x] + s / (2.0 * static_cast<double>(g.degree(x)));
  }
  return out;
}

double laplacian_at(const Graph& g, std::span<const double> f, Vertex x) {
  double s = 0;
  for (const auto& nb : g.neighbors(x)) s += static_cast<double>(nb.count) * (f[nb.target] - f[x]);
  return s / (2.0 * static_cast<double>(g.degree(x)));
}

std::vector<double> laplacian(const Graph& g, std::span<const double> f) {
  std::vector<double> out(g.vertex_count());
  for (Vertex x = 0; x < static_cast<Vertex>(g.vertex_count()); ++x) out[x] = laplacian_at(g, f, x);
  return out;
}

Dist<Rational> lazy_step(const Graph& g, Vertex x) {
  g.require_vertex(x);
  const Rational two_deg(2 * g.degree(x));
  std::vector<Dist<Rational>::Entry> e;
  e.emplace_back(x, Rational(1, 2));
  for (const auto& nb : g.neighbors(x)) e.emplace_back(nb.target, Rational(nb.count) / two_deg);
  return Dist<Rational>::from_entries(std::move(e));
}

Rational edge_curvature(const Graph& g, Vertex x, Vertex y) {
  g.require_vertex(x);
  g.require_vertex(y);
  if (!g.adjacent(x, y))
    throw InvalidInput("vertices " + std::to_string(x) + " and " + std::to_string(y) +
                       " are not adjacent");
  return Rational(1) - w1(g, lazy_step(g, x), lazy_step(g, y)).cost;
}

namespace {

EdgeCurvature curvature_of(const Graph& g, Vertex x, Vertex y) {
  const auto w = w1(g, lazy_step(g, x), lazy_step(g, y)).cost;
  return {x, y, w, Rational(1) - w};
}

void summarize(CurvatureReport& r) {
  r.nonneg = true;
  r.min_kappa = 1;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < r.edges.size(); ++i) {
    if (r.edges[i].kappa < r.min_kappa) {
      r.min_kappa = r.edges[i].kappa;
      arg = i;
    }
  }
  if (r.edges.empty()) return;
  r.nonneg = sgn(r.min_kappa) >= 0;
  if (!r.nonneg) r.witness = r.edges[arg];
}

}  // namespace

CurvatureReport curvature_report(const Graph& g) {
  if (!g.connected()) bfs_metric(g, 0);
  const auto pairs = g.adjacent_pairs();
  CurvatureReport r;
  r.edges.resize(pairs.size());
  const auto m = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < m; ++i) r.edges[i] = curvature_of(g, pairs[i].first, pairs[i].second);
  summarize(r);
  return r;
}

namespace serial {
CurvatureReport curvature_report(const Graph& g) {
  if (!g.connected()) bfs_metric(g, 0);
  CurvatureReport r;
  for (const auto& [x, y] : g.adjacent_pairs()) r.edges.push_back(curvature_of(g, x, y));
  summarize(r);
  return r;
}
}  // namespace serial

NonnegDecision is_nonneg_curved(const Graph& g) {
  const auto r = curvature_report(g);
  return {r.nonneg, r.min_kappa, r.witness};
}

bool hypothesis_holds(const Graph& g, Hypothesis h) {
  if (h.nonneg) return *h.nonneg;
  return is_nonneg_curved(g).nonneg;
}

ContractionResult lipschitz_contraction_check(const Graph& g, const LipField& f, int steps) {
  if (steps < 0) throw InvalidInput("steps must be nonnegative");
  std::vector<double> h = f.values;
  for (int i = 0; i < steps; ++i) h = apply_p(g, h);
  ContractionResult r;
  r.lip_f = lipschitz_constant(g, f.values);
  r.lip_pf = lipschitz_constant(g, h);
  r.pass = r.lip_pf <= r.lip_f + 1e-12;
  return r;
}

namespace {

template <class Table>
Vertex draw(const Table& cumulative, double u) {
  const double total = cumulative.back().second;
  const double t = u * total;
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), t,
                                   [](double v, const auto& e) { return v < e.second; });
  return it == cumulative.end() ? cumulative.back().first : it->first;
}

}  // namespace

const CoupledWalk::Plan& CoupledWalk::plan(Vertex u, Vertex v) {
  const auto key = std::make_pair(u, v);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const auto res = w1(*g_, lazy_step(*g_, u), lazy_step(*g_, v));
  Plan p;
  std::map<Vertex, double> source_mass;
  for (const auto& e : res.plan.entries) {
    auto& row = p.rows[e.source];
    const double prev = row.empty() ? 0.0 : row.back().second;
    row.emplace_back(e.target, prev + e.mass.get_d());
    source_mass[e.source] += e.mass.get_d();
  }
  double acc = 0;
  for (const auto& [s, m] : source_mass) p.sources.emplace_back(s, acc += m);
  return cache_.emplace(key, std::move(p)).first->second;
}

std::vector<Vertex> CoupledWalk::geodesic(Vertex x, Vertex y) const {
  const auto dist = bfs_metric(*g_, y);
  std::vector<Vertex> path{x};
  while (path.back() != y) {
    const Vertex u = path.back();
    for (const auto& nb : g_->neighbors(u)) {
      if (dist[nb.target] == dist[u] - 1) {
        path.push_back(nb.target);
        break;
      }
    }
  }
  return path;
}

std::pair<Vertex, Vertex> CoupledWalk::step(Vertex x, Vertex y, Rng& rng) {
  g_->require_vertex(x);
  g_->require_vertex(y);
  if (x == y) {
    auto it = steps_.find(x);
    if (it == steps_.end()) {
      std::vector<std::pair<Vertex, double>> cum;
      double acc = 0;
      const auto row = lazy_step(*g_, x);
      for (const auto& [v, m] : row.entries()) cum.emplace_back(v, acc += m.get_d());
      it = steps_.emplace(x, std::move(cum)).first;
    }
    const Vertex z = draw(it->second, rng.uniform());
    return {z, z};
  }
  const auto path = geodesic(x, y);
  const auto& first = plan(path[0], path[1]);
  const Vertex start = draw(first.sources, rng.uniform());
  Vertex z = start;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto& p = plan(path[i], path[i + 1]);
    z = draw(p.rows.at(z), rng.uniform());
  }
  return {start, z};
}

std::pair<Vertex, Vertex> coupled_step(const Graph& g, Vertex x, Vertex y, Rng& rng) {
  CoupledWalk walk(g);
  return walk.step(x, y, rng);
}

}  // namespace curvlab
