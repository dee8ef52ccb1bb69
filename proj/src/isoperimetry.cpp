#include "curvlab/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/curvature.hpp"
#include "curvlab/field.hpp"

namespace curvlab {

namespace {

void require_phi_degree(const Graph& g, const PhiFunction& phi) {
  if (phi.d < static_cast<double>(g.max_degree()))
    throw InvalidInput("phi was built with d below the maximum degree");
}

std::vector<double> compose(const PhiFunction& phi, std::span<const double> f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = phi.value(f[i]);
  return out;
}

double closed_min(const Graph& g, std::span<const double> f, Vertex x) {
  double m = f[x];
  for (const auto& nb : g.neighbors(x)) m = std::min(m, f[nb.target]);
  return m;
}

}  // namespace

CheckResult chain_rule_check(const Graph& g, const PhiFunction& phi, std::span<const double> f,
                             std::span<const Vertex> where, double tol) {
  require_phi_degree(g, phi);
  const auto pf = compose(phi, f);
  CheckResult c;
  for (auto x : where) {
    g.require_vertex(x);
    const double fx = f[x];
    const double m = closed_min(g, f, x);
    // the clamp has a kink at R; φ''' >= 0 fails across it
    if (phi.branch == PhiBranch::Clamp && m < phi.R && phi.R < fx) continue;
    const double lhs = laplacian_at(g, pf, x);
    const double rhs = phi.d1(fx) * laplacian_at(g, f, x) +
                       phi.d2(fx) * (fx - m) * (fx - m) / (4 * phi.d);
    c.record(lhs, rhs, tol);
  }
  return c;
}

CheckResult phi_conclusion_check(const Graph& g, const PhiFunction& phi, std::span<const double> f,
                                 std::span<const Vertex> where, double tol) {
  require_phi_degree(g, phi);
  const auto pf = compose(phi, f);
  const double rate = phi.conclusion_rate();
  CheckResult c;
  for (auto x : where) {
    g.require_vertex(x);
    const double bound = f[x] <= phi.R ? -rate : 0.0;
    c.record(laplacian_at(g, pf, x), bound, tol);
  }
  return c;
}

IsoDomain iso_domain(const Graph& g, std::vector<Vertex> lambda) {
  IsoDomain d;
  d.lambda = make_vertex_set(g, std::move(lambda));
  d.diam = diameter(g, d.lambda.vertices);
  d.member.assign(g.vertex_count(), 0);
  for (auto v : d.lambda.vertices) d.member[v] = 1;
  return d;
}

IsoResult iso_check(const Graph& g, const IsoDomain& dom, std::span<const Vertex> w) {
  for (auto v : w) {
    g.require_vertex(v);
    if (!dom.member[v]) throw InvalidInput("W is not a subset of Lambda: vertex " + std::to_string(v));
  }
  const auto st = boundary_stats(g, w);
  IsoResult r;
  r.boundary = st.boundary;
  r.pi_w = st.pi;
  r.lhs = Rational(st.boundary, st.pi);
  r.lhs.canonicalize();
  const double d = static_cast<double>(g.max_degree());
  const double ratio = static_cast<double>(dom.lambda.pi) / (2.0 * static_cast<double>(st.pi));
  if (dom.diam == 0) {
    r.rhs = -std::numeric_limits<double>::infinity();
  } else {
    r.rhs = std::log(ratio) / (4 * d * dom.diam);
  }
  r.pass = to_double(r.lhs) >= r.rhs;
  return r;
}

IsoResult iso_check(const Graph& g, std::span<const Vertex> lambda, std::span<const Vertex> w) {
  return iso_check(g, iso_domain(g, {lambda.begin(), lambda.end()}), w);
}

double iso_psi(double lambda, double d, double R, double rho) {
  const double rate = lambda == 0 ? 1 / (8 * d * R) : lambda / (2 * std::expm1(4 * lambda * d * R));
  return std::max(std::abs(lambda), rho * rate);
}

double iso_lambda_star(double d, double R, double rho) { return std::log1p(rho / 2) / (4 * d * R); }

IsoPipeline iso_pipeline(const Graph& g, std::span<const Vertex> lambda, std::span<const Vertex> w,
                             SeparationMode mode, Hypothesis hyp) {
  if (!hyp.nonneg) hyp.nonneg = is_nonneg_curved(g).nonneg;
  const auto dom = iso_domain(g, {lambda.begin(), lambda.end()});
  IsoPipeline p;
  p.inequality = iso_check(g, dom, w);
  p.separation = separation_solve(g, w, mode, hyp);
  const auto& f = p.separation.f.values;
  const double lam = p.separation.lambda;
  const double d = static_cast<double>(g.max_degree());
  const double R = std::max(dom.diam, 1);
  const double boundary = static_cast<double>(p.inequality.boundary);
  const double pi_w = static_cast<double>(p.inequality.pi_w);
  constexpr double tol = 1e-9;

  std::vector<char> in_w(g.vertex_count(), 0);
  for (auto v : w) in_w[v] = 1;
  std::vector<Vertex> outside;
  for (Vertex v = 0; v < static_cast<Vertex>(g.vertex_count()); ++v)
    if (!in_w[v]) outside.push_back(v);

  const auto lap = laplacian(g, f);
  p.pairing = 0;
  for (Vertex v = 0; v < static_cast<Vertex>(g.vertex_count()); ++v)
    if (in_w[v]) p.pairing += static_cast<double>(g.degree(v)) * lap[v];
  p.big_lambda = boundary >= std::abs(p.pairing) - tol &&
                 std::abs(std::abs(p.pairing) - std::abs(lam) * pi_w) <= 1e-7 * std::max(1.0, pi_w) &&
                 boundary >= std::abs(lam) * pi_w - tol;

  p.phi = phi_build(lam, d, R);
  p.phi_grid = phi_check(p.phi);
  const auto pf = compose(p.phi, f);
  const auto lap_g = laplacian(g, pf);
  p.dirichlet = 0;
  for (auto v : outside) p.dirichlet -= static_cast<double>(g.degree(v)) * lap_g[v];
  const double gap = static_cast<double>(dom.lambda.pi) - pi_w;
  p.small_bound = p.phi.conclusion_rate() * gap;
  p.small_lambda = boundary >= p.dirichlet - tol && p.dirichlet >= p.small_bound - tol;

  p.chain_rule = chain_rule_check(g, p.phi, f, outside);
  p.conclusion = phi_conclusion_check(g, p.phi, f, outside);

  const double rho = gap / pi_w;
  p.lambda_star = iso_lambda_star(d, R, rho);
  p.psi_star = iso_psi(p.lambda_star, d, R, rho);
  p.psi_solver = iso_psi(lam, d, R, rho);
  const double lhs = to_double(p.inequality.lhs);
  p.psi_ok = lhs >= p.psi_solver - tol && p.psi_solver >= p.psi_star - tol && lhs >= p.psi_star - tol;

  p.pass = p.inequality.pass && p.separation.ok() && p.big_lambda && p.small_lambda && p.phi_grid.pass &&
           p.chain_rule.pass && p.conclusion.pass && p.psi_ok;
  return p;
}

std::vector<Vertex> sample_connected_subset(const Graph& g, const IsoDomain& dom, int max_size,
                                            Rng& rng) {
  if (max_size < 1) throw InvalidInput("subset size must be positive");
  const auto& pool = dom.lambda.vertices;
  const auto target = 1 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(max_size)));
  std::vector<Vertex> set{pool[rng.below(pool.size())]};
  std::vector<char> in(g.vertex_count(), 0);
  in[set[0]] = 1;
  std::vector<Vertex> frontier;
  while (set.size() < target) {
    frontier.clear();
    for (auto x : set)
      for (const auto& nb : g.neighbors(x))
        if (dom.member[nb.target] && !in[nb.target]) frontier.push_back(nb.target);
    if (frontier.empty()) break;
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    const Vertex pick = frontier[rng.below(frontier.size())];
    in[pick] = 1;
    set.push_back(pick);
  }
  std::sort(set.begin(), set.end());
  return set;
}

namespace {

// ESU enumeration: each connected set is produced from its smallest vertex,
// extending only through vertices exclusive to the newest member.
void extend(const Graph& g, const IsoDomain& dom, std::vector<Vertex>& set,
            std::vector<Vertex> ext, Vertex root, int max_size, std::vector<int>& touched,
            std::vector<std::vector<Vertex>>& out) {
  {
    auto s = set;
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
  }
  if (static_cast<int>(set.size()) == max_size) return;
  while (!ext.empty()) {
    const Vertex w = ext.back();
    ext.pop_back();
    auto next = ext;
    std::vector<Vertex> marked;
    for (const auto& nb : g.neighbors(w)) {
      const Vertex u = nb.target;
      if (u <= root || !dom.member[u] || touched[u] > 0) continue;
      if (std::find(next.begin(), next.end(), u) == next.end()) next.push_back(u);
    }
    // everything adjacent to the enlarged set is no longer exclusive
    for (const auto& nb : g.neighbors(w))
      if (touched[nb.target]++ == 0) marked.push_back(nb.target);
    ++touched[w];
    set.push_back(w);
    extend(g, dom, set, std::move(next), root, max_size, touched, out);
    set.pop_back();
    --touched[w];
    for (const auto& nb : g.neighbors(w)) --touched[nb.target];
  }
}

}  // namespace

std::vector<std::vector<Vertex>> enumerate_connected_subsets(const Graph& g, const IsoDomain& dom,
                                                             int max_size) {
  if (max_size < 1) throw InvalidInput("subset size must be positive");
  std::vector<std::vector<Vertex>> out;
  std::vector<int> touched(g.vertex_count(), 0);
  for (auto v : dom.lambda.vertices) {
    std::vector<Vertex> set{v};
    ++touched[v];
    for (const auto& nb : g.neighbors(v)) ++touched[nb.target];
    std::vector<Vertex> ext;
    for (const auto& nb : g.neighbors(v))
      if (nb.target > v && dom.member[nb.target]) ext.push_back(nb.target);
    extend(g, dom, set, std::move(ext), v, max_size, touched, out);
    --touched[v];
    for (const auto& nb : g.neighbors(v)) --touched[nb.target];
  }
  return out;
}

CheckResult iso_sweep(const Graph& g, const IsoDomain& dom, std::span<const std::vector<Vertex>> sets) {
  std::vector<IsoResult> res(sets.size());
  const auto n = static_cast<std::int64_t>(sets.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) res[i] = iso_check(g, dom, sets[i]);
  CheckResult c;
  // recorded as rhs <= lhs
  for (const auto& r : res) c.record_exact(r.rhs, to_double(r.lhs), r.pass);
  return c;
}

}  // namespace curvlab
