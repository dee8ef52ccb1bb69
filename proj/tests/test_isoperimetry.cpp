#include <algorithm>
#include <cmath>
#include <set>

#include "curvlab/generators.hpp"
#include "curvlab/isoperimetry.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace curvlab;

namespace {

std::vector<Vertex> all_vertices(const Graph& g) {
  std::vector<Vertex> v(g.vertex_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<Vertex>(i);
  return v;
}

// Connected subsets of `pool` with at most k vertices, by scanning bitmasks.
std::set<std::vector<Vertex>> connected_subsets_bitmask(const Graph& g, const std::vector<Vertex>& pool, int k) {
  std::set<std::vector<Vertex>> out;
  const int m = static_cast<int>(pool.size());
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) > k) continue;
    std::vector<Vertex> s;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) s.push_back(pool[i]);
    std::set<Vertex> seen{s[0]};
    std::vector<Vertex> stack{s[0]};
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (auto v : s)
        if (!seen.count(v) && g.multiplicity(u, v) > 0) {
          seen.insert(v);
          stack.push_back(v);
        }
    }
    if (seen.size() == s.size()) out.insert(s);
  }
  return out;
}

}  // namespace

TEST_CASE("arc on a long cycle") {
  const auto g = gen::cycle(64);
  const auto lam = all_vertices(g);
  const Vertex arc[] = {10, 11, 12, 13};
  const auto r = iso_check(g, lam, arc);
  CHECK(r.boundary == 2);
  CHECK(r.pi_w == 8);
  CHECK(r.lhs == Rational(1, 4));
  CHECK(r.rhs == doctest::Approx(std::log(8.0) / 256).epsilon(1e-12));
  CHECK(r.pass);
}

TEST_CASE("degenerate sets") {
  const auto g = gen::cycle(16);
  const auto lam = all_vertices(g);
  const auto whole = iso_check(g, lam, lam);
  CHECK(whole.boundary == 0);
  CHECK(whole.lhs == 0);
  CHECK(whole.rhs < 0);
  CHECK(whole.pass);
  const Vertex one[] = {3};
  const auto point = iso_check(g, one, one);
  CHECK(std::isinf(point.rhs));
  CHECK(point.rhs < 0);
  CHECK(point.pass);
  const Vertex small[] = {0, 1, 2};
  const Vertex outside[] = {2, 3};
  CHECK_THROWS_AS(iso_check(g, small, outside), InvalidInput);
}

TEST_CASE("connected subset enumeration") {
  const auto g = gen::torus({5, 5});
  const auto dom = iso_domain(g, ball(g, 12, 2).vertices);
  REQUIRE(dom.lambda.vertices.size() == 13);
  CHECK(dom.diam == 4);
  for (int k : {1, 2, 4, 6}) {
    const auto listed = enumerate_connected_subsets(g, dom, k);
    std::set<std::vector<Vertex>> got;
    for (auto s : listed) {
      std::sort(s.begin(), s.end());
      CHECK(got.insert(s).second);  // no duplicates
    }
    CHECK(got == connected_subsets_bitmask(g, dom.lambda.vertices, k));
  }
  Rng rng(3, 0);
  for (int t = 0; t < 100; ++t) {
    const auto s = sample_connected_subset(g, dom, 6, rng);
    CHECK(s.size() <= 6);
    CHECK(connected_subsets_bitmask(g, s, 6).count(s) == 1);
    for (auto v : s) CHECK(dom.member[v]);
  }
}

TEST_CASE("sweep agrees with one check at a time") {
  const auto g = gen::torus({8, 8});
  const auto dom = iso_domain(g, ball(g, 0, 3).vertices);
  const auto sets = enumerate_connected_subsets(g, dom, 4);
  const auto sweep = iso_sweep(g, dom, sets);
  CHECK(sweep.pass);
  CHECK(sweep.evaluated == static_cast<std::int64_t>(sets.size()));
  double worst = 1e300;
  for (const auto& w : sets) {
    const auto r = iso_check(g, dom, w);
    CHECK(r.pass);
    worst = std::min(worst, to_double(r.lhs) - r.rhs);
  }
  CHECK(sweep.slack == doctest::Approx(worst));
}

TEST_CASE("phi branches") {
  const auto q = phi_build(0, 2, 4);
  CHECK(q.branch == PhiBranch::Quadratic);
  CHECK(q.value(4) == doctest::Approx(2));
  CHECK(q.value(10) == doctest::Approx(2));
  CHECK(q.d1(5) == 0);
  CHECK(phi_check(q).pass);
  CHECK(q.conclusion_rate() == doctest::Approx(1.0 / 64));

  const auto e = phi_build(1, 2, 3);
  CHECK(e.branch == PhiBranch::Exponential);
  const auto ec = phi_check(e);
  CHECK(ec.pass);
  CHECK(ec.ode_residual < 1e-9);
  CHECK(e.value(0) == 0);
  CHECK(e.d1(3) == doctest::Approx(0).scale(1));
  // numerical derivatives
  for (double t : {0.3, 1.1, 2.5}) {
    const double h = 1e-5;
    CHECK((e.value(t + h) - e.value(t - h)) / (2 * h) == doctest::Approx(e.d1(t)).epsilon(1e-6));
    CHECK((e.d1(t + h) - e.d1(t - h)) / (2 * h) == doctest::Approx(e.d2(t)).epsilon(1e-6));
    CHECK((e.d2(t + h) - e.d2(t - h)) / (2 * h) == doctest::Approx(e.d3(t)).epsilon(1e-6));
    CHECK(e.lambda * e.d1(t) + e.d2(t) / (4 * e.d) == doctest::Approx(e.ode_target()));
  }
  CHECK(e.conclusion_rate() == doctest::Approx(1.0 / (2 * std::expm1(24.0))));

  const auto c = phi_build(-1, 2, 3);
  CHECK(c.branch == PhiBranch::Clamp);
  CHECK(c.value(2) == 2);
  CHECK(c.value(5) == 3);
  CHECK(phi_check(c).pass);
  CHECK(phi_build(-1.0 / 24 + 1e-9, 2, 3).branch == PhiBranch::Quadratic);
  CHECK(phi_build(-1.0 / 24, 2, 3).branch == PhiBranch::Clamp);

  CHECK_THROWS_AS(phi_build(0, 2, 0.5), InvalidInput);
  CHECK_THROWS_AS(phi_build(0, 0.5, 2), InvalidInput);
}

TEST_CASE("chain rule") {
  const auto g = gen::torus({9, 9});
  const auto fw = oracle::floyd_warshall(g);
  const auto p = oracle::transition_double(g);
  const auto where = all_vertices(g);

  // identity reparameterization: equality everywhere
  std::vector<double> f(81);
  for (std::size_t v = 0; v < 81; ++v) f[v] = fw[40][v];
  const auto id = phi_build(-1, 4, 100);
  const auto ci = chain_rule_check(g, id, f, where);
  CHECK(ci.pass);
  CHECK(ci.slack == doctest::Approx(0).scale(1));

  // exponential and quadratic, against a direct evaluation
  for (const auto& phi : {phi_build(0.05, 4, 8), phi_build(0, 4, 8), phi_build(-0.001, 4, 8)}) {
    const auto r = chain_rule_check(g, phi, f, where);
    bool ok = true;
    for (std::size_t x = 0; x < 81; ++x) {
      double lap_pf = 0, lap_f = 0, m = f[x];
      for (std::size_t y = 0; y < 81; ++y) {
        lap_pf += p[x][y] * (phi.value(f[y]) - phi.value(f[x]));
        lap_f += p[x][y] * (f[y] - f[x]);
        if (p[x][y] > 0) m = std::min(m, f[y]);
      }
      const double rhs = phi.d1(f[x]) * lap_f + phi.d2(f[x]) * (f[x] - m) * (f[x] - m) / (4 * phi.d);
      ok = ok && lap_pf <= rhs + 1e-9;
    }
    CHECK(r.pass == ok);
    CHECK(r.pass);
  }
  CHECK_THROWS_AS(chain_rule_check(g, phi_build(0, 2, 8), f, where), InvalidInput);
}

TEST_CASE("pipeline") {
  {
    const auto g = gen::cycle(64);
    const auto lam = all_vertices(g);
    const Vertex arc[] = {10, 11, 12, 13};
    const auto r = iso_pipeline(g, lam, arc);
    CHECK(r.pass);
    CHECK(r.separation.ok());
    CHECK(r.psi_solver >= r.psi_star - 1e-12);
  }
  {
    const auto g = gen::torus({8, 8});
    const auto lam = ball(g, 0, 3).vertices;
    const Vertex w[] = {0, 1, 8};
    for (auto mode : {SeparationMode::Program, SeparationMode::FixedPoint}) {
      const auto r = iso_pipeline(g, lam, w, mode);
      CHECK(r.pass);
      CHECK(r.big_lambda);
      CHECK(r.small_lambda);
      CHECK(r.chain_rule.pass);
      CHECK(r.conclusion.pass);
    }
  }
}

TEST_CASE("psi minimizer") {
  for (double rho : {0.5, 3.0, 100.0}) {
    const double star = iso_lambda_star(4, 5, rho);
    CHECK(star == doctest::Approx(std::log1p(rho / 2) / 80));
    const double best = iso_psi(star, 4, 5, rho);
    for (int i = 1; i <= 200; ++i) CHECK(iso_psi(0.001 * i, 4, 5, rho) >= best - 1e-12);
    CHECK(iso_psi(-0.5, 4, 5, rho) >= 0.5);
  }
}
