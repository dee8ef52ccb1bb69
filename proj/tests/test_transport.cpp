#include <map>

#include "curvlab/generators.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/transport.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace curvlab;

namespace {

Graph path3() {
  const EdgeSpec e[] = {{0, 1, 1}, {1, 2, 1}};
  return Graph::from_edges(3, e);
}

Dist<Rational> random_dist(Rng& rng, Vertex n, int max_support) {
  const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_support)));
  std::vector<std::pair<Vertex, long>> raw;
  long total = 0;
  for (int i = 0; i < k; ++i) {
    const long w = 1 + static_cast<long>(rng.below(9));
    raw.emplace_back(static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n))), w);
    total += w;
  }
  std::vector<Dist<Rational>::Entry> e;
  for (auto [v, w] : raw) {
    Rational q(w, total);
    q.canonicalize();
    e.emplace_back(v, q);
  }
  return Dist<Rational>::from_entries(std::move(e));
}

std::map<Vertex, Rational> as_map(const Dist<Rational>& d) {
  std::map<Vertex, Rational> m;
  for (const auto& [v, q] : d.entries()) m[v] = q;
  return m;
}

}  // namespace

TEST_CASE("total variation") {
  const Vertex ab[] = {0, 1};
  const auto a = Dist<Rational>::dirac(0);
  const auto u = Dist<Rational>::uniform(ab);
  CHECK(tv_distance(a, a) == 0);
  CHECK(tv_distance(a, u) == Rational(1, 2));
  Rng rng(5, 0);
  for (int t = 0; t < 200; ++t) {
    const auto mu = random_dist(rng, 12, 5);
    const auto nu = random_dist(rng, 12, 5);
    Rational overlap = 0;
    merge_supports(mu, nu, [&](Vertex, const Rational& x, const Rational& y) { overlap += x < y ? x : y; });
    CHECK(tv_distance(mu, nu) == 1 - overlap);
  }
  std::vector<Dist<Rational>::Entry> bad{{0, Rational(1, 2)}};
  CHECK_THROWS_AS(Dist<Rational>::from_entries(bad), InvalidInput);
}

TEST_CASE("W1 on a path") {
  const auto g = path3();
  const auto d0 = Dist<Rational>::dirac(0);
  CHECK(w1(g, d0, d0).cost == 0);
  CHECK(w1(g, d0, Dist<Rational>::dirac(2)).cost == 2);
  const Vertex ab[] = {0, 1};
  const auto res = w1(g, Dist<Rational>::uniform(ab), Dist<Rational>::dirac(2));
  CHECK(res.cost == Rational(3, 2));
  CHECK(w1_bruteforce(g, Dist<Rational>::uniform(ab), Dist<Rational>::dirac(2)) == Rational(3, 2));
}

TEST_CASE("flow solver matches exhaustive integer potentials") {
  const Graph graphs[] = {gen::torus({6, 6}), gen::random_regular(16, 3, 11), gen::hypercube(4),
                          gen::triangular_torus(4, 5)};
  Rng rng(6, 0);
  for (const auto& g : graphs) {
    const auto fw = oracle::floyd_warshall(g);
    const auto n = static_cast<Vertex>(g.vertex_count());
    for (int t = 0; t < 60; ++t) {
      const auto mu = random_dist(rng, n, 3);
      const auto nu = random_dist(rng, n, 3);
      const auto res = w1(g, mu, nu);
      CHECK(res.cost == oracle::w1_potentials(fw, as_map(mu), as_map(nu)));
      CHECK(verify_duality(g, mu, nu, res.plan, res.dual));

      // plan marginals and cost recomputed from the Floyd-Warshall table
      std::map<Vertex, Rational> out, in;
      Rational cost = 0;
      for (const auto& e : res.plan.entries) {
        CHECK(e.mass > 0);
        out[e.source] += e.mass;
        in[e.target] += e.mass;
        cost += e.mass * fw[e.source][e.target];
      }
      CHECK(out == as_map(mu));
      CHECK(in == as_map(nu));
      CHECK(cost == res.cost);
      // dual is 1-Lipschitz and attains the cost
      Rational dual_obj = 0;
      for (const auto& [v, f] : res.dual.values) {
        dual_obj += (mu.mass(v) - nu.mass(v)) * f;
        for (const auto& [u, h] : res.dual.values) CHECK(std::abs(f - h) <= fw[v][u]);
      }
      CHECK(dual_obj == res.cost);

      const auto fres = w1(g, to_float(mu), to_float(nu));
      CHECK(std::abs(fres.cost - res.cost.get_d()) < 1e-12);
    }
  }
}

TEST_CASE("brute force oracle refuses large supports") {
  const auto g = gen::cycle(20);
  std::vector<Vertex> nine{0, 1, 2, 3, 4, 5, 6, 7, 8};
  const auto mu = Dist<Rational>::uniform(nine);
  CHECK_THROWS_AS(w1_bruteforce(g, mu, Dist<Rational>::dirac(10)), InvalidInput);
}

TEST_CASE("disconnected supports are an error") {
  const EdgeSpec e[] = {{0, 1, 1}, {2, 3, 1}};
  const auto g = Graph::from_edges(4, e);
  CHECK_THROWS_AS(w1(g, Dist<Rational>::dirac(0), Dist<Rational>::dirac(3)), DisconnectedGraph);
}
