#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "curvlab/generators.hpp"
#include "curvlab/lp.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/separation.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace curvlab;

namespace {

// Best vertex of a 2-variable LP by trying every pair of tight constraints.
double lp2_oracle(const LinearProgram& lp) {
  std::vector<std::array<double, 3>> rows;  // a0 x + a1 y <= b
  for (std::size_t i = 0; i < lp.b.size(); ++i) rows.push_back({lp.a[i][0], lp.a[i][1], lp.b[i]});
  rows.push_back({-1, 0, 0});
  rows.push_back({0, -1, 0});
  double best = -1e300;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (rows[i][2] * rows[j][1] - rows[i][1] * rows[j][2]) / det;
      const double y = (rows[i][0] * rows[j][2] - rows[i][2] * rows[j][0]) / det;
      bool ok = true;
      for (const auto& r : rows) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
      if (ok) best = std::max(best, lp.c[0] * x + lp.c[1] * y);
    }
  return best;
}

std::vector<Vertex> grow_connected(const Graph& g, Vertex seed, int size, Rng& rng) {
  std::vector<Vertex> set{seed};
  std::set<Vertex> in{seed};
  while (static_cast<int>(set.size()) < size) {
    const Vertex base = set[rng.below(set.size())];
    const auto nb = g.neighbors(base);
    const Vertex next = nb[rng.below(nb.size())].target;
    if (in.insert(next).second) set.push_back(next);
  }
  std::sort(set.begin(), set.end());
  return set;
}

std::vector<double> restrict(const LipField& f, std::span<const Vertex> core) {
  std::vector<double> out;
  for (auto v : core) out.push_back(f[v]);
  return out;
}

}  // namespace

TEST_CASE("simplex on textbook programs") {
  LinearProgram lp{{{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5}};
  auto s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(36));
  CHECK(s.x[0] == doctest::Approx(2));
  CHECK(s.x[1] == doctest::Approx(6));

  LinearProgram unbounded{{{-1, 1}}, {1}, {1, 0}};
  CHECK(solve_lp(unbounded).status == LpStatus::Unbounded);

  // a degenerate program on which the largest-coefficient rule cycles
  LinearProgram beale{{{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}}, {0, 0, 1}, {0.75, -20, 0.5, -6}};
  s = solve_lp(beale);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.25));
  CHECK(s.x[0] == doctest::Approx(1));
  CHECK(s.x[2] == doctest::Approx(1));

  Rng rng(8, 0);
  for (int t = 0; t < 200; ++t) {
    LinearProgram r;
    const int m = 2 + static_cast<int>(rng.below(5));
    for (int i = 0; i < m; ++i) {
      r.a.push_back({rng.uniform() * 4 - 1, rng.uniform() * 4 - 1});
      r.b.push_back(rng.uniform() * 5);
    }
    r.a.push_back({1, 1});
    r.b.push_back(10);  // keeps it bounded
    r.c = {rng.uniform() * 2 - 1, rng.uniform() * 2 - 1};
    const auto sol = solve_lp(r);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(lp2_oracle(r)).epsilon(1e-9));
  }
}

TEST_CASE("extension formula") {
  const auto g = gen::torus({7, 6});
  const auto fw = oracle::floyd_warshall(g);
  Rng rng(4, 0);
  for (int t = 0; t < 20; ++t) {
    const auto core = grow_connected(g, static_cast<Vertex>(rng.below(42)), 2 + t % 9, rng);
    const auto data = random_lipschitz_data(g, core, 100 + t);
    const auto f = extension_S(g, core, data);
    for (Vertex v = 0; v < 42; ++v) {
      double expect = 1e300;
      for (std::size_t i = 0; i < core.size(); ++i) expect = std::min(expect, data[i] + fw[v][core[i]]);
      CHECK(f[v] == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK(f.lip <= 1 + 1e-12);

    // idempotent
    const auto again = extension_S(g, core, restrict(f, core));
    CHECK(again.values == f.values);
    // commutes with constants
    auto shifted = data;
    for (auto& v : shifted) v += 2.5;
    const auto fs = extension_S(g, core, shifted);
    for (Vertex v = 0; v < 42; ++v) CHECK(fs[v] == doctest::Approx(f[v] + 2.5));
    // order preserving
    auto lower = data;
    lower[rng.below(lower.size())] -= 0.5;
    bool lip_ok = true;
    for (std::size_t i = 0; i < core.size() && lip_ok; ++i)
      for (std::size_t j = 0; j < core.size(); ++j)
        lip_ok = lip_ok && std::abs(lower[i] - lower[j]) <= fw[core[i]][core[j]] + 1e-12;
    if (lip_ok) {
      const auto fl = extension_S(g, core, lower);
      for (Vertex v = 0; v < 42; ++v) CHECK(fl[v] <= f[v] + 1e-15);
    }
  }
}

TEST_CASE("extension with an interior part") {
  // C_8: K = {2, 6} separates X = {3, 4, 5} from Y = {7, 0, 1}
  const auto g = gen::cycle(8);
  const Split split{{2, 6}, {3, 4, 5}};
  const double data[] = {0.0, 1.0};
  const auto f = extension_S(g, split, data);
  CHECK(f[2] == 0);
  CHECK(f[6] == 1);
  CHECK(f[3] == doctest::Approx(-1.0));  // max(0 - 1, 1 - 3)
  CHECK(f[4] == doctest::Approx(-1.0));  // max(0 - 2, 1 - 2)
  CHECK(f[5] == doctest::Approx(0.0));
  CHECK(f[7] == doctest::Approx(2.0));
  CHECK(f[0] == doctest::Approx(2.0));
  CHECK(f[1] == doctest::Approx(1.0));

  const Split bad{{2, 6}, {3, 4}};  // 4 ~ 5 with 5 in Y
  CHECK_THROWS_AS(extension_S(g, bad, data), InvalidInput);
  const Split overlap{{2, 6}, {2, 3, 4, 5}};
  CHECK_THROWS_AS(extension_S(g, overlap, data), InvalidInput);
}

TEST_CASE("non-Lipschitz data names the pair") {
  const auto g = gen::cycle(8);
  const Vertex core[] = {0, 4};
  const double data[] = {0.0, 5.0};
  try {
    extension_S(g, core, data);
    FAIL("expected an error");
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    CHECK(msg.find('0') != std::string::npos);
    CHECK(msg.find('4') != std::string::npos);
  }
  const double wrong_size[] = {0.0};
  CHECK_THROWS_AS(extension_S(g, core, wrong_size), InvalidInput);
}

TEST_CASE("cycle with a single core vertex") {
  const auto g = gen::cycle(8);
  const Vertex core[] = {0};
  for (auto mode : {SeparationMode::Program, SeparationMode::FixedPoint}) {
    const auto r = separation_solve(g, core, mode);
    CHECK(r.ok());
    CHECK(r.lambda == doctest::Approx(0.5));
    const auto fw = oracle::floyd_warshall(g);
    for (Vertex v = 0; v < 8; ++v) CHECK(r.f[v] == doctest::Approx(fw[0][v]));
  }
}

TEST_CASE("whole vertex set gives lambda zero") {
  const auto g = gen::torus({4, 4});
  std::vector<Vertex> all(16);
  for (Vertex v = 0; v < 16; ++v) all[v] = v;
  const auto r = separation_solve(g, all);
  CHECK(r.ok());
  CHECK(r.lambda == doctest::Approx(0).scale(1));
}

TEST_CASE("disconnected core is rejected") {
  const auto g = gen::cycle(8);
  const Vertex core[] = {0, 4};
  CHECK_THROWS_AS(separation_solve(g, core), InvalidInput);
  CHECK_THROWS_AS(separation_solve(g, std::span<const Vertex>{}), InvalidInput);
}

TEST_CASE("objective is concave and the program attains its maximum") {
  const auto g = gen::torus({8, 8});
  Rng rng(5, 0);
  for (int t = 0; t < 10; ++t) {
    const auto core = grow_connected(g, static_cast<Vertex>(rng.below(64)), 3 + t, rng);
    const auto r = separation_solve(g, core);
    REQUIRE(r.ok());
    CHECK(separation_objective(g, core, restrict(r.f, core)) == doctest::Approx(r.lambda).scale(1).epsilon(1e-9));
    for (int s = 0; s < 10; ++s) {
      const auto h1 = random_lipschitz_data(g, core, 1000 * t + 2 * s);
      const auto h2 = random_lipschitz_data(g, core, 1000 * t + 2 * s + 1);
      std::vector<double> mid(core.size());
      for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (h1[i] + h2[i]);
      const double o1 = separation_objective(g, core, h1), o2 = separation_objective(g, core, h2);
      CHECK(separation_objective(g, core, mid) >= 0.5 * (o1 + o2) - 1e-12);
      CHECK(o1 <= r.lambda + 1e-9);
    }
  }
}

TEST_CASE("solver modes agree on random cores") {
  const auto g = gen::torus({8, 8});
  Rng rng(6, 0);
  for (int t = 0; t < 6; ++t) {
    const auto core = grow_connected(g, static_cast<Vertex>(rng.below(64)), 1 + 2 * t, rng);
    const auto a = separation_solve(g, core, SeparationMode::Program);
    const auto b = separation_solve(g, core, SeparationMode::FixedPoint);
    CHECK(a.ok());
    CHECK(b.ok());
    CHECK(a.lambda == doctest::Approx(b.lambda).scale(1).epsilon(1e-6));
    CHECK(a.lambda >= -1e-12);
    for (const auto& r : {a, b}) {
      CHECK(*std::min_element(r.f.values.begin(), r.f.values.end()) == 0);
      CHECK(r.warnings.empty());
    }
  }
}

TEST_CASE("block on the torus") {
  const auto g = gen::torus({8, 8});
  const Vertex core[] = {0, 1, 8, 9};
  const auto r = separation_solve(g, core);
  CHECK(r.ok());
  CHECK(r.lambda == doctest::Approx(0.25));
  CHECK(r.flat_residual <= 1e-9);
  CHECK(r.outside_residual <= 1e-9);
}

TEST_CASE("hypothesis failure is a warning") {
  const auto g = gen::hexagonal_torus(4, 4);
  const Vertex core[] = {0};
  const auto r = separation_solve(g, core);
  CHECK(!r.warnings.empty());
}
