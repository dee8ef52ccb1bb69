#include <cmath>

#include "curvlab/bounds.hpp"
#include "curvlab/generators.hpp"
#include "curvlab/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace curvlab;

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix mul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<double>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Matrix fast_power(Matrix p, long n) {
  Matrix r = oracle::power(p, 0);
  for (; n > 0; n >>= 1) {
    if (n & 1) r = mul(r, p);
    p = mul(p, p);
  }
  return r;
}

}  // namespace

TEST_CASE("closed forms at known points") {
  const BoundParams p{2, 1, 40};
  CHECK(entropy_bound(1, p) == doctest::Approx(8));
  CHECK(displacement_bound(1, p) == doctest::Approx(24));
  const BoundParams q{4, 2, 40};
  const double l = std::log(80.0);
  CHECK(entropy_bound(100, q) == doctest::Approx(64 * std::exp(6 * std::sqrt(2 * l * std::log(100.0)))));
  CHECK(displacement_bound(100, q) ==
        doctest::Approx(3 * 64 * std::exp(4 * std::sqrt(3 * l * std::log(100.0))) * 100));
  CHECK(growth_bound(3, q) ==
        doctest::Approx(3 * 8 * 64 * std::exp(4 * std::sqrt(6 * l * std::log(40.0 * 4 * 3)))));
}

TEST_CASE("double and extended precision agree") {
  for (double d : {1.0, 3.0, 8.0})
    for (double c : {1.0, 1.5, d}) {
      if (c > d) continue;
      for (double n : {1.0, 2.0, 17.0, 1e3, 1e6, 1e12}) {
        const BoundParams p{d, c, 40};
        CHECK(entropy_bound(n, p) == doctest::Approx(precise::entropy_bound(n, p)).epsilon(1e-12));
        CHECK(displacement_bound(n, p) == doctest::Approx(precise::displacement_bound(n, p)).epsilon(1e-12));
        CHECK(growth_bound(n, p) == doctest::Approx(precise::growth_bound(n, p)).epsilon(1e-12));
      }
    }
}

TEST_CASE("monotone in every argument") {
  const double ns[] = {1, 2, 5, 10, 100, 1e4, 1e8};
  for (double d : {1.0, 2.0, 4.0, 8.0})
    for (double c = 1; c <= d; c += 0.5)
      for (std::size_t i = 0; i + 1 < std::size(ns); ++i) {
        const BoundParams p{d, c, 40};
        CHECK(entropy_bound(ns[i], p) <= entropy_bound(ns[i + 1], p));
        CHECK(displacement_bound(ns[i], p) <= displacement_bound(ns[i + 1], p));
        CHECK(growth_bound(ns[i], p) <= growth_bound(ns[i + 1], p));
        const BoundParams bigger_d{d * 2, c, 40}, bigger_a{d, c, 80};
        CHECK(entropy_bound(ns[i], p) <= entropy_bound(ns[i], bigger_d));
        CHECK(entropy_bound(ns[i], p) <= entropy_bound(ns[i], bigger_a));
        CHECK(growth_bound(ns[i], p) <= growth_bound(ns[i], bigger_a));
      }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(entropy_bound(0.5, BoundParams{2, 1, 40}), InvalidInput);
  CHECK_THROWS_AS(entropy_bound(2, BoundParams{0.5, 1, 40}), InvalidInput);
  CHECK_THROWS_AS(entropy_bound(2, BoundParams{2, 3, 40}), InvalidInput);
  CHECK_THROWS_AS(entropy_bound(2, BoundParams{2, 1, 1}), InvalidInput);
  const auto p = BoundParams::of(gen::torus({4, 4}));
  CHECK(p.d == 4);
  CHECK(p.C == 1);
  CHECK(p.A == 40);
}

TEST_CASE("functional inequality right side") {
  const BoundParams p{3, 1.5, 40};
  const double c4 = std::pow(1.5, 4);
  auto direct = [&](double n, double m, double hn, double hm) {
    return 40 * (c4 * hm + c4 * std::pow(3.0, 1.5) * std::sqrt(n / std::min(n, m)) *
                               (std::sqrt(hn) + std::sqrt(std::log(2 * 1.5 * n))) +
                 3 * c4 * (1.5 + std::log(3.0)) / n);
  };
  for (double n : {1.0, 4.0, 64.0})
    for (double m : {1.0, 8.0, 64.0}) CHECK(functional_rhs(n, m, 1.2, 0.7, p) == doctest::Approx(direct(n, m, 1.2, 0.7)));
  // with m >= n the square-root factor collapses to one
  CHECK(functional_rhs(16, 64, 2, 3, p) == doctest::Approx(functional_rhs(16, 16, 2, 3, p)));
  CHECK_THROWS_AS(functional_rhs(4, 4, -1, 0, p), InvalidInput);
}

TEST_CASE("bootstrap") {
  CHECK(bootstrap_map(1) == doctest::Approx(2.0 / 3));
  CHECK(bootstrap_map(0.5) == doctest::Approx(3.0 / 8));
  for (double a = 0.01; a <= 1; a += 0.01) CHECK(bootstrap_map(a) < a);

  const std::vector<double> ns{1, 2, 16, 256, 1e4, 1e6, 1e9};
  for (const auto& p : {BoundParams{4, 1, 40}, BoundParams{3, 3, 40}, BoundParams{8, 2, 100}}) {
    const auto curve = bootstrap_run(p, ns);
    CHECK(curve.chain_ok);
    CHECK(curve.curve_ok);
    CHECK(curve.failures.empty());
    REQUIRE(curve.bound.size() == ns.size());
    CHECK(curve.states.front().alpha == 1);
    CHECK(curve.states.front().log_k == doctest::Approx(std::log(std::log(p.d + 1))));
    CHECK(curve.states.back().alpha < 1e-3);
    for (std::size_t i = 1; i < curve.states.size(); ++i) {
      CHECK(curve.states[i].alpha == doctest::Approx(bootstrap_map(curve.states[i - 1].alpha)));
      const auto s = bootstrap_step(curve.states[i - 1], p);
      CHECK(s.log_k == curve.states[i].log_k);
    }
    for (std::size_t i = 0; i < ns.size(); ++i) {
      double best = 1e308;
      for (const auto& s : curve.states) best = std::min(best, s.log_k + s.alpha * std::log(ns[i]));
      CHECK(std::log(curve.bound[i]) == doctest::Approx(best).epsilon(1e-9));
      CHECK(curve.closed_form[i] ==
            doctest::Approx(std::pow(p.d, 3) *
                            std::exp(2 * std::sqrt(3 * std::log(2 * p.A * std::pow(p.C, 4)) * std::log(ns[i])))));
    }
  }
}

TEST_CASE("elementary lemma") {
  CHECK(elementary_bound(1, 1, 0.5) == doctest::Approx(4));
  const auto e = elementary_check(2.6, 1, 1, 0.5);
  CHECK(e.hypothesis);
  CHECK(e.conclusion);
  CHECK(e.pass);
  CHECK(elementary_check(10, 1, 1, 0.5).pass);  // hypothesis false, vacuous

  Rng rng(9, 0);
  int accepted = 0;
  while (accepted < 10000) {
    const double a = 0.1 + rng.uniform() * 5, b = rng.uniform() * 10, eps = 0.05 + rng.uniform() * 0.95;
    const double x = std::exp(rng.uniform() * 8) - 1;
    if (!(x <= a * std::pow(x, 1 - eps) + b)) continue;
    ++accepted;
    const auto r = elementary_check(x, a, b, eps);
    CHECK(r.hypothesis);
    CHECK(r.pass);
    CHECK(x <= std::max(std::pow(2 * a, 1 / eps), 2 * b) * (1 + 1e-12));
  }
}

TEST_CASE("growth conversion") {
  for (auto [g, r] : {std::pair{gen::cycle(64), 2}, std::pair{gen::torus({8, 8}), 2}, std::pair{gen::cycle(64), 1}}) {
    const auto res = growth_conversion_check(g, r, 200, 3);
    CHECK(res.pass);
    CHECK(res.exact);
    CHECK(res.monte_carlo);
    CHECK(res.n == static_cast<std::int64_t>(1280 * g.max_degree() * r * r));
    const auto fw = oracle::floyd_warshall(g);
    const std::size_t nv = g.vertex_count();
    double lb = 0;
    for (std::size_t x = 0; x < nv; ++x) {
      int count = 0;
      for (std::size_t y = 0; y < nv; ++y) count += fw[x][y] <= r;
      lb += std::log(double(count));
    }
    CHECK(res.avg_log_ball == doctest::Approx(lb / nv));
    const auto pn = fast_power(oracle::transition_double(g), res.n);
    double h = 0;
    for (std::size_t x = 0; x < nv; ++x) h += oracle::shannon(pn[x]);
    CHECK(res.entropy == doctest::Approx(h / nv).epsilon(1e-8));
    CHECK(res.entropy_bound == doctest::Approx(2 * h / nv + std::log(2.0)).epsilon(1e-8));
  }
  const auto zero = growth_conversion_check(gen::cycle(64), 0, 10, 3);
  CHECK(zero.pass);
  CHECK(zero.n == 0);
  CHECK(zero.avg_log_ball == 0);
  const auto capped = growth_conversion_check(gen::cycle(64), 1, 10, 3, 1000);
  CHECK(!capped.pass);
  CHECK(!capped.warnings.empty());
  CHECK_THROWS_AS(growth_conversion_check(gen::cycle(8), -1, 10, 3), InvalidInput);
}
