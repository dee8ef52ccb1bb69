#include "curvlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "curvlab/poisson.hpp"

namespace curvlab {

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

void require_at_least_one(double v, const char* what) {
  if (!(v >= 1)) throw InvalidInput(std::string(what) + " must be at least 1");
}

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

BoundParams BoundParams::of(const Graph& g, double A) {
  BoundParams p;
  p.d = static_cast<double>(g.max_degree());
  p.C = g.degree_ratio();
  p.A = A;
  p.validate();
  return p;
}

void BoundParams::validate() const {
  if (!(d >= 1)) throw InvalidInput("bound parameter d must be at least 1");
  if (!(C >= 1) || C > d) throw InvalidInput("bound parameter C must lie in [1, d]");
  if (!(A > 1)) throw InvalidInput("bound parameter A must exceed 1");
}

double entropy_bound(double n, const BoundParams& p) {
  require_at_least_one(n, "n");
  p.validate();
  return p.d * p.d * p.d * std::exp(6 * std::sqrt(2 * std::log(p.A * p.C) * std::log(n)));
}

double displacement_bound(double n, const BoundParams& p) {
  require_at_least_one(n, "n");
  p.validate();
  return 3 * p.d * p.d * p.d * std::exp(4 * std::sqrt(3 * std::log(p.A * p.C) * std::log(n))) * n;
}

double growth_bound(double r, const BoundParams& p) {
  require_at_least_one(r, "r");
  p.validate();
  const double c3 = p.C * p.C * p.C;
  return 3 * c3 * p.d * p.d * p.d *
         std::exp(4 * std::sqrt(6 * std::log(p.A * p.C) * std::log(p.A * p.d * r)));
}

namespace precise {

double entropy_bound(double n, const BoundParams& p) {
  require_at_least_one(n, "n");
  p.validate();
  const Big d(p.d), ac = Big(p.A) * Big(p.C);
  return static_cast<double>(d * d * d * exp(6 * sqrt(2 * log(ac) * log(Big(n)))));
}

double displacement_bound(double n, const BoundParams& p) {
  require_at_least_one(n, "n");
  p.validate();
  const Big d(p.d), ac = Big(p.A) * Big(p.C);
  return static_cast<double>(3 * d * d * d * exp(4 * sqrt(3 * log(ac) * log(Big(n)))) * Big(n));
}

double growth_bound(double r, const BoundParams& p) {
  require_at_least_one(r, "r");
  p.validate();
  const Big d(p.d), c(p.C), a(p.A);
  return static_cast<double>(3 * c * c * c * d * d * d *
                             exp(4 * sqrt(6 * log(a * c) * log(a * d * Big(r)))));
}

}  // namespace precise

double functional_rhs(double n, double m, double h_n, double h_m, const BoundParams& p) {
  require_at_least_one(n, "n");
  require_at_least_one(m, "m");
  if (h_n < 0 || h_m < 0) throw InvalidInput("entropies must be nonnegative");
  p.validate();
  const double c4 = std::pow(p.C, 4);
  return p.A * (c4 * h_m +
                c4 * std::pow(p.d, 1.5) * std::sqrt(n / std::min(n, m)) *
                    (std::sqrt(h_n) + std::sqrt(std::log(2 * p.C * n))) +
                p.d * c4 * (p.C + std::log(p.d)) / n);
}

double bootstrap_map(double alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw InvalidInput("alpha must lie in (0, 1]");
  return (alpha + alpha * alpha) / (1 + 2 * alpha);
}

BootstrapState bootstrap_step(const BootstrapState& s, const BoundParams& p) {
  p.validate();
  const double a = s.alpha;
  BootstrapState next;
  next.alpha = bootstrap_map(a);
  const double first = std::log(p.A) + 3 * a / (1 + 2 * a) * std::log(p.d) + 4 * std::log(p.C) +
                       (1 + a) / (1 + 2 * a) * s.log_k;
  const double second = std::log(p.A) + 3 * std::log(p.d) + 5 * std::log(p.C);
  next.log_k = log_sum_exp(first, second);
  return next;
}

BootstrapCurve bootstrap_run(const BoundParams& p, const std::vector<double>& ns, double alpha_stop) {
  p.validate();
  if (!(alpha_stop > 0 && alpha_stop < 1)) throw InvalidInput("alpha_stop must lie in (0, 1)");
  BootstrapCurve out;
  const double log_2ac4 = std::log(2 * p.A * std::pow(p.C, 4));
  const double log_d3 = 3 * std::log(p.d);
  BootstrapState s{1.0, std::log(std::log(p.d + 1))};
  for (;;) {
    out.states.push_back(s);
    const double cap = log_d3 + (1 + 2 * s.alpha) / s.alpha * log_2ac4;
    if (s.log_k > cap * (1 + 1e-12)) {
      out.chain_ok = false;
      out.failures.push_back("K exceeds d^3 (2AC^4)^((1+2a)/a) at alpha = " + std::to_string(s.alpha));
    }
    if (s.alpha < alpha_stop) break;
    s = bootstrap_step(s, p);
  }
  for (double n : ns) {
    require_at_least_one(n, "n");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& st : out.states) best = std::min(best, st.log_k + st.alpha * std::log(n));
    const double closed = log_d3 + 2 * std::sqrt(3 * log_2ac4 * std::log(n));
    out.n.push_back(n);
    out.bound.push_back(std::exp(best));
    out.closed_form.push_back(std::exp(closed));
    if (best > closed * (1 + 1e-12) + 1e-12) {
      out.curve_ok = false;
      out.failures.push_back("bootstrap curve exceeds the closed form at n = " + std::to_string(n));
    }
  }
  return out;
}

double elementary_bound(double A, double B, double eps) {
  if (!(eps > 0 && eps <= 1)) throw InvalidInput("epsilon must lie in (0, 1]");
  if (A < 0 || B < 0) throw InvalidInput("A and B must be nonnegative");
  return std::max(std::pow(2 * A, 1 / eps), 2 * B);
}

ElementaryCheck elementary_check(double x, double A, double B, double eps) {
  const double bound = elementary_bound(A, B, eps);
  if (x < 0) throw InvalidInput("x must be nonnegative");
  ElementaryCheck c;
  c.hypothesis = x <= A * std::pow(x, 1 - eps) + B;
  c.conclusion = x <= bound;
  c.pass = !c.hypothesis || c.conclusion;
  return c;
}

GrowthConversion growth_conversion_check(const Graph& g, int r, std::int64_t samples,
                                         std::uint64_t seed, std::size_t mem_cap) {
  if (r < 0) throw InvalidInput("radius must be nonnegative");
  if (!g.connected()) bfs_metric(g, 0);
  GrowthConversion out;
  out.r = r;
  const double d = static_cast<double>(g.max_degree());
  const double c = g.degree_ratio();
  out.n = static_cast<std::int64_t>(std::floor(1280.0 * d * r * r));
  if (out.n > std::numeric_limits<int>::max()) throw InvalidInput("n(r) overflows");
  const int n = static_cast<int>(out.n);

  const auto vcount = static_cast<std::int64_t>(g.vertex_count());
  std::vector<double> lb(g.vertex_count());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t x = 0; x < vcount; ++x)
    lb[x] = std::log(static_cast<double>(ball(g, static_cast<Vertex>(x), r).size()));
  out.avg_log_ball = std::accumulate(lb.begin(), lb.end(), 0.0) / static_cast<double>(vcount);

  if (r == 0) {
    out.pass = out.entropy_pass = true;
    return out;
  }
  if (kernel_matrix_bytes(g) > mem_cap) {
    out.warnings.push_back("dense kernel exceeds the memory cap; growth conversion skipped");
    return out;
  }
  const auto k = kernel_matrix(g, n, mem_cap);
  double h = 0;
  for (Vertex x = 0; x < static_cast<Vertex>(vcount); ++x) h += entropy(k.row(x));
  out.exact = true;
  out.entropy = h / static_cast<double>(vcount);
  out.entropy_bound = 2 * c * c * c * out.entropy + std::log(2.0);
  out.entropy_pass = out.avg_log_ball <= out.entropy_bound;
  out.pass = out.entropy_pass;

  if (samples > 0) {
    const auto sw = cell_entropy_sandwich(g, k, samples, seed);
    out.monte_carlo = true;
    out.cell_log = sw.middle;
    out.cell_sigma = sw.sigma;
    out.cell_bound = 2 * sw.middle + std::log(2.0);
    out.cell_pass = out.avg_log_ball <= out.cell_bound + 2 * 4 * sw.sigma;
    out.pass = out.pass && out.cell_pass;
  }
  return out;
}

}  // namespace curvlab
