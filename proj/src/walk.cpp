#include "curvlab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "curvlab/curvature.hpp"

namespace curvlab {

namespace {

// Neumaier summation
struct Sum {
  double s = 0, c = 0;
  void add(double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) c += (s - t) + v;
    else c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

std::vector<int> sorted_steps(std::span<const int> ns) {
  std::set<int> s(ns.begin(), ns.end());
  for (int n : s)
    if (n < 0) throw InvalidInput("step counts must be nonnegative");
  return {s.begin(), s.end()};
}

struct RowSummary {
  double entropy, displacement, second_moment, return_prob, log_ball, vc_ratio, drift;
};

RowSummary summarize_row(const Graph& g, const RowStepper<double>& st, int n) {
  const auto verts = st.vertices();
  const auto dist = st.distances();
  const auto mass = st.masses();
  const Vertex x = st.root();
  Sum h, d1, d2, total;
  double vc = 0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const double p = mass[i];
    total.add(p);
    if (p <= 0) continue;
    if (p >= 1e-300) h.add(-p * std::log(p));
    d1.add(p * dist[i]);
    d2.add(p * static_cast<double>(dist[i]) * dist[i]);
    if (n > 0) {
      const double bound = 2.0 * std::sqrt(static_cast<double>(g.degree(verts[i])) / g.degree(x)) *
                           std::exp(-static_cast<double>(dist[i]) * dist[i] / (2.0 * n));
      vc = std::max(vc, p / bound);
    }
  }
  return {h.value(), d1.value(), d2.value(), mass[0], std::log(static_cast<double>(verts.size())), vc,
          std::abs(total.value() - 1.0)};
}

template <bool Parallel>
std::vector<WalkStats> grid_impl(const Graph& g, std::span<const int> ns_in) {
  const auto ns = sorted_steps(ns_in);
  const auto v = static_cast<std::int64_t>(g.vertex_count());
  std::vector<WalkStats> out(ns.size());
  for (std::size_t k = 0; k < ns.size(); ++k) {
    auto& s = out[k];
    s.n = ns[k];
    for (auto* f : {&s.entropy, &s.displacement, &s.second_moment, &s.return_prob, &s.log_ball,
                    &s.vc_ratio, &s.mass_drift})
      f->assign(g.vertex_count(), 0.0);
  }
  if (ns.empty()) return out;

  auto run_vertex = [&](RowStepper<double>& st, Vertex x) {
    st.reset(x);
    std::size_t k = 0;
    while (k < ns.size() && ns[k] == 0) {
      const auto r = summarize_row(g, st, 0);
      auto& s = out[k++];
      s.entropy[x] = r.entropy;
      s.displacement[x] = r.displacement;
      s.second_moment[x] = r.second_moment;
      s.return_prob[x] = r.return_prob;
      s.log_ball[x] = r.log_ball;
      s.vc_ratio[x] = 0.5;
      s.mass_drift[x] = r.drift;
    }
    for (int step = 1; k < ns.size(); ++step) {
      st.step();
      if (step != ns[k]) continue;
      const auto r = summarize_row(g, st, step);
      auto& s = out[k++];
      s.entropy[x] = r.entropy;
      s.displacement[x] = r.displacement;
      s.second_moment[x] = r.second_moment;
      s.return_prob[x] = r.return_prob;
      s.log_ball[x] = r.log_ball;
      s.vc_ratio[x] = r.vc_ratio;
      s.mass_drift[x] = r.drift;
    }
  };

  if constexpr (Parallel) {
#pragma omp parallel
    {
      RowStepper<double> st(g);
#pragma omp for schedule(dynamic, 4)
      for (std::int64_t x = 0; x < v; ++x) run_vertex(st, static_cast<Vertex>(x));
    }
  } else {
    RowStepper<double> st(g);
    for (std::int64_t x = 0; x < v; ++x) run_vertex(st, static_cast<Vertex>(x));
  }

  for (auto& s : out) {
    Sum h, d1, d2;
    for (std::int64_t x = 0; x < v; ++x) {
      h.add(s.entropy[x]);
      d1.add(s.displacement[x]);
      d2.add(s.second_moment[x]);
    }
    s.mean_entropy = h.value() / v;
    s.mean_displacement = d1.value() / v;
    s.mean_second_moment = d2.value() / v;
  }
  return out;
}

// One dense step M <- M P, rows in parallel.
KernelMatrix step_matrix(const Graph& g, const KernelMatrix& m) {
  const std::size_t n = m.size();
  KernelMatrix out(n);
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t x = 0; x < rows; ++x) {
    const auto src = m.row(static_cast<Vertex>(x));
    auto dst = out.row(static_cast<Vertex>(x));
    for (std::size_t u = 0; u < n; ++u) {
      const double p = src[u];
      if (p == 0.0) continue;
      dst[u] += 0.5 * p;
      const double w = p / (2.0 * static_cast<double>(g.degree(static_cast<Vertex>(u))));
      for (const auto& nb : g.neighbors(static_cast<Vertex>(u))) dst[nb.target] += w * nb.count;
    }
  }
  return out;
}

double tv_rows(std::span<const double> a, std::span<const double> b) {
  Sum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(std::abs(a[i] - b[i]));
  return 0.5 * s.value();
}

double tv_decay_bound(const Graph& g, int n) {
  return std::sqrt(20.0 * static_cast<double>(g.max_degree()) / (n + 1.0));
}

}  // namespace

template <class T>
KernelRow<T> kernel_row(const Graph& g, Vertex x, int n, std::size_t mem_cap) {
  if (n < 0) throw InvalidInput("step count must be nonnegative");
  g.require_vertex(x);
  KernelRow<T> row{x, n, {}, 0, false};
  if constexpr (std::is_same_v<T, Rational>) {
    // rough cap check on the ball: numerators grow by log2(scale) bits a step
    RowStepper<BigInt> st(g);
    st.reset(x);
    for (int k = 0; k < n; ++k) {
      st.step();
      const std::size_t bytes =
          st.vertices().size() * (sizeof(BigInt) + mpz_sizeinbase(st.scale().get_mpz_t(), 2) * (k + 1) / 8 + 8);
      if (bytes > mem_cap)
        throw MemoryCapExceeded("exact row from vertex " + std::to_string(x) + " needs a ball of " +
                                    std::to_string(st.vertices().size()) + " vertices above the memory cap",
                                bytes);
    }
    BigInt denom;
    mpz_pow_ui(denom.get_mpz_t(), st.scale().get_mpz_t(), static_cast<unsigned long>(n));
    std::vector<Dist<Rational>::Entry> e;
    const auto verts = st.vertices();
    const auto mass = st.masses();
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (sgn(mass[i]) == 0) continue;
      Rational q(mass[i], denom);
      q.canonicalize();
      e.emplace_back(verts[i], q);
    }
    row.dist = Dist<Rational>::from_entries(std::move(e));
  } else {
    RowStepper<double> st(g);
    st.reset(x);
    for (int k = 0; k < n; ++k) {
      st.step();
      const std::size_t bytes = st.vertices().size() * 3 * sizeof(double);
      if (bytes > mem_cap)
        throw MemoryCapExceeded("row from vertex " + std::to_string(x) + " needs a ball of " +
                                    std::to_string(st.vertices().size()) + " vertices above the memory cap",
                                bytes);
    }
    std::vector<Dist<double>::Entry> e;
    Sum total;
    const auto verts = st.vertices();
    const auto mass = st.masses();
    for (std::size_t i = 0; i < verts.size(); ++i) {
      total.add(mass[i]);
      if (mass[i] > 0) e.emplace_back(verts[i], mass[i]);
    }
    row.mass_drift = std::abs(total.value() - 1.0);
    row.drift_flag = row.mass_drift > 1e-9;
    row.dist = Dist<double>::from_entries(std::move(e), 1e-6);
  }
  return row;
}

template KernelRow<Rational> kernel_row(const Graph&, Vertex, int, std::size_t);
template KernelRow<double> kernel_row(const Graph&, Vertex, int, std::size_t);

std::vector<WalkStats> walk_stats_grid(const Graph& g, std::span<const int> ns) {
  return grid_impl<true>(g, ns);
}

namespace serial {
std::vector<WalkStats> walk_stats_grid(const Graph& g, std::span<const int> ns) {
  return grid_impl<false>(g, ns);
}
}  // namespace serial

WalkStats walk_stats(const Graph& g, int n, std::size_t mem_cap) {
  if (n < 1) throw InvalidInput("walk_stats needs n >= 1");
  const int ns[] = {n};
  auto s = std::move(walk_stats_grid(g, ns).front());
  if (kernel_matrix_bytes(g) <= mem_cap) {
    const auto m = kernel_matrix(g, n, mem_cap);
    const auto pairs = g.adjacent_pairs();
    std::vector<double> tv(pairs.size());
    const auto np = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < np; ++i) tv[i] = tv_rows(m.row(pairs[i].first), m.row(pairs[i].second));
    Sum mean;
    for (double t : tv) {
      s.tv_max = std::max(s.tv_max, t);
      mean.add(t);
    }
    s.tv_mean = pairs.empty() ? 0.0 : mean.value() / static_cast<double>(pairs.size());
    s.has_tv = true;
  }
  return s;
}

TvDecayResult tv_decay_check(const Graph& g, std::span<const int> ns_in, std::size_t mem_cap, Hypothesis h) {
  const auto ns = sorted_steps(ns_in);
  TvDecayResult res;
  if (ns.empty()) return res;
  if (!hypothesis_holds(g, h)) res.check.warnings.emplace_back(kHypothesisWarning);
  const auto pairs = g.adjacent_pairs();
  const auto np = static_cast<std::int64_t>(pairs.size());
  const int nmax = ns.back();
  const BigInt eighty_d = 80 * g.max_degree();

  if (ExactKernel::estimated_bytes(g, nmax) <= mem_cap) {
    res.exact = true;
    ExactKernel ek(g, nmax, mem_cap);
    std::vector<double> tv(pairs.size());
    std::vector<char> ok(pairs.size());
    std::size_t k = 0;
    while (k < ns.size() && ns[k] == 0) {
      res.tv_max.push_back(0);
      res.check.record_exact(0, tv_decay_bound(g, 0), true);
      ++k;
    }
    for (int step = 1; k < ns.size(); ++step) {
      ek.step();
      if (step != ns[k]) continue;
      const BigInt denom2 = ek.denominator() * ek.denominator();
#pragma omp parallel for schedule(dynamic, 4)
      for (std::int64_t i = 0; i < np; ++i) {
        const auto a = ek.row(pairs[i].first);
        const auto b = ek.row(pairs[i].second);
        BigInt s = 0, diff;
        for (std::size_t j = 0; j < a.size(); ++j) {
          mpz_sub(diff.get_mpz_t(), a[j].get_mpz_t(), b[j].get_mpz_t());
          mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
          s += diff;
        }
        // TV = s / (2 L^n);  TV^2 <= 20 d / (n+1)  <=>  s^2 (n+1) <= 80 d L^{2n}
        const BigInt lhs = s * s * (step + 1);
        const BigInt rhs = eighty_d * denom2;
        ok[i] = lhs <= rhs;
        Rational q(s, 2 * ek.denominator());
        q.canonicalize();
        tv[i] = q.get_d();
      }
      double worst = 0;
      for (std::int64_t i = 0; i < np; ++i) {
        worst = std::max(worst, tv[i]);
        res.check.record_exact(tv[i], tv_decay_bound(g, step), ok[i]);
      }
      res.tv_max.push_back(worst);
      ++k;
    }
    return res;
  }

  if (kernel_matrix_bytes(g) * 2 > mem_cap)
    throw MemoryCapExceeded("tv_decay_check needs two dense kernels", kernel_matrix_bytes(g) * 2);
  res.check.warnings.emplace_back("exact kernel exceeds the memory cap; TV computed in doubles");
  KernelMatrix m = kernel_matrix(g, 0, mem_cap);
  std::size_t k = 0;
  for (int step = 0; k < ns.size(); ++step) {
    if (step > 0) m = step_matrix(g, m);
    if (step != ns[k]) continue;
    std::vector<double> tv(pairs.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < np; ++i) tv[i] = tv_rows(m.row(pairs[i].first), m.row(pairs[i].second));
    double worst = 0;
    for (double t : tv) {
      worst = std::max(worst, t);
      res.check.record(t, tv_decay_bound(g, step), kRoundingSlack);
    }
    res.tv_max.push_back(worst);
    ++k;
  }
  return res;
}

CheckResult vc_check(const Graph& g, std::span<const WalkStats> stats) {
  CheckResult c;
  for (const auto& s : stats) {
    if (s.n == 0) continue;
    for (std::size_t x = 0; x < g.vertex_count(); ++x) c.record(s.vc_ratio[x], 1.0, kRoundingSlack);
  }
  return c;
}

CheckResult vc_entropy_check(const Graph& g, std::span<const WalkStats> stats) {
  CheckResult c;
  const double log4c = std::log(4.0 * g.degree_ratio());
  for (const auto& s : stats) {
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
      const double bound = 2.0 * s.n * s.entropy[x] + s.n * log4c;
      c.record(s.second_moment[x], bound, kRoundingSlack * std::max(1.0, bound));
    }
  }
  return c;
}

CheckResult return_prob_check(const Graph& g, std::span<const WalkStats> stats, Hypothesis h) {
  CheckResult c;
  if (!hypothesis_holds(g, h)) c.warnings.emplace_back(kHypothesisWarning);
  for (const auto& s : stats) {
    if (s.n == 0) continue;
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
      const double bound = 2.0 * std::exp(-s.displacement[x] * s.displacement[x] / (8.0 * s.n));
      c.record(s.return_prob[x], bound, kRoundingSlack);
    }
  }
  return c;
}

CheckResult dn_lipschitz_check(const Graph& g, std::span<const WalkStats> stats, Hypothesis h) {
  CheckResult c;
  if (!hypothesis_holds(g, h)) c.warnings.emplace_back(kHypothesisWarning);
  const auto pairs = g.adjacent_pairs();
  for (const auto& s : stats)
    for (const auto& [x, y] : pairs) c.record(std::abs(s.displacement[x] - s.displacement[y]), 2.0, 1e-9);
  return c;
}

ConcentrationResult concentration_check(const Graph& g, Vertex x, int n, const LipField& f,
                                        std::span<const double> lambdas, Hypothesis h) {
  if (n < 1) throw InvalidInput("concentration_check needs n >= 1");
  if (f.values.size() != g.vertex_count()) throw InvalidInput("field size does not match vertex count");
  ConcentrationResult res;
  if (!hypothesis_holds(g, h)) res.check.warnings.emplace_back(kHypothesisWarning);
  RowStepper<double> st(g);
  st.reset(x);
  for (int k = 0; k < n; ++k) st.step();
  const auto verts = st.vertices();
  const auto mass = st.masses();
  Sum mean;
  for (std::size_t i = 0; i < verts.size(); ++i) mean.add(mass[i] * f[verts[i]]);
  const double mu = mean.value();
  const double lip = lipschitz_constant(g, f.values);
  const double scale = lip > 0 ? lip : 1.0;
  for (double lambda : lambdas) {
    if (!(lambda > 0)) throw InvalidInput("lambda must be positive");
    const double cut = lambda * std::sqrt(static_cast<double>(n)) * scale;
    Sum tail;
    // ties at the threshold count toward the tail
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (std::abs(f[verts[i]] - mu) >= cut - 1e-9) tail.add(mass[i]);
    const double bound = 2.0 * std::exp(-lambda * lambda / 8.0);
    res.table.push_back({lambda, tail.value(), bound});
    res.check.record(tail.value(), bound, kRoundingSlack);
  }
  return res;
}

}  // namespace curvlab
