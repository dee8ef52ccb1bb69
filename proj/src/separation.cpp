#include "curvlab/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "curvlab/curvature.hpp"
#include "curvlab/lp.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

constexpr double kLipTol = 1e-12;

// min over sources of (init[s] + d(s, v)), unit edge lengths
std::vector<double> multi_source(const Graph& g, std::span<const Vertex> src,
                                 std::span<const double> init) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(g.vertex_count(), inf);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (init[i] < best[src[i]]) {
      best[src[i]] = init[i];
      pq.emplace(init[i], src[i]);
    }
  }
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > best[u]) continue;
    for (const auto& nb : g.neighbors(u)) {
      if (d + 1 < best[nb.target]) {
        best[nb.target] = d + 1;
        pq.emplace(d + 1, nb.target);
      }
    }
  }
  return best;
}

std::vector<char> membership(const Graph& g, std::span<const Vertex> s, const char* what) {
  std::vector<char> in(g.vertex_count(), 0);
  for (auto v : s) {
    g.require_vertex(v);
    if (in[v]) throw InvalidInput(std::string(what) + " lists vertex " + std::to_string(v) + " twice");
    in[v] = 1;
  }
  return in;
}

void require_connected_core(const Graph& g, std::span<const Vertex> core) {
  if (core.empty()) throw InvalidInput("K must be nonempty");
  const auto in = membership(g, core, "K");
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<Vertex> stack{core[0]};
  seen[core[0]] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    for (const auto& nb : g.neighbors(u)) {
      if (in[nb.target] && !seen[nb.target]) {
        seen[nb.target] = 1;
        ++reached;
        stack.push_back(nb.target);
      }
    }
  }
  if (reached != core.size()) throw InvalidInput("K must induce a connected subgraph");
}

void fill_residuals(const Graph& g, const std::vector<char>& in_core, SeparationResult& r) {
  const auto& f = r.f.values;
  const auto lap = laplacian(g, f);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (!in_core[v]) continue;
    lo = std::min(lo, lap[v]);
    hi = std::max(hi, lap[v]);
  }
  r.lambda = lo;
  r.flat_residual = hi - lo;
  r.outside_residual = 0;
  r.descent_residual = 0;
  double min_all = std::numeric_limits<double>::infinity();
  double min_core = min_all;
  for (std::size_t v = 0; v < f.size(); ++v) {
    min_all = std::min(min_all, f[v]);
    if (in_core[v]) {
      min_core = std::min(min_core, f[v]);
      continue;
    }
    r.outside_residual = std::max(r.outside_residual, lap[v] - r.lambda);
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& nb : g.neighbors(static_cast<Vertex>(v)))
      if (nb.target != static_cast<Vertex>(v)) lowest = std::min(lowest, f[nb.target]);
    r.descent_residual = std::max(r.descent_residual, lowest - f[v] + 1);
  }
  r.min_on_core = min_core <= min_all;
}

SeparationResult finish(const Graph& g, std::span<const Vertex> core, std::vector<double> h,
                        const std::vector<char>& in_core) {
  SeparationResult r;
  auto f = extension_S(g, core, h).values;
  const double m = *std::min_element(f.begin(), f.end());
  for (auto& v : f) v -= m;
  r.f = LipField::from_values(g, std::move(f));
  fill_residuals(g, in_core, r);
  return r;
}

// Maximize t subject to t <= Δ(S h)(x) on K and h 1-Lipschitz on K.
// Exterior neighbours of K get a variable s_y <= h_z + d(y, z); since Δ is
// increasing in neighbour values this relaxation has the same optimum.
// Variables are shifted so that the origin is feasible and all are >= 0:
//   h = h' - d(., z0), s = s' - d(., z0), t = t' - 1, with h(z0) = 0 fixed.
std::vector<double> solve_program(const Graph& g, std::span<const Vertex> core,
                                  const std::vector<char>& in_core, long& pivots) {
  const std::size_t k = core.size();
  std::vector<int> core_index(g.vertex_count(), -1);
  for (std::size_t i = 0; i < k; ++i) core_index[core[i]] = static_cast<int>(i);

  std::vector<Vertex> rim;
  std::vector<int> rim_index(g.vertex_count(), -1);
  for (auto x : core)
    for (const auto& nb : g.neighbors(x))
      if (!in_core[nb.target] && rim_index[nb.target] < 0) {
        rim_index[nb.target] = static_cast<int>(rim.size());
        rim.push_back(nb.target);
      }

  std::vector<std::vector<int>> dist(k);
  for (std::size_t i = 0; i < k; ++i) dist[i] = bfs_metric(g, core[i]);
  const auto& d0 = dist[0];

  // column layout: h' for core[1..k), s' per rim vertex, t'
  const std::size_t nh = k - 1;
  const std::size_t n = nh + rim.size() + 1;
  const std::size_t tcol = n - 1;
  auto hcol = [&](Vertex v) -> long { return core_index[v] == 0 ? -1 : core_index[v] - 1; };
  auto value_col = [&](Vertex v) -> long {
    if (in_core[v]) return hcol(v);
    return static_cast<long>(nh + rim_index[v]);
  };

  LinearProgram lp;
  lp.c.assign(n, 0.0);
  lp.c[tcol] = 1;

  for (auto x : core) {
    std::vector<double> row(n, 0.0);
    row[tcol] = 1;
    const double twodeg = 2.0 * static_cast<double>(g.degree(x));
    double rhs = 1;
    for (const auto& nb : g.neighbors(x)) {
      if (nb.target == x) continue;
      const double p = static_cast<double>(nb.count) / twodeg;
      const long vc = value_col(nb.target);
      if (vc >= 0) row[vc] -= p;
      if (const long hc = hcol(x); hc >= 0) row[hc] += p;
      rhs -= p * (d0[nb.target] - d0[x]);
    }
    lp.a.push_back(std::move(row));
    lp.b.push_back(rhs);
  }

  // Lipschitz constraints on pairs of K with no other K vertex between them
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const Vertex u = core[i], v = core[j];
      const int duv = dist[i][v];
      bool reducible = false;
      for (std::size_t w = 0; w < k && !reducible; ++w)
        if (w != i && w != j && dist[w][u] + dist[w][v] == duv) reducible = true;
      if (reducible) continue;
      const long cu = hcol(u), cv = hcol(v);
      if (cu < 0) continue;  // u = z0 gives -h'_v <= 0, implied by h' >= 0
      std::vector<double> row(n, 0.0);
      row[cu] += 1;
      if (cv >= 0) row[cv] -= 1;
      lp.a.push_back(std::move(row));
      lp.b.push_back(duv + d0[u] - d0[v]);
    }
  }

  // s_y <= h_z + d(y, z)
  for (auto y : rim) {
    for (std::size_t j = 0; j < k; ++j) {
      const int dyz = dist[j][y];
      bool reducible = false;
      for (std::size_t w = 0; w < k && !reducible; ++w)
        if (w != j && dist[w][y] + dist[w][core[j]] == dyz) reducible = true;
      if (reducible) continue;
      std::vector<double> row(n, 0.0);
      row[value_col(y)] = 1;
      if (const long cz = hcol(core[j]); cz >= 0) row[cz] -= 1;
      lp.a.push_back(std::move(row));
      lp.b.push_back(dyz + d0[y] - d0[core[j]]);
    }
  }

  const auto sol = solve_lp(lp);
  pivots = sol.pivots;
  if (sol.status != LpStatus::Optimal)
    throw NonConvergence("separation program did not reach an optimum after " +
                         std::to_string(sol.pivots) + " pivots");
  std::vector<double> h(k, 0.0);
  for (std::size_t i = 1; i < k; ++i) h[i] = sol.x[i - 1] - d0[core[i]];
  return h;
}

struct Spread {
  double lo, hi;
  double spread() const { return hi - lo; }
};

Spread core_spread(const Graph& g, std::span<const Vertex> core, std::span<const double> f,
                   std::vector<double>* lap_out) {
  Spread s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  if (lap_out) lap_out->resize(core.size());
  for (std::size_t i = 0; i < core.size(); ++i) {
    const double l = laplacian_at(g, f, core[i]);
    s.lo = std::min(s.lo, l);
    s.hi = std::max(s.hi, l);
    if (lap_out) (*lap_out)[i] = l;
  }
  return s;
}

std::vector<double> solve_fixed_point(const Graph& g, std::span<const Vertex> core, long& iters) {
  constexpr long kCap = 100000;
  constexpr double kStop = 1e-8;
  std::vector<double> h(core.size(), 0.0);
  std::vector<double> lap;
  auto f = extension_S(g, core, h).values;
  Spread cur = core_spread(g, core, f, &lap);
  double eps = 0.5;
  std::vector<std::string> trace;
  for (iters = 0; iters < kCap; ++iters) {
    if (cur.spread() < kStop) return h;
    if (iters % 10000 == 0) {
      std::ostringstream os;
      os << "iter " << iters << ": min " << cur.lo << ", spread " << cur.spread() << ", eps " << eps;
      trace.push_back(os.str());
    }
    std::vector<double> next(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) next[i] = h[i] + eps * lap[i];
    const double shift = next[0];
    for (auto& v : next) v -= shift;

    bool accepted = false;
    try {
      auto fn = extension_S(g, core, next).values;
      std::vector<double> lap_next;
      const Spread s = core_spread(g, core, fn, &lap_next);
      if (s.lo > cur.lo || (s.lo >= cur.lo - 1e-15 && s.spread() < cur.spread())) {
        h = std::move(next);
        lap = std::move(lap_next);
        cur = s;
        accepted = true;
      }
    } catch (const InvalidInput&) {
      // step left the Lipschitz polytope; retry smaller
    }
    if (!accepted) {
      eps /= 2;
      if (eps < 1e-14) break;
    }
  }
  std::ostringstream os;
  os << "fixed-point iteration stalled after " << iters << " iterations (spread " << cur.spread()
     << ", eps " << eps << ")";
  for (const auto& t : trace) os << "\n  " << t;
  throw NonConvergence(os.str());
}

}  // namespace

LipField extension_S(const Graph& g, const Split& split, std::span<const double> f_on_K) {
  const auto& core = split.core;
  if (core.empty()) throw InvalidInput("K must be nonempty");
  if (f_on_K.size() != core.size()) throw InvalidInput("f_on_K must have one value per K vertex");
  const auto in_core = membership(g, core, "K");
  const auto in_x = membership(g, split.interior, "X");
  for (auto x : split.interior)
    if (in_core[x]) throw InvalidInput("vertex " + std::to_string(x) + " is in both X and K");
  for (auto x : split.interior)
    for (const auto& nb : g.neighbors(x))
      if (!in_x[nb.target] && !in_core[nb.target])
        throw InvalidInput("edge (" + std::to_string(x) + ", " + std::to_string(nb.target) +
                           ") joins X and Y");

  for (std::size_t i = 0; i < core.size(); ++i) {
    const auto d = bfs_metric(g, core[i]);
    for (std::size_t j = i + 1; j < core.size(); ++j) {
      const double gap = std::abs(f_on_K[i] - f_on_K[j]);
      const double dij = d[core[j]];
      if (gap > dij + kLipTol * std::max(1.0, dij)) {
        std::ostringstream os;
        os << "data on K is not 1-Lipschitz: |f(" << core[i] << ") - f(" << core[j] << ")| = " << gap
           << " > d = " << dij;
        throw InvalidInput(os.str());
      }
    }
  }

  auto upper = multi_source(g, core, f_on_K);
  std::vector<double> values = upper;
  if (!split.interior.empty()) {
    std::vector<double> neg(f_on_K.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -f_on_K[i];
    const auto lower = multi_source(g, core, neg);
    for (auto x : split.interior) values[x] = -lower[x];
  }
  for (std::size_t i = 0; i < core.size(); ++i) values[core[i]] = f_on_K[i];
  for (std::size_t v = 0; v < values.size(); ++v)
    if (!std::isfinite(values[v]))
      throw DisconnectedGraph("vertex " + std::to_string(v) + " is unreachable from K",
                              static_cast<Vertex>(v));
  return LipField::from_values(g, std::move(values));
}

LipField extension_S(const Graph& g, std::span<const Vertex> core, std::span<const double> f_on_K) {
  Split s;
  s.core.assign(core.begin(), core.end());
  return extension_S(g, s, f_on_K);
}

double separation_objective(const Graph& g, std::span<const Vertex> core, std::span<const double> h) {
  const auto f = extension_S(g, core, h).values;
  return core_spread(g, core, f, nullptr).lo;
}

std::vector<double> random_lipschitz_data(const Graph& g, std::span<const Vertex> core,
                                          std::uint64_t seed) {
  Rng rng(seed, 0);
  std::vector<std::vector<int>> dist;
  std::vector<double> h(core.size(), 0.0);
  for (std::size_t i = 0; i < core.size(); ++i) {
    dist.push_back(bfs_metric(g, core[i]));
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < i; ++j) {
      lo = std::max(lo, h[j] - dist[j][core[i]]);
      hi = std::min(hi, h[j] + dist[j][core[i]]);
    }
    if (i == 0) {
      lo = -1;
      hi = 1;
    }
    h[i] = lo + (hi - lo) * rng.uniform();
  }
  return h;
}

SeparationResult separation_solve(const Graph& g, std::span<const Vertex> core_in,
                                  SeparationMode mode, Hypothesis hyp) {
  std::vector<Vertex> core(core_in.begin(), core_in.end());
  require_connected_core(g, core);
  if (!g.connected()) bfs_metric(g, 0);
  std::sort(core.begin(), core.end());
  const auto in_core = membership(g, core, "K");

  long iters = 0;
  std::vector<double> h = mode == SeparationMode::Program ? solve_program(g, core, in_core, iters)
                                                          : solve_fixed_point(g, core, iters);
  auto r = finish(g, core, std::move(h), in_core);
  r.iterations = iters;
  r.mode = mode;
  if (!hypothesis_holds(g, hyp)) r.warnings.emplace_back(kHypothesisWarning);
  return r;
}

}  // namespace curvlab
