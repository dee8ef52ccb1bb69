#include "curvlab/transport.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>

namespace curvlab {

namespace {

template <class T>
bool positive(const T& v) {
  if constexpr (std::is_same_v<T, double>) return v > 1e-15;
  else return sgn(v) > 0;
}

template <class T>
T abs_value(const T& v) {
  if constexpr (std::is_same_v<T, double>) return std::abs(v);
  else return abs(v);
}

template <class T>
T min_value(const T& a, const T& b) {
  return a < b ? T(a) : T(b);
}

std::vector<Vertex> support_union(const auto& mu, const auto& nu) {
  std::vector<Vertex> u;
  merge_supports(mu, nu, [&](Vertex v, const auto&, const auto&) { u.push_back(v); });
  return u;
}

// Residual network on the region around the supports.
template <class T>
struct FlowNetwork {
  std::vector<Vertex> vertex;            // local -> global, increasing
  std::vector<std::size_t> offset;       // CSR over local ids
  std::vector<int> head;                 // local target
  std::vector<std::size_t> mirror;       // slot of the reverse arc
  std::vector<T> flow;                   // net flow along the arc; flow[mirror] = -flow

  int local_count() const { return static_cast<int>(vertex.size()); }
};

template <class T>
FlowNetwork<T> build_region(const Graph& g, const std::vector<int>& dist0, int radius) {
  FlowNetwork<T> net;
  std::vector<int> local(g.vertex_count(), -1);
  for (std::size_t v = 0; v < dist0.size(); ++v) {
    if (dist0[v] >= 0 && dist0[v] <= radius) {
      local[v] = net.local_count();
      net.vertex.push_back(static_cast<Vertex>(v));
    }
  }
  net.offset.push_back(0);
  for (Vertex v : net.vertex) {
    for (const auto& nb : g.neighbors(v))
      if (nb.target != v && local[nb.target] >= 0) net.head.push_back(local[nb.target]);
    net.offset.push_back(net.head.size());
  }
  net.flow.assign(net.head.size(), T(0));
  net.mirror.resize(net.head.size());
  for (int u = 0; u < net.local_count(); ++u) {
    for (std::size_t a = net.offset[u]; a < net.offset[u + 1]; ++a) {
      const int v = net.head[a];
      const auto first = net.head.begin() + net.offset[v];
      const auto last = net.head.begin() + net.offset[v + 1];
      net.mirror[a] = static_cast<std::size_t>(std::lower_bound(first, last, u) - net.head.begin());
    }
  }
  return net;
}

}  // namespace

std::int64_t DualPotential::at(Vertex x) const {
  const auto it = std::lower_bound(values.begin(), values.end(), x,
                                   [](const auto& e, Vertex v) { return e.first < v; });
  if (it == values.end() || it->first != x)
    throw InvalidInput("dual potential has no value at vertex " + std::to_string(x));
  return it->second;
}

bool DualPotential::has(Vertex x) const {
  return std::binary_search(values.begin(), values.end(), std::pair<Vertex, std::int64_t>{x, 0},
                            [](const auto& a, const auto& b) { return a.first < b.first; });
}

template <class T>
T tv_distance(const Dist<T>& mu, const Dist<T>& nu) {
  T total = 0;
  merge_supports(mu, nu, [&](Vertex, const T& a, const T& b) { total += abs_value(T(a - b)); });
  return total / 2;
}

template <class T>
W1Result<T> w1(const Graph& g, const Dist<T>& mu, const Dist<T>& nu) {
  const auto supp = support_union(mu, nu);
  if (supp.empty()) throw InvalidInput("empty distribution");
  for (auto v : supp) g.require_vertex(v);

  const Vertex s0 = supp.front();
  const auto dist0 = bfs_distances(g, s0);
  int reach = 0;
  for (auto v : supp) {
    if (dist0[v] < 0)
      throw DisconnectedGraph("supports are disconnected: vertex " + std::to_string(v) +
                                  " is unreachable from " + std::to_string(s0),
                              v);
    reach = std::max(reach, dist0[v]);
  }

  auto net = build_region<T>(g, dist0, 2 * reach);
  const int n = net.local_count();
  std::vector<int> local_of(g.vertex_count(), -1);
  for (int i = 0; i < n; ++i) local_of[net.vertex[i]] = i;

  std::vector<T> excess(n, T(0));
  for (const auto& [v, m] : mu.entries()) excess[local_of[v]] += m;
  for (const auto& [v, m] : nu.entries()) excess[local_of[v]] -= m;
  const std::vector<T> supply = excess;

  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> pot(n, 0), dist(n);
  std::vector<std::size_t> pred_arc(n);
  std::vector<char> done(n);
  using Item = std::pair<std::int64_t, int>;

  for (;;) {
    bool any = false;
    for (int u = 0; u < n; ++u) any = any || positive(excess[u]);
    if (!any) break;

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int u = 0; u < n; ++u) {
      if (positive(excess[u])) {
        dist[u] = 0;
        pq.emplace(0, u);
      }
    }
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = 1;
      for (std::size_t a = net.offset[u]; a < net.offset[u + 1]; ++a) {
        const int v = net.head[a];
        // cancelling flow that runs v -> u costs -1, a fresh unit costs +1
        const std::int64_t cost = positive(T(-net.flow[a])) ? -1 : 1;
        const std::int64_t nd = du + cost + pot[u] - pot[v];
        if (nd < dist[v]) {
          dist[v] = nd;
          pred_arc[v] = a;
          pq.emplace(nd, v);
        }
      }
    }

    int t = -1;
    for (int v = 0; v < n; ++v)
      if (positive(T(-excess[v])) && (t < 0 || dist[v] < dist[t])) t = v;
    if (t < 0 || dist[t] >= kInf) throw Error("w1: no augmenting path in the residual network");
    for (int v = 0; v < n; ++v) pot[v] += dist[v];

    // bottleneck along the path back from t
    T delta = -excess[t];
    int v = t;
    while (dist[v] != 0 || !positive(excess[v])) {
      const auto a = pred_arc[v];
      if (positive(T(-net.flow[a]))) delta = min_value(delta, T(-net.flow[a]));
      v = net.head[net.mirror[a]];
    }
    const int s = v;
    delta = min_value(delta, excess[s]);
    for (v = t; v != s;) {
      const auto a = pred_arc[v];
      net.flow[a] += delta;
      net.flow[net.mirror[a]] -= delta;
      v = net.head[net.mirror[a]];
    }
    excess[s] -= delta;
    excess[t] += delta;
    if constexpr (std::is_same_v<T, double>) {
      if (std::abs(excess[s]) <= 1e-15) excess[s] = 0;
      if (std::abs(excess[t]) <= 1e-15) excess[t] = 0;
    }
  }

  W1Result<T> result;

  // plan: diagonal mass plus a path decomposition of the flow
  std::map<std::pair<Vertex, Vertex>, T> pairs;
  for (const auto& v : supp) {
    const T m = min_value(mu.mass(v), nu.mass(v));
    if (positive(m)) pairs[{v, v}] += m;
  }
  std::vector<T> remaining = supply;
  auto flow = net.flow;
  for (int s = 0; s < n; ++s) {
    while (positive(remaining[s])) {
      std::vector<std::size_t> path;
      int v = s;
      while (!positive(T(-remaining[v]))) {
        std::size_t next = net.offset[v + 1];
        for (std::size_t a = net.offset[v]; a < net.offset[v + 1]; ++a) {
          if (positive(flow[a])) {
            next = a;
            break;
          }
        }
        if (next == net.offset[v + 1]) throw Error("w1: flow decomposition failed");
        path.push_back(next);
        v = net.head[next];
      }
      T amount = min_value(remaining[s], T(-remaining[v]));
      for (auto a : path) amount = min_value(amount, flow[a]);
      for (auto a : path) {
        flow[a] -= amount;
        flow[net.mirror[a]] += amount;
      }
      remaining[s] -= amount;
      remaining[v] += amount;
      if constexpr (std::is_same_v<T, double>) {
        if (std::abs(remaining[s]) <= 1e-15) remaining[s] = 0;
        if (std::abs(remaining[v]) <= 1e-15) remaining[v] = 0;
      }
      pairs[{net.vertex[s], net.vertex[v]}] += amount;
      result.plan.cost += amount * static_cast<long>(path.size());
    }
  }
  for (auto& [st, m] : pairs) result.plan.entries.push_back({st.first, st.second, m});
  result.cost = result.plan.cost;

  const std::int64_t base = pot[local_of[s0]];
  for (auto v : supp) result.dual.values.emplace_back(v, base - pot[local_of[v]]);
  return result;
}

Rational w1_bruteforce(const Graph& g, const Dist<Rational>& mu, const Dist<Rational>& nu) {
  const auto supp = support_union(mu, nu);
  const int k = static_cast<int>(supp.size());
  if (k > 8) throw InvalidInput("w1_bruteforce supports at most 8 support points");

  std::vector<std::vector<int>> d(k, std::vector<int>(k));
  int diam = 0;
  for (int i = 0; i < k; ++i) {
    const auto row = bfs_metric(g, supp[i]);
    for (int j = 0; j < k; ++j) {
      d[i][j] = row[supp[j]];
      diam = std::max(diam, d[i][j]);
    }
  }
  std::vector<Rational> weight(k);
  for (int i = 0; i < k; ++i) weight[i] = mu.mass(supp[i]) - nu.mass(supp[i]);

  std::vector<int> f(k, 0);
  Rational best = 0;
  bool found = false;
  // f(supp[0]) = 0 fixes the additive constant; the objective ignores it
  auto search = [&](auto&& self, int i) -> void {
    if (i == k) {
      Rational value = 0;
      for (int j = 0; j < k; ++j) value += weight[j] * f[j];
      if (!found || value > best) best = value;
      found = true;
      return;
    }
    const int lo = std::max(-diam, -d[0][i]), hi = std::min(diam, d[0][i]);
    for (int v = lo; v <= hi; ++v) {
      bool ok = true;
      for (int j = 1; j < i && ok; ++j) ok = std::abs(v - f[j]) <= d[i][j];
      if (!ok) continue;
      f[i] = v;
      self(self, i + 1);
    }
  };
  search(search, 1);
  return best;
}

template <class T>
bool verify_duality(const Graph& g, const Dist<T>& mu, const Dist<T>& nu,
                    const TransportPlan<T>& plan, const DualPotential& dual) {
  const bool exact = !std::is_same_v<T, double>;
  auto close = [&](const T& a, const T& b) {
    if constexpr (std::is_same_v<T, double>) return std::abs(a - b) <= 1e-10;
    else return a == b;
  };

  std::map<Vertex, T> row, col;
  T primal = 0;
  std::map<Vertex, std::vector<int>> dist_cache;
  auto distance = [&](Vertex a, Vertex b) {
    auto it = dist_cache.find(a);
    if (it == dist_cache.end()) it = dist_cache.emplace(a, bfs_distances(g, a)).first;
    return it->second[b];
  };
  for (const auto& e : plan.entries) {
    if (!g.valid_vertex(e.source) || !g.valid_vertex(e.target) || e.mass < 0) return false;
    const int dst = distance(e.source, e.target);
    if (dst < 0) return false;
    row[e.source] += e.mass;
    col[e.target] += e.mass;
    primal += e.mass * static_cast<long>(dst);
  }
  bool marginals = true;
  merge_supports(mu, nu, [&](Vertex v, const T& a, const T& b) {
    marginals = marginals && close(row[v], a) && close(col[v], b);
  });
  for (const auto& [v, m] : row) marginals = marginals && (close(m, T(0)) || positive(mu.mass(v)));
  for (const auto& [v, m] : col) marginals = marginals && (close(m, T(0)) || positive(nu.mass(v)));
  if (!marginals) return false;

  const auto supp = support_union(mu, nu);
  T dual_value = 0;
  for (auto v : supp) {
    if (!dual.has(v)) return false;
    dual_value += (mu.mass(v) - nu.mass(v)) * static_cast<long>(dual.at(v));
  }
  for (std::size_t i = 0; i < supp.size(); ++i)
    for (std::size_t j = i + 1; j < supp.size(); ++j)
      if (std::abs(dual.at(supp[i]) - dual.at(supp[j])) > distance(supp[i], supp[j])) return false;
  (void)exact;
  return close(primal, dual_value);
}

template Rational tv_distance(const Dist<Rational>&, const Dist<Rational>&);
template double tv_distance(const Dist<double>&, const Dist<double>&);
template W1Result<Rational> w1(const Graph&, const Dist<Rational>&, const Dist<Rational>&);
template W1Result<double> w1(const Graph&, const Dist<double>&, const Dist<double>&);
template bool verify_duality(const Graph&, const Dist<Rational>&, const Dist<Rational>&,
                             const TransportPlan<Rational>&, const DualPotential&);
template bool verify_duality(const Graph&, const Dist<double>&, const Dist<double>&,
                             const TransportPlan<double>&, const DualPotential&);

}  // namespace curvlab
