#include "curvlab/generators.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "curvlab/rng.hpp"

namespace curvlab::gen {

namespace {

std::int64_t checked_volume(const std::vector<int>& orders) {
  if (orders.empty()) throw InvalidInput("group needs at least one factor");
  std::int64_t n = 1;
  for (int o : orders) {
    if (o < 1) throw InvalidInput("group orders must be positive");
    n *= o;
    if (n > (std::int64_t{1} << 28)) throw InvalidInput("group too large");
  }
  return n;
}

std::vector<int> decode(std::int64_t x, const std::vector<int>& orders) {
  std::vector<int> c(orders.size());
  for (std::size_t i = orders.size(); i-- > 0;) {
    c[i] = static_cast<int>(x % orders[i]);
    x /= orders[i];
  }
  return c;
}

int mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

Vertex torus_index(const std::vector<int>& dims, const std::vector<int>& coords) {
  std::int64_t x = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) x = x * dims[i] + mod(coords[i], dims[i]);
  return static_cast<Vertex>(x);
}

Graph abelian_cayley(const std::vector<int>& orders,
                     const std::vector<std::vector<int>>& generators) {
  const auto n = checked_volume(orders);
  if (generators.empty()) throw InvalidInput("generator multiset is empty");

  std::map<std::vector<int>, int> count;
  for (const auto& s : generators) {
    if (s.size() != orders.size()) throw InvalidInput("generator has wrong dimension");
    std::vector<int> r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) r[i] = mod(s[i], orders[i]);
    ++count[r];
  }
  int zeros = 0;
  for (const auto& [s, c] : count) {
    std::vector<int> neg(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) neg[i] = mod(-s[i], orders[i]);
    const auto it = count.find(neg);
    if (it == count.end() || it->second != c)
      throw InvalidInput("generator multiset is not closed under negation");
    if (std::all_of(s.begin(), s.end(), [](int v) { return v == 0; })) zeros = c;
  }
  if (zeros % 2 != 0) throw InvalidInput("zero generators must come in pairs");

  std::vector<EdgeSpec> edges;
  for (std::int64_t x = 0; x < n; ++x) {
    const auto cx = decode(x, orders);
    for (const auto& [s, c] : count) {
      std::vector<int> cy(cx.size());
      for (std::size_t i = 0; i < cx.size(); ++i) cy[i] = cx[i] + s[i];
      const Vertex y = torus_index(orders, cy);
      // every undirected edge is seen from both ends; keep the half with x < y
      if (y > x) edges.push_back({static_cast<Vertex>(x), y, c});
    }
    if (zeros > 0) edges.push_back({static_cast<Vertex>(x), static_cast<Vertex>(x), zeros / 2});
  }
  return Graph::from_edges(static_cast<std::size_t>(n), edges);
}

Graph cycle(int n) {
  if (n < 3) throw InvalidInput("cycle needs n >= 3");
  return abelian_cayley({n}, {{1}, {-1}});
}

Graph torus(const std::vector<int>& dims) {
  if (dims.empty()) throw InvalidInput("torus needs at least one dimension");
  std::vector<std::vector<int>> gens;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 3) throw InvalidInput("torus sides must be >= 3");
    std::vector<int> e(dims.size(), 0);
    e[i] = 1;
    gens.push_back(e);
    e[i] = -1;
    gens.push_back(e);
  }
  return abelian_cayley(dims, gens);
}

Graph hypercube(int k) {
  if (k < 1 || k > 24) throw InvalidInput("hypercube dimension must be in [1, 24]");
  std::vector<int> orders(k, 2);
  std::vector<std::vector<int>> gens;
  for (int i = 0; i < k; ++i) {
    std::vector<int> e(k, 0);
    e[i] = 1;
    gens.push_back(e);
  }
  return abelian_cayley(orders, gens);
}

Graph complete(int n) {
  if (n < 2) throw InvalidInput("complete graph needs n >= 2");
  std::vector<EdgeSpec> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v, 1});
  return Graph::from_edges(n, edges);
}

Graph triangular_torus(int n, int m) {
  if (n < 3 || m < 3) throw InvalidInput("triangular torus sides must be >= 3");
  return abelian_cayley({n, m}, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}});
}

Graph hexagonal_torus(int n, int m) {
  if (n < 4 || m < 4 || n % 2 != 0 || m % 2 != 0)
    throw InvalidInput("hexagonal torus sides must be even and >= 4");
  const std::vector<int> dims{n, m};
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const Vertex x = torus_index(dims, {i, j});
      edges.push_back({x, torus_index(dims, {i + 1, j}), 1});
      if ((i + j) % 2 == 0) edges.push_back({x, torus_index(dims, {i, j + 1}), 1});
    }
  }
  return Graph::from_edges(static_cast<std::size_t>(n) * m, edges);
}

Graph random_regular(int n, int d, std::uint64_t seed) {
  if (n < 2 || d < 1 || d >= n) throw InvalidInput("random_regular needs 1 <= d < n");
  if ((static_cast<std::int64_t>(n) * d) % 2 != 0) throw InvalidInput("random_regular needs n*d even");

  Rng rng(seed, 0x7265677531ULL);
  std::vector<Vertex> points(static_cast<std::size_t>(n) * d);
  for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<Vertex>(i / d);

  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (std::size_t i = points.size() - 1; i > 0; --i)
      std::swap(points[i], points[rng.below(i + 1)]);
    std::vector<EdgeSpec> edges;
    std::vector<std::pair<Vertex, Vertex>> seen;
    bool simple = true;
    for (std::size_t i = 0; i < points.size() && simple; i += 2) {
      auto u = points[i], v = points[i + 1];
      if (u == v) simple = false;
      if (u > v) std::swap(u, v);
      seen.emplace_back(u, v);
      edges.push_back({u, v, 1});
    }
    if (!simple) continue;
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) continue;
    auto g = Graph::from_edges(n, edges);
    if (g.connected()) return g;
  }
  throw InvalidInput("random_regular: no simple connected sample found");
}

Graph cartesian_product(const Graph& g, const Graph& h) {
  const auto ng = static_cast<Vertex>(g.vertex_count());
  const auto nh = static_cast<Vertex>(h.vertex_count());
  if (static_cast<std::int64_t>(ng) * nh > (std::int64_t{1} << 28))
    throw InvalidInput("product too large");
  std::vector<EdgeSpec> edges;
  for (const auto& e : g.edge_bundles())
    for (Vertex b = 0; b < nh; ++b) edges.push_back({e.u * nh + b, e.v * nh + b, e.multiplicity});
  for (const auto& e : h.edge_bundles())
    for (Vertex a = 0; a < ng; ++a) edges.push_back({a * nh + e.u, a * nh + e.v, e.multiplicity});
  return Graph::from_edges(static_cast<std::size_t>(ng) * nh, edges);
}

}  // namespace curvlab::gen
