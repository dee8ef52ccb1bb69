#include "curvlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

namespace curvlab {

std::string to_string(const Rational& q) { return q.get_str(); }

Graph Graph::from_edges(std::size_t vertex_count, std::span<const EdgeSpec> edges) {
  if (vertex_count == 0) throw InvalidInput("graph must have at least one vertex");
  if (vertex_count > static_cast<std::size_t>(std::numeric_limits<Vertex>::max()))
    throw InvalidInput("too many vertices");

  // oriented counts, merged per (x, y)
  std::vector<std::map<Vertex, std::int64_t>> oriented(vertex_count);
  const auto n = static_cast<Vertex>(vertex_count);
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw InvalidInput("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                         ") has a vertex id out of range [0, " + std::to_string(n) + ")");
    if (e.multiplicity < 0)
      throw InvalidInput("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                         ") has negative multiplicity");
    if (e.multiplicity == 0) continue;
    if (e.u == e.v) {
      oriented[e.u][e.u] += 2 * e.multiplicity;
    } else {
      oriented[e.u][e.v] += e.multiplicity;
      oriented[e.v][e.u] += e.multiplicity;
    }
  }

  Graph g;
  g.offsets_.assign(vertex_count + 1, 0);
  g.degree_.assign(vertex_count, 0);
  for (std::size_t x = 0; x < vertex_count; ++x) {
    for (const auto& [y, c] : oriented[x]) {
      g.adjacency_.push_back({y, c});
      g.degree_[x] += c;
    }
    g.offsets_[x + 1] = g.adjacency_.size();
    if (g.degree_[x] == 0)
      throw InvalidInput("vertex " + std::to_string(x) + " is isolated");
  }
  g.max_degree_ = *std::max_element(g.degree_.begin(), g.degree_.end());
  g.min_degree_ = *std::min_element(g.degree_.begin(), g.degree_.end());
  g.edge_total_ = std::accumulate(g.degree_.begin(), g.degree_.end(), std::int64_t{0}) / 2;

  const auto dist = bfs_distances(g, 0);
  g.connected_ = std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
  return g;
}

std::int64_t Graph::multiplicity(Vertex x, Vertex y) const {
  const auto nb = neighbors(x);
  const auto it = std::lower_bound(nb.begin(), nb.end(), y,
                                   [](const Neighbor& a, Vertex t) { return a.target < t; });
  return (it != nb.end() && it->target == y) ? it->count : 0;
}

std::vector<EdgeSpec> Graph::edge_bundles() const {
  std::vector<EdgeSpec> out;
  for (Vertex x = 0; x < static_cast<Vertex>(vertex_count()); ++x) {
    for (const auto& nb : neighbors(x)) {
      if (nb.target == x) out.push_back({x, x, nb.count / 2});
      else if (nb.target > x) out.push_back({x, nb.target, nb.count});
    }
  }
  return out;
}

std::vector<std::pair<Vertex, Vertex>> Graph::adjacent_pairs() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex x = 0; x < static_cast<Vertex>(vertex_count()); ++x)
    for (const auto& nb : neighbors(x))
      if (nb.target > x) out.emplace_back(x, nb.target);
  return out;
}

void Graph::require_vertex(Vertex x) const {
  if (!valid_vertex(x))
    throw InvalidInput("vertex " + std::to_string(x) + " out of range [0, " +
                       std::to_string(vertex_count()) + ")");
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.vertex_count() != b.vertex_count() || a.adjacency_.size() != b.adjacency_.size())
    return false;
  if (a.offsets_ != b.offsets_) return false;
  for (std::size_t i = 0; i < a.adjacency_.size(); ++i)
    if (a.adjacency_[i].target != b.adjacency_[i].target ||
        a.adjacency_[i].count != b.adjacency_[i].count)
      return false;
  return true;
}

bool VertexSet::contains(Vertex x) const {
  return std::binary_search(vertices.begin(), vertices.end(), x);
}

namespace {

std::vector<Vertex> normalized_set(const Graph& g, std::span<const Vertex> w) {
  if (w.empty()) throw InvalidInput("vertex set must be nonempty");
  std::vector<Vertex> s(w.begin(), w.end());
  for (auto x : s) g.require_vertex(x);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

BoundaryStats boundary_stats(const Graph& g, std::span<const Vertex> w) {
  const auto s = normalized_set(g, w);
  std::vector<char> in(g.vertex_count(), 0);
  for (auto x : s) in[x] = 1;
  BoundaryStats out{0, 0};
  for (auto x : s) {
    out.pi += g.degree(x);
    for (const auto& nb : g.neighbors(x))
      if (!in[nb.target]) out.boundary += nb.count;
  }
  return out;
}

VertexSet make_vertex_set(const Graph& g, std::vector<Vertex> vertices) {
  VertexSet s;
  s.vertices = normalized_set(g, vertices);
  const auto st = boundary_stats(g, s.vertices);
  s.pi = st.pi;
  s.boundary = st.boundary;
  return s;
}

std::vector<int> bfs_distances(const Graph& g, Vertex x, int radius) {
  g.require_vertex(x);
  std::vector<int> dist(g.vertex_count(), -1);
  std::vector<Vertex> queue;
  queue.reserve(g.vertex_count());
  dist[x] = 0;
  queue.push_back(x);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    if (radius >= 0 && dist[u] >= radius) continue;
    for (const auto& nb : g.neighbors(u)) {
      if (dist[nb.target] < 0) {
        dist[nb.target] = dist[u] + 1;
        queue.push_back(nb.target);
      }
    }
  }
  return dist;
}

std::vector<int> bfs_metric(const Graph& g, Vertex x) {
  auto dist = bfs_distances(g, x);
  for (std::size_t v = 0; v < dist.size(); ++v)
    if (dist[v] < 0)
      throw DisconnectedGraph("graph is disconnected: vertex " + std::to_string(v) +
                                  " is unreachable from " + std::to_string(x),
                              static_cast<Vertex>(v));
  return dist;
}

VertexSet ball(const Graph& g, Vertex x, int r) {
  if (r < 0) throw InvalidInput("ball radius must be nonnegative");
  const auto dist = bfs_distances(g, x, r);
  std::vector<Vertex> members;
  for (std::size_t v = 0; v < dist.size(); ++v)
    if (dist[v] >= 0) members.push_back(static_cast<Vertex>(v));
  return make_vertex_set(g, std::move(members));
}

int diameter(const Graph& g, std::span<const Vertex> w) {
  const auto s = normalized_set(g, w);
  int best = 0;
  for (auto x : s) {
    const auto dist = bfs_metric(g, x);
    for (auto y : s) best = std::max(best, dist[y]);
  }
  return best;
}

int diameter(const Graph& g) {
  std::vector<Vertex> all(g.vertex_count());
  std::iota(all.begin(), all.end(), 0);
  return diameter(g, all);
}

DistanceTable::DistanceTable(const Graph& g, std::size_t mem_cap_bytes) : n_(g.vertex_count()) {
  const std::size_t bytes = n_ * n_ * sizeof(int);
  if (bytes > mem_cap_bytes)
    throw MemoryCapExceeded("all-pairs distance table needs " + std::to_string(bytes) +
                                " bytes, above the memory cap",
                            bytes);
  if (!g.connected()) bfs_metric(g, 0);  // throws with an unreachable vertex
  data_.resize(n_ * n_);
  const auto n = static_cast<std::int64_t>(n_);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t x = 0; x < n; ++x) {
    const auto d = bfs_distances(g, static_cast<Vertex>(x));
    std::copy(d.begin(), d.end(), data_.begin() + x * n);
  }
}

Partition::Partition(std::vector<std::int32_t> cell_of) : cell_of_(std::move(cell_of)) {
  std::unordered_map<std::int32_t, std::int32_t> relabel;
  for (auto& c : cell_of_) {
    if (c < 0) throw InvalidInput("partition labels must be nonnegative");
    auto [it, inserted] = relabel.try_emplace(c, static_cast<std::int32_t>(relabel.size()));
    if (inserted) cell_sizes_.push_back(0);
    c = it->second;
    ++cell_sizes_[c];
  }
}

MtpIdentity mtp_identity(const Graph& g, const Partition& p) {
  if (p.vertex_count() != g.vertex_count())
    throw InvalidInput("partition size does not match vertex count");
  const auto n = static_cast<Vertex>(g.vertex_count());

  // #d[c]: oriented edges leaving cell c
  std::vector<std::int64_t> cell_boundary(p.cell_count(), 0);
  std::int64_t leaving_total = 0;
  for (Vertex y = 0; y < n; ++y) {
    for (const auto& nb : g.neighbors(y)) {
      if (p.cell(nb.target) != p.cell(y)) {
        cell_boundary[p.cell(y)] += nb.count;
        leaving_total += nb.count;
      }
    }
  }

  MtpIdentity out;
  Rational lhs = 0;
  for (Vertex x = 0; x < n; ++x)
    lhs += Rational(cell_boundary[p.cell(x)], p.cell_size_of(x));
  lhs.canonicalize();
  out.lhs = lhs / n;
  out.rhs = Rational(leaving_total, n);
  out.rhs.canonicalize();
  return out;
}

}  // namespace curvlab
