#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curvlab/core.hpp"

namespace curvlab {

/// One undirected edge bundle: `multiplicity` parallel edges between u and v.
/// For u == v each unit is one self-loop.
struct EdgeSpec {
  Vertex u;
  Vertex v;
  std::int64_t multiplicity;
};

/// Oriented adjacency entry: `count` oriented edges x -> target.
struct Neighbor {
  Vertex target;
  std::int64_t count;
};

/// Finite undirected multigraph, immutable after construction.
///
/// Each undirected edge {x, y} with x != y yields one oriented edge in each
/// direction. A self-loop at x yields two oriented edges x -> x and adds 2 to
/// deg(x), so that sum of degrees equals twice the number of edges and
/// deg(x) P(x,y) = deg(y) P(y,x) holds exactly.
class Graph {
 public:
  Graph() = default;

  /// Builds the graph; parallel bundles of the same pair are merged. Throws
  /// InvalidInput on out-of-range ids, negative multiplicities, or isolated
  /// vertices.
  static Graph from_edges(std::size_t vertex_count, std::span<const EdgeSpec> edges);

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  /// Oriented adjacency of x, sorted by target; self-loops appear as x -> x.
  std::span<const Neighbor> neighbors(Vertex x) const {
    return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
  }

  std::int64_t degree(Vertex x) const { return degree_[x]; }
  std::int64_t max_degree() const { return max_degree_; }
  std::int64_t min_degree() const { return min_degree_; }
  /// C = max deg / min deg.
  double degree_ratio() const {
    return static_cast<double>(max_degree_) / static_cast<double>(min_degree_);
  }
  /// Total undirected edge multiplicity (self-loops counted once each).
  std::int64_t edge_total() const { return edge_total_; }
  bool connected() const { return connected_; }

  /// Number of oriented edges x -> y.
  std::int64_t multiplicity(Vertex x, Vertex y) const;
  bool adjacent(Vertex x, Vertex y) const { return x != y && multiplicity(x, y) > 0; }

  /// Undirected bundles with u <= v, in lexicographic order.
  std::vector<EdgeSpec> edge_bundles() const;
  /// Distinct adjacent pairs (u, v) with u < v.
  std::vector<std::pair<Vertex, Vertex>> adjacent_pairs() const;

  bool valid_vertex(Vertex x) const {
    return x >= 0 && static_cast<std::size_t>(x) < vertex_count();
  }
  void require_vertex(Vertex x) const;

  static constexpr const char* kSelfLoopConvention = "self-loop: +2 degree, 2 oriented edges";

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<std::int64_t> degree_;
  std::int64_t max_degree_ = 0;
  std::int64_t min_degree_ = 0;
  std::int64_t edge_total_ = 0;
  bool connected_ = false;
};

/// Sorted set of vertices with cached stationary mass and boundary size.
struct VertexSet {
  std::vector<Vertex> vertices;
  std::int64_t pi = 0;        ///< sum of degrees
  std::int64_t boundary = 0;  ///< unoriented boundary edges, with multiplicity

  bool contains(Vertex x) const;
  std::size_t size() const { return vertices.size(); }
};

VertexSet make_vertex_set(const Graph& g, std::vector<Vertex> vertices);

struct BoundaryStats {
  std::int64_t boundary;
  std::int64_t pi;
};

/// (|dW|, pi(W)). Throws on empty W or out-of-range vertices.
BoundaryStats boundary_stats(const Graph& g, std::span<const Vertex> w);

/// Graph distances from x. Throws DisconnectedGraph naming an unreachable vertex.
std::vector<int> bfs_metric(const Graph& g, Vertex x);

/// Distances from x, with -1 for unreachable vertices and for vertices beyond
/// `radius` when radius >= 0.
std::vector<int> bfs_distances(const Graph& g, Vertex x, int radius = -1);

/// Closed ball B(x, r), sorted.
VertexSet ball(const Graph& g, Vertex x, int r);

/// max pairwise ambient distance within W. Throws on empty W.
int diameter(const Graph& g, std::span<const Vertex> w);
int diameter(const Graph& g);

/// Dense all-pairs distance table; rows computed in parallel.
class DistanceTable {
 public:
  DistanceTable() = default;
  /// Throws MemoryCapExceeded when |V|^2 entries exceed `mem_cap_bytes`.
  DistanceTable(const Graph& g, std::size_t mem_cap_bytes);
  int operator()(Vertex x, Vertex y) const { return data_[static_cast<std::size_t>(x) * n_ + y]; }
  std::span<const int> row(Vertex x) const { return {data_.data() + static_cast<std::size_t>(x) * n_, n_}; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<int> data_;
};

/// Cell id per vertex.
class Partition {
 public:
  explicit Partition(std::vector<std::int32_t> cell_of);
  std::int32_t cell(Vertex x) const { return cell_of_[x]; }
  std::size_t vertex_count() const { return cell_of_.size(); }
  std::size_t cell_count() const { return cell_sizes_.size(); }
  /// Vertices in the cell of x.
  std::int64_t cell_size_of(Vertex x) const { return cell_sizes_[cell_of_[x]]; }
  std::span<const std::int32_t> labels() const { return cell_of_; }

 private:
  std::vector<std::int32_t> cell_of_;  // relabelled to 0..k-1
  std::vector<std::int64_t> cell_sizes_;
};

struct MtpIdentity {
  Rational lhs;  ///< (1/|V|) sum_x #d[x] / #[x], oriented boundary of the cell
  Rational rhs;  ///< (1/|V|) sum_y sum_{e in E_y} 1(e+ not in [y])
};

/// Both sides of the finite mass-transport identity for cells, exactly.
MtpIdentity mtp_identity(const Graph& g, const Partition& p);

}  // namespace curvlab
