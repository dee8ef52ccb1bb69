#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "curvlab/core.hpp"
#include "curvlab/graph.hpp"

namespace curvlab {

inline constexpr std::size_t kDefaultMemCap = std::size_t{512} << 20;

/// Lazy-walk row P^k(x, .) advanced one step at a time on the growing ball
/// B(x, k). With T = BigInt the masses are numerators over scale()^k, where
/// scale() is the lcm of all 2 deg(v).
template <class T>
class RowStepper {
 public:
  explicit RowStepper(const Graph& g);

  void reset(Vertex x);
  void step();

  int steps() const { return steps_; }
  Vertex root() const { return root_; }
  /// Ball vertices in BFS order, aligned with distances() and masses().
  std::span<const Vertex> vertices() const { return verts_; }
  std::span<const int> distances() const { return dist_; }
  std::span<const T> masses() const { return mass_; }
  const BigInt& scale() const { return scale_; }

 private:
  const Graph* g_;
  std::vector<int> local_;
  std::vector<Vertex> verts_;
  std::vector<int> dist_;
  std::vector<T> mass_, next_;
  std::vector<T> self_weight_;      // per global vertex
  std::vector<T> edge_weight_;      // per adjacency slot, same order as neighbors()
  std::vector<std::size_t> slot_;   // first slot of each vertex
  BigInt scale_ = 1;
  Vertex root_ = 0;
  int steps_ = 0;
  std::size_t layer_begin_ = 0;     // first vertex of the outermost layer
};

/// lcm over v of 2 deg(v).
BigInt walk_scale(const Graph& g);

/// Dense row-major |V| x |V| matrix of doubles.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  explicit KernelMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double operator()(Vertex x, Vertex y) const { return data_[static_cast<std::size_t>(x) * n_ + y]; }
  double& at(Vertex x, Vertex y) { return data_[static_cast<std::size_t>(x) * n_ + y]; }
  std::span<const double> row(Vertex x) const { return {data_.data() + static_cast<std::size_t>(x) * n_, n_}; }
  std::span<double> row(Vertex x) { return {data_.data() + static_cast<std::size_t>(x) * n_, n_}; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Bytes needed by a dense |V| x |V| double matrix.
std::size_t kernel_matrix_bytes(const Graph& g);

/// P^n, rows in parallel. Stepping on balls for small n, repeated squaring
/// when n is large against |V|. Throws MemoryCapExceeded.
KernelMatrix kernel_matrix(const Graph& g, int n, std::size_t mem_cap = kDefaultMemCap);

/// Deterministic parallel product: each entry is summed in a fixed order.
KernelMatrix multiply(const KernelMatrix& a, const KernelMatrix& b);

/// Exact P^k for every vertex as integer numerators over scale^k.
class ExactKernel {
 public:
  ExactKernel(const Graph& g, int max_steps, std::size_t mem_cap = kDefaultMemCap);
  void step();
  int steps() const { return steps_; }
  const BigInt& scale() const { return scale_; }
  /// scale^steps
  const BigInt& denominator() const { return denom_; }
  const BigInt& numerator(Vertex x, Vertex y) const { return num_[static_cast<std::size_t>(x) * n_ + y]; }
  std::span<const BigInt> row(Vertex x) const { return {num_.data() + static_cast<std::size_t>(x) * n_, n_}; }
  Rational entry(Vertex x, Vertex y) const;

  static std::size_t estimated_bytes(const Graph& g, int max_steps);

 private:
  const Graph* g_;
  std::size_t n_;
  BigInt scale_, denom_;
  std::vector<BigInt> num_, next_;
  std::vector<BigInt> self_w_, edge_w_;
  int steps_ = 0;
};

namespace serial {
KernelMatrix kernel_matrix(const Graph& g, int n, std::size_t mem_cap = kDefaultMemCap);
KernelMatrix multiply(const KernelMatrix& a, const KernelMatrix& b);
}  // namespace serial

}  // namespace curvlab
