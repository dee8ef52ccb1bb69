#include "curvlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace curvlab {

BigInt walk_scale(const Graph& g) {
  BigInt l = 1;
  for (Vertex v = 0; v < static_cast<Vertex>(g.vertex_count()); ++v) {
    const BigInt two_deg = 2 * g.degree(v);
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), two_deg.get_mpz_t());
  }
  return l;
}

template <class T>
RowStepper<T>::RowStepper(const Graph& g) : g_(&g), local_(g.vertex_count(), -1) {
  const auto n = static_cast<Vertex>(g.vertex_count());
  if constexpr (std::is_same_v<T, BigInt>) scale_ = walk_scale(g);
  self_weight_.resize(n);
  slot_.resize(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) {
    const auto deg2 = 2 * g.degree(v);
    if constexpr (std::is_same_v<T, BigInt>) {
      const BigInt unit = scale_ / deg2;
      self_weight_[v] = scale_ / 2;
      for (const auto& nb : g.neighbors(v)) edge_weight_.push_back(unit * nb.count);
    } else {
      self_weight_[v] = 0.5;
      for (const auto& nb : g.neighbors(v))
        edge_weight_.push_back(static_cast<double>(nb.count) / static_cast<double>(deg2));
    }
    slot_[v + 1] = edge_weight_.size();
  }
}

template <class T>
void RowStepper<T>::reset(Vertex x) {
  g_->require_vertex(x);
  for (auto v : verts_) local_[v] = -1;
  verts_.assign(1, x);
  dist_.assign(1, 0);
  mass_.assign(1, T(1));
  local_[x] = 0;
  root_ = x;
  steps_ = 0;
  layer_begin_ = 0;
}

template <class T>
void RowStepper<T>::step() {
  // grow the ball by one layer
  const std::size_t end = verts_.size();
  for (std::size_t i = layer_begin_; i < end; ++i) {
    for (const auto& nb : g_->neighbors(verts_[i])) {
      if (local_[nb.target] < 0) {
        local_[nb.target] = static_cast<int>(verts_.size());
        verts_.push_back(nb.target);
        dist_.push_back(steps_ + 1);
      }
    }
  }
  layer_begin_ = end;

  next_.assign(verts_.size(), T(0));
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    const T& m = mass_[i];
    if (m == 0) continue;
    const Vertex u = verts_[i];
    next_[i] += m * self_weight_[u];
    std::size_t s = slot_[u];
    for (const auto& nb : g_->neighbors(u)) next_[local_[nb.target]] += m * edge_weight_[s++];
  }
  std::swap(mass_, next_);
  ++steps_;
}

template class RowStepper<double>;
template class RowStepper<BigInt>;

std::size_t kernel_matrix_bytes(const Graph& g) {
  return g.vertex_count() * g.vertex_count() * sizeof(double);
}

namespace {

void check_cap(const Graph& g, std::size_t copies, std::size_t mem_cap) {
  const std::size_t bytes = copies * kernel_matrix_bytes(g);
  if (bytes > mem_cap)
    throw MemoryCapExceeded("kernel matrix for " + std::to_string(g.vertex_count()) +
                                " vertices needs " + std::to_string(bytes) +
                                " bytes, above the memory cap of " + std::to_string(mem_cap),
                            bytes);
}

void fill_row(RowStepper<double>& st, KernelMatrix& out, Vertex x, int n) {
  st.reset(x);
  for (int k = 0; k < n; ++k) st.step();
  auto row = out.row(x);
  const auto verts = st.vertices();
  const auto mass = st.masses();
  for (std::size_t i = 0; i < verts.size(); ++i) row[verts[i]] = mass[i];
}

bool prefer_squaring(const Graph& g, int n) {
  const double v = static_cast<double>(g.vertex_count());
  const double avg_deg = 2.0 * static_cast<double>(g.adjacent_pairs().size()) / v + 1.0;
  const double stepping = v * std::min(v, std::pow(static_cast<double>(n), 2)) * avg_deg * n;
  const double squaring = 2.0 * v * v * v * std::ceil(std::log2(std::max(n, 2)));
  return squaring < stepping;
}

template <class Multiply, class Fill>
KernelMatrix power_by_squaring(const Graph& g, int n, Multiply mul, Fill fill_one_step) {
  KernelMatrix base = fill_one_step();
  KernelMatrix acc;
  bool have = false;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) {
      acc = have ? mul(acc, base) : base;
      have = true;
    }
    if (e > 1) base = mul(base, base);
  }
  if (!have) {
    acc = KernelMatrix(g.vertex_count());
    for (Vertex x = 0; x < static_cast<Vertex>(g.vertex_count()); ++x) acc.at(x, x) = 1;
  }
  return acc;
}

}  // namespace

KernelMatrix multiply(const KernelMatrix& a, const KernelMatrix& b) {
  const std::size_t n = a.size();
  KernelMatrix c(n);
  const auto& A = a.data();
  const auto& B = b.data();
  auto& C = c.data();
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    double* ci = C.data() + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = A[i * n + k];
      if (aik == 0.0) continue;
      const double* bk = B.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

KernelMatrix kernel_matrix(const Graph& g, int n, std::size_t mem_cap) {
  if (n < 0) throw InvalidInput("step count must be nonnegative");
  const auto v = static_cast<std::int64_t>(g.vertex_count());
  if (n > 1 && prefer_squaring(g, n)) {
    check_cap(g, 3, mem_cap);
    return power_by_squaring(g, n, [](const auto& a, const auto& b) { return multiply(a, b); },
                             [&] { return kernel_matrix(g, 1, mem_cap); });
  }
  check_cap(g, 1, mem_cap);
  KernelMatrix out(g.vertex_count());
#pragma omp parallel
  {
    RowStepper<double> st(g);
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t x = 0; x < v; ++x) fill_row(st, out, static_cast<Vertex>(x), n);
  }
  return out;
}

namespace serial {

KernelMatrix multiply(const KernelMatrix& a, const KernelMatrix& b) {
  const std::size_t n = a.size();
  KernelMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(static_cast<Vertex>(i), static_cast<Vertex>(k));
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j)
        c.at(static_cast<Vertex>(i), static_cast<Vertex>(j)) += aik * b(static_cast<Vertex>(k), static_cast<Vertex>(j));
    }
  return c;
}

KernelMatrix kernel_matrix(const Graph& g, int n, std::size_t mem_cap) {
  if (n < 0) throw InvalidInput("step count must be nonnegative");
  if (n > 1 && prefer_squaring(g, n)) {
    check_cap(g, 3, mem_cap);
    return power_by_squaring(g, n, [](const auto& a, const auto& b) { return serial::multiply(a, b); },
                             [&] { return serial::kernel_matrix(g, 1, mem_cap); });
  }
  check_cap(g, 1, mem_cap);
  KernelMatrix out(g.vertex_count());
  RowStepper<double> st(g);
  for (Vertex x = 0; x < static_cast<Vertex>(g.vertex_count()); ++x) fill_row(st, out, x, n);
  return out;
}

}  // namespace serial

std::size_t ExactKernel::estimated_bytes(const Graph& g, int max_steps) {
  const double bits = static_cast<double>(mpz_sizeinbase(walk_scale(g).get_mpz_t(), 2)) * max_steps;
  const std::size_t limbs = static_cast<std::size_t>(bits / 64.0) + 2;
  // two buffers of |V|^2 numerators
  return 2 * g.vertex_count() * g.vertex_count() * (sizeof(BigInt) + 8 * limbs);
}

ExactKernel::ExactKernel(const Graph& g, int max_steps, std::size_t mem_cap)
    : g_(&g), n_(g.vertex_count()), scale_(walk_scale(g)), denom_(1) {
  const auto bytes = estimated_bytes(g, max_steps);
  if (bytes > mem_cap)
    throw MemoryCapExceeded("exact kernel for " + std::to_string(n_) + " vertices and " +
                                std::to_string(max_steps) + " steps needs about " +
                                std::to_string(bytes) + " bytes, above the memory cap",
                            bytes);
  num_.assign(n_ * n_, BigInt(0));
  for (std::size_t x = 0; x < n_; ++x) num_[x * n_ + x] = 1;
  self_w_.resize(n_);
  for (Vertex v = 0; v < static_cast<Vertex>(n_); ++v) {
    self_w_[v] = scale_ / 2;
    const BigInt unit = scale_ / (2 * g.degree(v));
    for (const auto& nb : g.neighbors(v)) edge_w_.push_back(unit * nb.count);
  }
}

void ExactKernel::step() {
  next_.assign(n_ * n_, BigInt(0));
  std::vector<std::size_t> slot(n_ + 1, 0);
  for (Vertex v = 0; v < static_cast<Vertex>(n_); ++v) slot[v + 1] = slot[v] + g_->neighbors(v).size();
  const auto rows = static_cast<std::int64_t>(n_);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t x = 0; x < rows; ++x) {
    const BigInt* src = num_.data() + x * n_;
    BigInt* dst = next_.data() + x * n_;
    for (std::size_t u = 0; u < n_; ++u) {
      if (sgn(src[u]) == 0) continue;
      mpz_addmul(dst[u].get_mpz_t(), src[u].get_mpz_t(), self_w_[u].get_mpz_t());
      std::size_t s = slot[u];
      for (const auto& nb : g_->neighbors(static_cast<Vertex>(u)))
        mpz_addmul(dst[nb.target].get_mpz_t(), src[u].get_mpz_t(), edge_w_[s++].get_mpz_t());
    }
  }
  std::swap(num_, next_);
  denom_ *= scale_;
  ++steps_;
}

Rational ExactKernel::entry(Vertex x, Vertex y) const {
  Rational q(numerator(x, y), denom_);
  q.canonicalize();
  return q;
}

}  // namespace curvlab
