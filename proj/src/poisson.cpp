#include "curvlab/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/rng.hpp"
#include "curvlab/transport.hpp"

namespace curvlab {

PoissonSampler::PoissonSampler(std::vector<Row> rows, std::size_t columns, int n)
    : row_count_(rows.size()), n_(n) {
  if (rows.empty()) throw InvalidInput("kernel has no rows");
  std::vector<std::vector<std::pair<double, Vertex>>> cols(columns);
  envelope_.assign(columns, 0.0);
  for (std::size_t x = 0; x < rows.size(); ++x) {
    double total = 0;
    for (const auto& [y, m] : rows[x]) {
      if (y < 0 || static_cast<std::size_t>(y) >= columns) throw InvalidInput("kernel column out of range");
      if (m < 0) throw InvalidInput("kernel has a negative entry");
      total += m;
      if (m == 0) continue;
      cols[y].emplace_back(m, static_cast<Vertex>(x));
      envelope_[y] = std::max(envelope_[y], m);
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("kernel row " + std::to_string(x) + " is not a probability");
  }
  col_offset_.push_back(0);
  for (auto& c : cols) {
    std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    col_entries_.insert(col_entries_.end(), c.begin(), c.end());
    col_offset_.push_back(col_entries_.size());
  }
  double acc = 0;
  for (double e : envelope_) cumulative_.push_back(acc += e);
  total_ = acc;
  cap_ = static_cast<std::int64_t>(100.0 * total_ * (std::log(static_cast<double>(row_count_)) + 1.0)) + 1000;
  cap_ = std::min<std::int64_t>(cap_, std::numeric_limits<std::int32_t>::max());
}

namespace {

std::vector<PoissonSampler::Row> matrix_rows(const KernelMatrix& k) {
  std::vector<PoissonSampler::Row> rows(k.size());
  for (std::size_t x = 0; x < k.size(); ++x) {
    const auto r = k.row(static_cast<Vertex>(x));
    for (std::size_t y = 0; y < r.size(); ++y)
      if (r[y] > 0) rows[x].emplace_back(static_cast<Vertex>(y), r[y]);
  }
  return rows;
}

}  // namespace

PoissonSampler::PoissonSampler(const KernelMatrix& k, int n) : PoissonSampler(matrix_rows(k), k.size(), n) {}

CouplingSample PoissonSampler::sample(std::uint64_t seed, std::uint64_t replicate) const {
  Rng rng(seed, replicate);
  CouplingSample s;
  s.seed = seed;
  s.replicate = replicate;
  s.n = n_;
  s.target.assign(row_count_, -1);
  s.point.assign(row_count_, -1);
  std::size_t left = row_count_;
  while (left > 0) {
    if (++s.arrivals > cap_)
      throw Error("Poisson sampler exceeded its arrival cap of " + std::to_string(cap_));
    const double u = rng.uniform() * total_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    const auto y = static_cast<std::size_t>(it - cumulative_.begin());
    const double height = rng.uniform() * envelope_[y];
    for (std::size_t i = col_offset_[y]; i < col_offset_[y + 1]; ++i) {
      const auto& [m, x] = col_entries_[i];
      if (m < height) break;
      if (s.target[x] < 0) {
        s.target[x] = static_cast<Vertex>(y);
        s.point[x] = static_cast<std::int32_t>(s.arrivals);
        --left;
      }
    }
  }
  return s;
}

Partition cells_of(const CouplingSample& s) { return Partition(s.point); }

double exact_pair_equal(const Dist<double>& mu, const Dist<double>& nu) {
  const double tv = tv_distance(mu, nu);
  return (1.0 - tv) / (1.0 + tv);
}

namespace {

// Two-row kernel over the support union; returns the sampler and the local
// index of each union vertex.
std::pair<PoissonSampler, std::vector<Vertex>> pair_sampler(const Dist<double>& mu, const Dist<double>& nu) {
  std::vector<Vertex> cols;
  PoissonSampler::Row a, b;
  merge_supports(mu, nu, [&](Vertex v, double p, double q) {
    const auto j = static_cast<Vertex>(cols.size());
    cols.push_back(v);
    if (p > 0) a.emplace_back(j, p);
    if (q > 0) b.emplace_back(j, q);
  });
  std::vector<PoissonSampler::Row> rows{std::move(a), std::move(b)};
  return {PoissonSampler(std::move(rows), cols.size()), cols};
}

// `event` returns {same arrival, same value}.
McEstimate count_events(const PoissonSampler& sampler, std::int64_t samples, std::uint64_t seed, double exact,
                        auto&& event) {
  if (samples < 1) throw InvalidInput("need at least one sample");
  std::vector<char> hit(static_cast<std::size_t>(samples)), value(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < samples; ++r) {
    const auto [h, v] = event(sampler.sample(seed, static_cast<std::uint64_t>(r)));
    hit[r] = h;
    value[r] = v;
  }
  std::int64_t count = 0, agree = 0;
  for (std::size_t r = 0; r < hit.size(); ++r) {
    count += hit[r];
    agree += value[r];
  }
  McEstimate e;
  e.samples = samples;
  e.empirical = static_cast<double>(count) / static_cast<double>(samples);
  e.value_agreement = static_cast<double>(agree) / static_cast<double>(samples);
  e.exact = exact;
  e.sigma = std::sqrt(std::max(exact * (1.0 - exact), 0.0) / static_cast<double>(samples));
  e.pass = std::abs(e.empirical - e.exact) <= 4.0 * e.sigma + 1e-12 &&
           e.value_agreement >= e.exact - 4.0 * e.sigma - 1e-12;
  return e;
}

}  // namespace

McEstimate pair_equal_prob(const Dist<double>& mu, const Dist<double>& nu, std::int64_t samples,
                           std::uint64_t seed) {
  const auto [sampler, cols] = pair_sampler(mu, nu);
  return count_events(sampler, samples, seed, exact_pair_equal(mu, nu),
                      [](const CouplingSample& s) {
                        return std::pair<char, char>(s.point[0] == s.point[1], s.target[0] == s.target[1]);
                      });
}

McEstimate two_point_check(const Dist<double>& mu, const Dist<double>& nu, Vertex x, std::int64_t samples,
                           std::uint64_t seed) {
  const auto [sampler, cols] = pair_sampler(mu, nu);
  const double tv = tv_distance(mu, nu);
  const double exact = std::min(mu.mass(x), nu.mass(x)) / (1.0 + tv);
  const auto it = std::find(cols.begin(), cols.end(), x);
  const Vertex local = it == cols.end() ? -1 : static_cast<Vertex>(it - cols.begin());
  return count_events(sampler, samples, seed, exact, [local](const CouplingSample& s) {
    const bool value = local >= 0 && s.target[0] == local && s.target[1] == local;
    return std::pair<char, char>(value && s.point[0] == s.point[1], value);
  });
}

namespace {

double row_tv(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

double boundary_ratio(const Graph& g, const Partition& p) {
  // (1/|V|) sum_y #{oriented edges out of y leaving its cell}
  std::int64_t leaving = 0;
  for (Vertex y = 0; y < static_cast<Vertex>(g.vertex_count()); ++y)
    for (const auto& nb : g.neighbors(y))
      if (p.cell(nb.target) != p.cell(y)) leaving += nb.count;
  return static_cast<double>(leaving) / static_cast<double>(g.vertex_count());
}

void mean_and_error(const std::vector<double>& v, double& mean, double& sigma) {
  double s = 0;
  for (double x : v) s += x;
  mean = s / static_cast<double>(v.size());
  double q = 0;
  for (double x : v) q += (x - mean) * (x - mean);
  const double var = v.size() > 1 ? q / static_cast<double>(v.size() - 1) : 0.0;
  sigma = std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace

BoundaryIdentityResult cell_boundary_identity(const Graph& g, const KernelMatrix& kernel, std::int64_t samples,
                                              std::uint64_t seed, bool check_mtp) {
  if (kernel.size() != g.vertex_count()) throw InvalidInput("kernel size does not match the graph");
  if (samples < 2) throw InvalidInput("need at least two samples");
  double exact = 0;
  for (Vertex y = 0; y < static_cast<Vertex>(g.vertex_count()); ++y) {
    for (const auto& nb : g.neighbors(y)) {
      if (nb.target == y) continue;
      const double tv = row_tv(kernel.row(y), kernel.row(nb.target));
      exact += static_cast<double>(nb.count) * 2.0 * tv / (1.0 + tv);
    }
  }
  exact /= static_cast<double>(g.vertex_count());

  const PoissonSampler sampler(kernel);
  std::vector<double> ratio(static_cast<std::size_t>(samples));
  std::vector<char> mtp_bad(static_cast<std::size_t>(samples), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < samples; ++r) {
    const auto p = cells_of(sampler.sample(seed, static_cast<std::uint64_t>(r)));
    ratio[r] = boundary_ratio(g, p);
    if (check_mtp) {
      const auto id = mtp_identity(g, p);
      mtp_bad[r] = id.lhs != id.rhs;
    }
  }
  BoundaryIdentityResult res;
  for (char b : mtp_bad) res.mtp_failures += b;
  auto& e = res.estimate;
  e.samples = samples;
  e.exact = exact;
  mean_and_error(ratio, e.empirical, e.sigma);
  e.pass = std::abs(e.empirical - e.exact) <= 4.0 * e.sigma + 1e-12;
  return res;
}

BoundaryIdentityResult cell_boundary_identity(const Graph& g, int n, std::int64_t samples, std::uint64_t seed,
                                              std::size_t mem_cap) {
  return cell_boundary_identity(g, kernel_matrix(g, n, mem_cap), samples, seed);
}

double entropy(std::span<const double> masses) {
  double h = 0;
  for (double p : masses)
    if (p > 0) h -= p * std::log(p);
  return h;
}

double entropy_tilde(std::span<const double> masses) {
  std::vector<double> a;
  for (double p : masses)
    if (p > 0) a.push_back(p);
  std::sort(a.begin(), a.end());
  const std::size_t k = a.size();
  double below = 0;  // sum of masses strictly smaller than a[i]
  double total = 0;
  std::size_t i = 0;
  while (i < k) {
    std::size_t j = i;
    while (j < k && a[j] == a[i]) ++j;
    const double inner = below / a[i] + static_cast<double>(k - i);
    total += static_cast<double>(j - i) * a[i] * std::log(inner);
    for (std::size_t t = i; t < j; ++t) below += a[t];
    i = j;
  }
  return total;
}

SandwichResult entropy_sandwich_check(std::span<const double> masses) {
  SandwichResult r;
  const double ent = entropy(masses);
  r.middle = entropy_tilde(masses);
  r.lower = 0.5 * ent - 1.0;
  r.upper = ent;
  const double tol = 1e-12 * std::max(1.0, ent);
  r.pass = r.lower <= r.middle + tol && r.middle <= r.upper + tol;
  return r;
}

double mean_log_cell_size(const Partition& p) {
  double s = 0;
  for (Vertex x = 0; x < static_cast<Vertex>(p.vertex_count()); ++x)
    s += std::log(static_cast<double>(p.cell_size_of(x)));
  return s / static_cast<double>(p.vertex_count());
}

SandwichResult cell_entropy_sandwich(const Graph& g, const KernelMatrix& kernel, std::int64_t samples,
                                     std::uint64_t seed) {
  if (kernel.size() != g.vertex_count()) throw InvalidInput("kernel size does not match the graph");
  if (samples < 2) throw InvalidInput("need at least two samples");
  double ent = 0;
  for (Vertex x = 0; x < static_cast<Vertex>(g.vertex_count()); ++x) ent += entropy(kernel.row(x));
  ent /= static_cast<double>(g.vertex_count());

  const PoissonSampler sampler(kernel);
  std::vector<double> logs(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < samples; ++r)
    logs[r] = mean_log_cell_size(cells_of(sampler.sample(seed, static_cast<std::uint64_t>(r))));

  SandwichResult res;
  mean_and_error(logs, res.middle, res.sigma);
  const double c = g.degree_ratio();
  res.lower = ent / (4.0 * c * c * c) - 1.0;
  res.upper = c * ent + 2.0 * std::log(c);
  res.pass = res.lower <= res.middle + 4.0 * res.sigma + 1e-12 &&
             res.middle - 4.0 * res.sigma <= res.upper + 1e-12;
  return res;
}

SandwichResult cell_entropy_sandwich(const Graph& g, int n, std::int64_t samples, std::uint64_t seed,
                                     std::size_t mem_cap) {
  return cell_entropy_sandwich(g, kernel_matrix(g, n, mem_cap), samples, seed);
}

}  // namespace curvlab
