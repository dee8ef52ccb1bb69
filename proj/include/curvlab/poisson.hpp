#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "curvlab/check.hpp"
#include "curvlab/dist.hpp"
#include "curvlab/graph.hpp"
#include "curvlab/kernel.hpp"

namespace curvlab {

struct CouplingSample {
  std::vector<Vertex> target;       // X(mu_x) for each row x
  std::vector<std::int32_t> point;  // arrival that decided row x
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  int n = 0;
  std::int64_t arrivals = 0;
};

/// Exact sampler for the grand Poisson coupling of the rows of a probability
/// kernel. Points are drawn only below the envelope max_x kappa(x, y): the
/// arrival lands on y with probability envelope(y) / M and at a uniform height
/// under the envelope; every unassigned row whose graph covers the point takes
/// y as its sample.
class PoissonSampler {
 public:
  using Row = std::vector<std::pair<Vertex, double>>;

  /// rows[x] lists (column, mass); columns must lie in [0, columns).
  PoissonSampler(std::vector<Row> rows, std::size_t columns, int n = 0);
  explicit PoissonSampler(const KernelMatrix& k, int n = 0);

  /// Replicate r of the given seed; a pure function of (seed, r).
  CouplingSample sample(std::uint64_t seed, std::uint64_t replicate) const;

  std::size_t rows() const { return row_count_; }
  double envelope_mass() const { return total_; }
  /// Hard cap on arrivals per sample; exceeding it throws.
  std::int64_t arrival_cap() const { return cap_; }

 private:
  std::size_t row_count_ = 0;
  int n_ = 0;
  std::vector<double> envelope_, cumulative_;
  std::vector<std::size_t> col_offset_;
  std::vector<std::pair<double, Vertex>> col_entries_;  // per column, descending mass
  double total_ = 0;
  std::int64_t cap_ = 0;
};

/// Cells [x] = {y : y and x were decided by the same arrival}. Two rows can
/// land on the same column through different arrivals; those stay apart. The
/// pair and two-point formulas below are exact for this relation and only
/// lower bounds for equality of values.
Partition cells_of(const CouplingSample& s);

struct McEstimate {
  double empirical = 0;
  double exact = 0;
  double sigma = 0;  // standard error of `empirical`
  std::int64_t samples = 0;
  double value_agreement = 0;  // frequency of the weaker "same value" event
  bool pass = false;  // |empirical - exact| <= 4 sigma, value_agreement >= exact - 4 sigma
};

/// P(both decided by the same arrival) by simulation, against (1 - TV) / (1 + TV).
McEstimate pair_equal_prob(const Dist<double>& mu, const Dist<double>& nu, std::int64_t samples,
                           std::uint64_t seed);
double exact_pair_equal(const Dist<double>& mu, const Dist<double>& nu);

/// P(same arrival and X(mu) = x) by simulation, against (mu(x) ^ nu(x)) / (1 + TV).
McEstimate two_point_check(const Dist<double>& mu, const Dist<double>& nu, Vertex x,
                           std::int64_t samples, std::uint64_t seed);

struct BoundaryIdentityResult {
  McEstimate estimate;        // mean of (1/|V|) sum_x #d[x]/#[x] vs the TV expression
  std::int64_t mtp_failures = 0;  // realized partitions where the exact identity failed
};

/// Cell boundary ratio of the decomposition of P^n against its exact mean.
BoundaryIdentityResult cell_boundary_identity(const Graph& g, const KernelMatrix& kernel,
                                              std::int64_t samples, std::uint64_t seed,
                                              bool check_mtp = true);
BoundaryIdentityResult cell_boundary_identity(const Graph& g, int n, std::int64_t samples,
                                              std::uint64_t seed, std::size_t mem_cap = kDefaultMemCap);

/// sum_x mu(x) log sum_y (mu(y)/mu(x) ^ 1), in O(k log k).
double entropy_tilde(std::span<const double> masses);
double entropy(std::span<const double> masses);

struct SandwichResult {
  double lower = 0, middle = 0, upper = 0;
  double sigma = 0;  // Monte Carlo standard error of `middle`, 0 when exact
  bool pass = false;
};

/// Ent/2 - 1 <= entropy_tilde <= Ent.
SandwichResult entropy_sandwich_check(std::span<const double> masses);

/// (1/4C^3) avg Ent - 1 <= avg E log #[x] <= C avg Ent + 2 log C, Monte Carlo
/// middle with 4 sigma slack. C is the degree ratio of g.
SandwichResult cell_entropy_sandwich(const Graph& g, const KernelMatrix& kernel, std::int64_t samples,
                                     std::uint64_t seed);
SandwichResult cell_entropy_sandwich(const Graph& g, int n, std::int64_t samples, std::uint64_t seed,
                                     std::size_t mem_cap = kDefaultMemCap);

/// Mean over x of log #[x] for one realized partition.
double mean_log_cell_size(const Partition& p);

}  // namespace curvlab
