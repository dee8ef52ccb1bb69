#pragma once

#include <optional>
#include <span>
#include <vector>

#include "curvlab/check.hpp"
#include "curvlab/dist.hpp"
#include "curvlab/field.hpp"
#include "curvlab/graph.hpp"
#include "curvlab/kernel.hpp"

namespace curvlab {

template <class T>
struct KernelRow {
  Vertex x;
  int n;
  Dist<T> dist;
  double mass_drift = 0;  // |sum - 1| before normalization checks (floats)
  bool drift_flag = false;
};

/// P^n(x, .) by n sparse steps, no truncation. Exact rows are rational.
template <class T>
KernelRow<T> kernel_row(const Graph& g, Vertex x, int n, std::size_t mem_cap = kDefaultMemCap);

/// Per-vertex walk statistics at one step count.
struct WalkStats {
  int n = 0;
  std::vector<double> entropy;        // H_n(x)
  std::vector<double> displacement;   // D_n(x) = E_x d(x, X_n)
  std::vector<double> second_moment;  // E_x d(x, X_n)^2
  std::vector<double> return_prob;    // P^n(x, x)
  std::vector<double> log_ball;       // log #B(x, n)
  std::vector<double> vc_ratio;       // max_y P^n(x,y) / Varopoulos-Carne bound
  std::vector<double> mass_drift;
  double mean_entropy = 0, mean_displacement = 0, mean_second_moment = 0;
  bool has_tv = false;
  double tv_max = 0, tv_mean = 0;     // over adjacent pairs
};

/// Statistics for every n in `ns` (any order) from one stepping pass per
/// vertex; rows in parallel, results independent of the thread count. No TV.
std::vector<WalkStats> walk_stats_grid(const Graph& g, std::span<const int> ns);

/// Statistics at a single n, with TV over edges when the dense kernel fits.
WalkStats walk_stats(const Graph& g, int n, std::size_t mem_cap = kDefaultMemCap);

namespace serial {
std::vector<WalkStats> walk_stats_grid(const Graph& g, std::span<const int> ns);
}

struct TvDecayResult {
  CheckResult check;
  std::vector<double> tv_max;  // per requested n
  bool exact = false;
};

/// max over edges TV(P^n(x,.), P^n(y,.)) <= sqrt(20 d / (n+1)) for every n in
/// `ns`. Exact integer comparison when the big-integer kernel fits `mem_cap`,
/// otherwise doubles (flagged in the warnings).
TvDecayResult tv_decay_check(const Graph& g, std::span<const int> ns, std::size_t mem_cap = kDefaultMemCap,
                        Hypothesis h = {});

/// Every entry P^n(x,y) <= 2 sqrt(deg y / deg x) exp(-d(x,y)^2 / 2n).
CheckResult vc_check(const Graph& g, std::span<const WalkStats> stats);
/// E_x d(x,X_n)^2 <= 2 n H_n(x) + n log 4C for every x.
CheckResult vc_entropy_check(const Graph& g, std::span<const WalkStats> stats);
/// P^n(x,x) <= 2 exp(-D_n(x)^2 / 8n).
CheckResult return_prob_check(const Graph& g, std::span<const WalkStats> stats, Hypothesis h = {});
/// |D_n(x) - D_n(y)| <= 2 over edges.
CheckResult dn_lipschitz_check(const Graph& g, std::span<const WalkStats> stats, Hypothesis h = {});

struct TailPoint {
  double lambda;
  double tail;   // P_x(|f(X_n) - E f(X_n)| >= lambda sqrt(n) Lip f), exact row sum
  double bound;  // 2 exp(-lambda^2 / 8)
};

struct ConcentrationResult {
  CheckResult check;
  std::vector<TailPoint> table;
};

ConcentrationResult concentration_check(const Graph& g, Vertex x, int n, const LipField& f,
                                        std::span<const double> lambdas, Hypothesis h = {});

/// Relative slack used when a rounded quantity is compared with a bound.
inline constexpr double kRoundingSlack = 1e-12;

}  // namespace curvlab
