#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvlab/graph.hpp"
#include "curvlab/kernel.hpp"

namespace curvlab {

struct BoundParams {
  double d = 1;   ///< max degree
  double C = 1;   ///< degree ratio
  double A = 40;  ///< universal constant

  static BoundParams of(const Graph& g, double A = 40);
  /// Throws InvalidInput unless d >= 1, 1 <= C <= d, A > 1.
  void validate() const;
};

/// d³ exp(6 √(2 log(AC) log n)).
double entropy_bound(double n, const BoundParams& p);
/// 3 d³ exp(4 √(3 log(AC) log n)) n.
double displacement_bound(double n, const BoundParams& p);
/// 3 C³ d³ exp(4 √(6 log(AC) log(Adr))).
double growth_bound(double r, const BoundParams& p);

/// The same closed forms in 50-digit binary floating point, for cross-checks.
namespace precise {
double entropy_bound(double n, const BoundParams& p);
double displacement_bound(double n, const BoundParams& p);
double growth_bound(double r, const BoundParams& p);
}  // namespace precise

/// A [C⁴ H_m + C⁴ d^{3/2} √(n/(n∧m)) (√H_n + √log(2Cn)) + d C⁴ (C + log d)/n].
double functional_rhs(double n, double m, double h_n, double h_m, const BoundParams& p);

struct BootstrapState {
  double alpha = 1;
  double log_k = 0;  ///< log K, kept in logs since K grows like exp(c/α)
};

/// (α + α²)/(1 + 2α).
double bootstrap_map(double alpha);
BootstrapState bootstrap_step(const BootstrapState& s, const BoundParams& p);

struct BootstrapCurve {
  std::vector<BootstrapState> states;
  std::vector<double> n;
  std::vector<double> bound;         ///< min over states of K n^α
  std::vector<double> closed_form;   ///< d³ exp(2 √(3 log(2AC⁴) log n))
  bool chain_ok = true;              ///< K(α) <= d³ (2AC⁴)^{(1+2α)/α} at every state
  bool curve_ok = true;              ///< bound <= closed_form at every n
  std::vector<std::string> failures;
};

/// Starts from α = 1, K = log(d + 1) and iterates until α < alpha_stop.
BootstrapCurve bootstrap_run(const BoundParams& p, const std::vector<double>& ns,
                             double alpha_stop = 1e-3);

/// max{(2A)^{1/ε}, 2B}.
double elementary_bound(double A, double B, double eps);

struct ElementaryCheck {
  bool hypothesis = false;  ///< x <= A x^{1-ε} + B
  bool conclusion = false;  ///< x <= elementary_bound
  bool pass = false;        ///< hypothesis implies conclusion
};

ElementaryCheck elementary_check(double x, double A, double B, double eps);

struct GrowthConversion {
  int r = 0;
  std::int64_t n = 0;       ///< ⌊1280 d r²⌋
  double avg_log_ball = 0;  ///< mean over x of log #B(x, r)
  bool exact = false;
  double entropy = 0;       ///< mean H_n (exact path)
  double entropy_bound = 0; ///< 2 C³ H_n + log 2
  bool entropy_pass = false;
  bool monte_carlo = false;
  double cell_log = 0;      ///< mean E log #[x]_n (Monte Carlo path)
  double cell_sigma = 0;
  double cell_bound = 0;    ///< 2 E log #[x]_n + log 2
  bool cell_pass = false;
  bool pass = false;
  std::vector<std::string> warnings;
};

/// Compares mean log #B(x, r) with 2C³H_n + log 2 (exact rows when the dense
/// kernel fits), and with 2 E log #[x]_n + log 2 from `samples` Poisson cell
/// decompositions (4σ slack) when samples > 0.
GrowthConversion growth_conversion_check(const Graph& g, int r, std::int64_t samples,
                                         std::uint64_t seed, std::size_t mem_cap = kDefaultMemCap);

}  // namespace curvlab
