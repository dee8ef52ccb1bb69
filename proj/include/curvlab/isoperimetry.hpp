#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "curvlab/check.hpp"
#include "curvlab/graph.hpp"
#include "curvlab/phi.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/separation.hpp"

namespace curvlab {

/// Δ(φ∘f)(x) <= φ'(f(x))Δf(x) + φ''(f(x))(f(x) - m)²/(4d), m the minimum of f
/// over the closed neighbourhood of x, at every eligible x in `where`.
/// Requires φ.d >= max degree.
CheckResult chain_rule_check(const Graph& g, const PhiFunction& phi, std::span<const double> f,
                             std::span<const Vertex> where, double tol = 1e-9);

/// Δ(φ∘f)(x) <= -φ.conclusion_rate() 1(f(x) <= R) at every x in `where`.
CheckResult phi_conclusion_check(const Graph& g, const PhiFunction& phi, std::span<const double> f,
                                 std::span<const Vertex> where, double tol = 1e-9);

/// Λ with its ambient diameter, reused across many W.
struct IsoDomain {
  VertexSet lambda;
  int diam = 0;
  std::vector<char> member;
};

IsoDomain iso_domain(const Graph& g, std::vector<Vertex> lambda);

struct IsoResult {
  std::int64_t boundary = 0;
  std::int64_t pi_w = 0;
  Rational lhs;  ///< |∂W| / π(W)
  double rhs = 0;
  bool pass = false;
};

/// |∂W|/π(W) >= log(π(Λ)/(2π(W))) / (4d diam Λ), d the max degree. Throws when
/// W is not a subset of Λ. With diam Λ = 0 the right side is -∞.
IsoResult iso_check(const Graph& g, const IsoDomain& dom, std::span<const Vertex> w);
IsoResult iso_check(const Graph& g, std::span<const Vertex> lambda, std::span<const Vertex> w);

/// Ψ(λ) = max{|λ|, ρ λ/(2e^{4λdR} - 2)} with ρ = (π(Λ) - π(W))/π(W).
double iso_psi(double lambda, double d, double R, double rho);
/// argmin over λ >= 0 of Ψ: log(1 + ρ/2)/(4dR).
double iso_lambda_star(double d, double R, double rho);

struct IsoPipeline {
  IsoResult inequality;
  SeparationResult separation;
  PhiFunction phi;
  PhiCheck phi_grid;
  // |∂W| >= |<1_W, Δf>_π| and |<1_W, Δf>_π| = |λ| π(W)
  double pairing = 0;
  bool big_lambda = false;
  // |∂W| >= <1_{V∖W}, -Δ(φ∘f)>_π >= λ(π(Λ) - π(W))/(2e^{4λdR} - 2)
  double dirichlet = 0;
  double small_bound = 0;
  bool small_lambda = false;
  CheckResult chain_rule;
  CheckResult conclusion;
  double lambda_star = 0;
  double psi_star = 0;
  double psi_solver = 0;
  bool psi_ok = false;
  bool pass = false;
};

IsoPipeline iso_pipeline(const Graph& g, std::span<const Vertex> lambda, std::span<const Vertex> w,
                             SeparationMode mode = SeparationMode::Program, Hypothesis h = {});

/// Random connected subset of Λ grown from a uniform seed vertex, with size
/// uniform in [1, max_size] (capped by the component).
std::vector<Vertex> sample_connected_subset(const Graph& g, const IsoDomain& dom, int max_size,
                                            Rng& rng);

/// Every connected subset of Λ with at most `max_size` vertices, each once.
std::vector<std::vector<Vertex>> enumerate_connected_subsets(const Graph& g, const IsoDomain& dom,
                                                             int max_size);

/// iso_check over many W in parallel; the merge order is the input order.
CheckResult iso_sweep(const Graph& g, const IsoDomain& dom,
                        std::span<const std::vector<Vertex>> sets);

}  // namespace curvlab
