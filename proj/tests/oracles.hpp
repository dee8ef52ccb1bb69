#pragma once

// Independent reference computations used by the unit tests. Nothing here
// calls into the library code it is compared against.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "curvlab/graph.hpp"

namespace oracle {

using curvlab::Graph;
using curvlab::Rational;
using curvlab::Vertex;

inline std::vector<std::vector<int>> floyd_warshall(const Graph& g) {
  const int n = static_cast<int>(g.vertex_count());
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (const auto& nb : g.neighbors(i))
      if (nb.target != i) d[i][nb.target] = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

/// Lazy transition matrix as exact rationals.
inline std::vector<std::vector<Rational>> transition(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n, 0));
  for (std::size_t x = 0; x < n; ++x) {
    p[x][x] += Rational(1, 2);
    for (const auto& nb : g.neighbors(static_cast<Vertex>(x))) {
      Rational q(nb.count, 2 * g.degree(static_cast<Vertex>(x)));
      q.canonicalize();
      p[x][nb.target] += q;
    }
  }
  return p;
}

inline std::vector<std::vector<double>> transition_double(const Graph& g) {
  const auto p = transition(g);
  std::vector<std::vector<double>> out(p.size(), std::vector<double>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) out[i][j] = p[i][j].get_d();
  return out;
}

/// Naive dense power by repeated multiplication.
template <class T>
std::vector<std::vector<T>> power(const std::vector<std::vector<T>>& p, int n) {
  const std::size_t m = p.size();
  std::vector<std::vector<T>> r(m, std::vector<T>(m, T(0)));
  for (std::size_t i = 0; i < m; ++i) r[i][i] = T(1);
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<T>> next(m, std::vector<T>(m, T(0)));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t l = 0; l < m; ++l) {
        if (r[i][l] == T(0)) continue;
        for (std::size_t j = 0; j < m; ++j) next[i][j] += r[i][l] * p[l][j];
      }
    r = std::move(next);
  }
  return r;
}

/// W1 by brute force over integer potentials: the dual optimum of a
/// transport problem with integer costs is attained at an integer f, with
/// f(s0) = 0 and |f| bounded by the diameter of the support.
inline Rational w1_potentials(const std::vector<std::vector<int>>& dist,
                              const std::map<Vertex, Rational>& mu,
                              const std::map<Vertex, Rational>& nu) {
  std::vector<Vertex> sup;
  for (const auto& [v, m] : mu) sup.push_back(v);
  for (const auto& [v, m] : nu)
    if (!mu.count(v)) sup.push_back(v);
  std::sort(sup.begin(), sup.end());
  std::vector<Rational> w(sup.size(), 0);
  for (std::size_t i = 0; i < sup.size(); ++i) {
    if (auto it = mu.find(sup[i]); it != mu.end()) w[i] += it->second;
    if (auto it = nu.find(sup[i]); it != nu.end()) w[i] -= it->second;
  }
  int diam = 0;
  for (auto a : sup)
    for (auto b : sup) diam = std::max(diam, dist[a][b]);
  std::vector<int> f(sup.size(), 0);
  Rational best = 0;
  bool any = false;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == sup.size()) {
      Rational v = 0;
      for (std::size_t k = 0; k < sup.size(); ++k) v += w[k] * f[k];
      if (!any || v > best) best = v;
      any = true;
      return;
    }
    for (int val = -diam; val <= diam; ++val) {
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) ok = std::abs(val - f[k]) <= dist[sup[i]][sup[k]];
      if (!ok) continue;
      f[i] = val;
      rec(i + 1);
    }
  };
  f[0] = 0;
  rec(1);
  return best;
}

/// Shannon entropy, plain loop.
inline double shannon(const std::vector<double>& p) {
  double h = 0;
  for (double v : p)
    if (v > 0) h -= v * std::log(v);
  return h;
}

/// sum_x mu(x) log sum_y min(mu(y)/mu(x), 1), quadratic loop.
inline double entropy_tilde_quadratic(const std::vector<double>& mu) {
  double s = 0;
  for (double a : mu) {
    if (a <= 0) continue;
    double inner = 0;
    for (double b : mu) inner += std::min(b / a, 1.0);
    s += a * std::log(inner);
  }
  return s;
}

inline double tv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / 2;
}

}  // namespace oracle
