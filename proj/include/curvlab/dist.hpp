#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curvlab/core.hpp"

namespace curvlab {

/// Sparse probability distribution on vertices. T is Rational (exact) or double.
template <class T>
class Dist {
 public:
  using Entry = std::pair<Vertex, T>;

  Dist() = default;

  static Dist dirac(Vertex x) {
    Dist d;
    d.entries_.emplace_back(x, T(1));
    return d;
  }

  static Dist uniform(std::span<const Vertex> support) {
    std::vector<Entry> e;
    for (auto v : support) e.emplace_back(v, T(1));
    for (auto& [v, m] : e) m = T(1) / T(static_cast<long>(support.size()));
    return from_entries(std::move(e));
  }

  /// Merges repeated vertices and drops zeros. Throws unless masses are
  /// nonnegative and sum to one (exactly, or within `tolerance` for doubles).
  static Dist from_entries(std::vector<Entry> entries, double tolerance = 1e-12) {
    Dist d;
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    T total = 0;
    for (auto& [v, m] : entries) {
      if (v < 0) throw InvalidInput("distribution on a negative vertex id");
      if (m < 0) throw InvalidInput("distribution has a negative mass");
      total += m;
      if (!d.entries_.empty() && d.entries_.back().first == v) d.entries_.back().second += m;
      else d.entries_.emplace_back(v, m);
    }
    std::erase_if(d.entries_, [](const Entry& e) { return e.second == 0; });
    if constexpr (std::is_same_v<T, double>) {
      if (!(std::abs(total - 1.0) <= tolerance))
        throw InvalidInput("distribution is not normalized (total " + std::to_string(total) + ")");
    } else {
      (void)tolerance;
      if (total != 1) throw InvalidInput("distribution is not normalized (total " + total.get_str() + ")");
    }
    return d;
  }

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  T mass(Vertex x) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                                     [](const Entry& e, Vertex v) { return e.first < v; });
    return (it != entries_.end() && it->first == x) ? it->second : T(0);
  }

  std::vector<Vertex> support() const {
    std::vector<Vertex> s;
    for (const auto& e : entries_) s.push_back(e.first);
    return s;
  }

  friend bool operator==(const Dist& a, const Dist& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<Entry> entries_;
};

inline Dist<double> to_float(const Dist<Rational>& d) {
  std::vector<Dist<double>::Entry> e;
  for (const auto& [v, m] : d.entries()) e.emplace_back(v, m.get_d());
  return Dist<double>::from_entries(std::move(e), 1e-9);
}

/// Walks the union of two supports in vertex order: f(v, mu(v), nu(v)).
template <class T, class F>
void merge_supports(const Dist<T>& mu, const Dist<T>& nu, F&& f) {
  auto a = mu.entries(), b = nu.entries();
  std::size_t i = 0, j = 0;
  const T zero(0);
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      f(a[i].first, a[i].second, zero);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      f(b[j].first, zero, b[j].second);
      ++j;
    } else {
      f(a[i].first, a[i].second, b[j].second);
      ++i;
      ++j;
    }
  }
}

}  // namespace curvlab
