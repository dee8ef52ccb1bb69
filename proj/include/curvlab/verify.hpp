#pragma once

#include <cstdint>
#include <vector>

#include "curvlab/graph.hpp"
#include "curvlab/kernel.hpp"
#include "curvlab/report.hpp"

namespace curvlab {

struct VerifyConfig {
  std::uint64_t seed = 7;
  double A = 40;
  std::size_t mem_cap = kDefaultMemCap;
  /// step counts for walk statistics; the dyadic grid 1..64 when empty
  std::vector<int> ns;
  /// Poisson decomposition samples per Monte Carlo check
  std::int64_t samples = 2000;
  /// step count for the cell checks
  int cell_n = 16;
  /// sampled sets W for the isoperimetric sweep
  int iso_samples = 200;
  int iso_radius = 4;
  int iso_max_size = 12;
  /// radii for the growth conversion, run only up to this many vertices
  std::vector<int> conversion_radii{1, 2};
  std::size_t conversion_max_vertices = 1024;
};

/// Runs the whole battery. Sub-check errors are recorded in their record and
/// the run continues. The report depends only on the graph and the config.
Report verify_all(const Graph& g, const VerifyConfig& config);

}  // namespace curvlab
