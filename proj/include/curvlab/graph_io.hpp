#pragma once

#include <iosfwd>
#include <string>

#include "curvlab/graph.hpp"

namespace curvlab {

/// "curvlab-graph v1": first line `n m`, then m lines `u v mult` with 0-based
/// ids. Lines starting with '#' and blank lines are skipped on input.
Graph read_graph(std::istream& in);
Graph load_graph(const std::string& path);

void write_graph(std::ostream& out, const Graph& g);
void save_graph(const std::string& path, const Graph& g);

}  // namespace curvlab
