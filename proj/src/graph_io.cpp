#include "curvlab/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace curvlab {

namespace {

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_error(int lineno, const std::string& msg) {
  throw InvalidInput("graph file line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

Graph read_graph(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) throw InvalidInput("graph file is empty");

  long long n = 0, m = 0;
  {
    std::istringstream head(line);
    std::string extra;
    if (!(head >> n >> m) || (head >> extra)) parse_error(lineno, "expected `n m`");
  }
  if (n <= 0 || m < 0) parse_error(lineno, "n must be positive and m nonnegative");

  std::vector<EdgeSpec> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_content_line(in, line, lineno))
      throw InvalidInput("graph file ends after " + std::to_string(i) + " of " +
                         std::to_string(m) + " edge lines");
    std::istringstream row(line);
    long long u, v, mult;
    std::string extra;
    if (!(row >> u >> v >> mult) || (row >> extra)) parse_error(lineno, "expected `u v mult`");
    if (u < 0 || v < 0 || u >= n || v >= n) parse_error(lineno, "vertex id out of range");
    if (mult < 0) parse_error(lineno, "negative multiplicity");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), mult});
  }
  if (next_content_line(in, line, lineno)) parse_error(lineno, "unexpected trailing content");
  return Graph::from_edges(static_cast<std::size_t>(n), edges);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open graph file " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  const auto bundles = g.edge_bundles();
  out << g.vertex_count() << ' ' << bundles.size() << '\n';
  for (const auto& e : bundles) out << e.u << ' ' << e.v << ' ' << e.multiplicity << '\n';
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write graph file " + path);
  write_graph(out, g);
}

}  // namespace curvlab
