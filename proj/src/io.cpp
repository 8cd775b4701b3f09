#include "graphboot/io.hpp"

#include <fstream>
#include <sstream>

namespace graphboot {

GraphFormatError::GraphFormatError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  bool header = false;
  while (!header && std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string tag;
    long long count = -1;
    std::string extra;
    if (!(ss >> tag >> count) || tag != "n" || count < 1 || (ss >> extra)) {
      throw GraphFormatError(lineno, "expected header 'n <node_count>'");
    }
    n = static_cast<std::size_t>(count);
    header = true;
  }
  if (!header) throw GraphFormatError(0, "missing header 'n <node_count>'");
  Graph g(n);
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    long long u = -1;
    long long v = -1;
    std::string extra;
    if (!(ss >> u >> v) || (ss >> extra)) throw GraphFormatError(lineno, "expected 'u v'");
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n) {
      throw GraphFormatError(lineno, "node id out of range [0, " + std::to_string(n) + ")");
    }
    if (u == v) throw GraphFormatError(lineno, "self-loop on node " + std::to_string(u));
    if (!g.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v))) {
      throw GraphFormatError(lineno, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
  }
  return g;
}

void write_graph(const Graph& graph, std::ostream& out) {
  out << "n " << graph.node_count() << '\n';
  for (const auto& [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  return read_graph(in);
}

void save_graph(const Graph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file " + path);
  write_graph(graph, out);
  if (!out) throw std::runtime_error("failed writing graph file " + path);
}

}  // namespace graphboot
