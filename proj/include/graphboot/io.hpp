#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "graphboot/graph.hpp"

namespace graphboot {

/// Malformed edge-list input; `line` is 1-based (0 when not line specific).
class GraphFormatError : public std::runtime_error {
 public:
  GraphFormatError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Edge-list format: a header line "n <node_count>", then one "u v" pair of
// 0-based node ids per line, each undirected edge listed once. Blank lines
// and lines starting with '#' are ignored.
Graph read_graph(std::istream& in);
void write_graph(const Graph& graph, std::ostream& out);

Graph load_graph(const std::string& path);
void save_graph(const Graph& graph, const std::string& path);

}  // namespace graphboot
