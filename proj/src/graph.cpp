#include "graphboot/graph.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace graphboot {

Graph::Graph(std::size_t node_count)
    : n_(node_count), words_((node_count + 63) / 64), bits_(n_ * words_, 0) {}

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
  Graph g(node_count);
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw std::invalid_argument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") out of range for " + std::to_string(node_count) + " nodes");
    }
    if (!g.add_edge(u, v)) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(u) + ", " +
                                  std::to_string(v) + ")");
    }
  }
  return g;
}

bool Graph::add_edge(NodeId u, NodeId v) {
  if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
  if (u >= n_ || v >= n_) throw std::invalid_argument("edge endpoint out of range");
  if (has_edge(u, v)) return false;
  bits_[u * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
  bits_[v * words_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
  ++edges_;
  return true;
}

std::size_t Graph::degree(NodeId u) const noexcept {
  std::size_t d = 0;
  for (auto w : row(u)) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> out(n_);
  for (NodeId u = 0; u < n_; ++u) out[u] = degree(u);
  return out;
}

std::size_t Graph::codegree(NodeId u, NodeId v) const noexcept {
  return intersection_count(row(u), row(v));
}

double Graph::edge_density() const noexcept {
  if (n_ < 2) return 0.0;
  return static_cast<double>(edges_) / (static_cast<double>(n_) * static_cast<double>(n_ - 1) / 2.0);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_);
  for (NodeId u = 0; u < n_; ++u) {
    for (NodeId v = u + 1; v < n_; ++v) {
      if (has_edge(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph Graph::complement() const {
  Graph g(n_);
  for (NodeId u = 0; u < n_; ++u) {
    for (NodeId v = u + 1; v < n_; ++v) {
      if (!has_edge(u, v)) g.add_edge(u, v);
    }
  }
  return g;
}

Graph Graph::induced(std::span<const NodeId> nodes) const {
  Graph g(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (nodes[a] == nodes[b]) continue;
      if (has_edge(nodes[a], nodes[b])) g.add_edge(a, b);
    }
  }
  return g;
}

std::size_t intersection_count(std::span<const std::uint64_t> a,
                               std::span<const std::uint64_t> b) noexcept {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return c;
}

}  // namespace graphboot
