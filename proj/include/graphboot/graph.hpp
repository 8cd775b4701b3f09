#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace graphboot {

using NodeId = std::size_t;
using Edge = std::pair<NodeId, NodeId>;

// Simple undirected graph stored as a symmetric, zero-diagonal bit matrix.
// Rows are packed into 64-bit words so that neighbourhood intersections cost
// O(n / 64).
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count);

  /// Builds a graph from an edge list; rejects self-loops, duplicates and
  /// out-of-range endpoints with std::invalid_argument.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_; }
  std::size_t words_per_row() const noexcept { return words_; }

  bool has_edge(NodeId u, NodeId v) const noexcept {
    return (bits_[u * words_ + (v >> 6)] >> (v & 63)) & 1U;
  }

  /// Adds {u, v}. Returns false if the edge was already present.
  bool add_edge(NodeId u, NodeId v);

  std::span<const std::uint64_t> row(NodeId u) const noexcept {
    return {bits_.data() + u * words_, words_};
  }

  std::size_t degree(NodeId u) const noexcept;
  std::vector<std::size_t> degrees() const;
  /// Number of common neighbours of u and v.
  std::size_t codegree(NodeId u, NodeId v) const noexcept;

  /// Fraction of node pairs that are joined by an edge.
  double edge_density() const noexcept;

  std::vector<Edge> edges() const;
  Graph complement() const;
  Graph induced(std::span<const NodeId> nodes) const;

  bool operator==(const Graph& other) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Intersection popcount of two packed rows.
std::size_t intersection_count(std::span<const std::uint64_t> a,
                               std::span<const std::uint64_t> b) noexcept;

}  // namespace graphboot
