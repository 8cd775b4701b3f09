#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphboot/graph.hpp"
#include "graphboot/motif.hpp"

namespace graphboot {

// Motif density of a data graph: the normalised induced-subgraph count
//   raw = #{ordered p-tuples of distinct nodes inducing a copy of R}
//         / (C(n,p) * p! * N(R)),
// its sparsity-normalised variant raw / edge_density^|E(R)|, and the
// observed edge density.
struct DensityReport {
  Motif motif;
  double raw_density = 0.0;
  /// Empty when the graph has no edges.
  std::optional<double> normalized_density;
  double edge_density = 0.0;
  /// Induced p-subsets isomorphic to the motif.
  std::uint64_t subset_count = 0;
  /// subset_count * p!.
  std::uint64_t ordered_match_count = 0;
};

/// Number of p-element node subsets whose induced subgraph is isomorphic to
/// `motif`. Throws std::invalid_argument if the motif has more vertices than
/// the graph.
///
/// p <= 4 uses closed forms built from degrees, codegrees and triangle
/// counts (all classes, connected or not). p >= 5 enumerates connected
/// subsets (ESU); a disconnected motif is counted as its connected
/// complement in the complement graph.
std::uint64_t count_induced_copies(const Graph& graph, const Motif& motif);

DensityReport motif_density(const Graph& graph, const Motif& motif);

/// Densities for several motifs, sharing the per-graph statistics.
std::vector<DensityReport> motif_densities(const Graph& graph, std::span<const Motif> motifs);

/// Induced counts of every 3-vertex class, keyed by canonical key.
std::map<std::string, std::uint64_t> triad_census(const Graph& graph);

/// Induced counts of all eleven 4-vertex classes, keyed by canonical key.
std::map<std::string, std::uint64_t> four_vertex_census(const Graph& graph);

/// Counts of connected induced k-subsets by class, enumerated with ESU.
/// Roots are split across `threads` workers; the result does not depend on
/// the thread count.
std::map<std::string, std::uint64_t> esu_census(const Graph& graph, int k, int threads = 1);

/// ESU count of induced copies of a connected motif.
std::uint64_t esu_count(const Graph& graph, const Motif& motif, int threads = 1);

/// C(n, k) as a double.
double binomial(std::uint64_t n, std::uint64_t k);

}  // namespace graphboot
