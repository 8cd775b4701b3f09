#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "graphboot/graph.hpp"
#include "graphboot/motif.hpp"
#include "graphboot/rng.hpp"

namespace testutil {

inline graphboot::Graph make_graph(std::size_t n, std::initializer_list<graphboot::Edge> edges) {
  const std::vector<graphboot::Edge> list(edges);
  return graphboot::Graph::from_edges(n, list);
}

inline graphboot::Graph random_graph(std::size_t n, double p, graphboot::Seed seed) {
  graphboot::Rng rng(seed);
  graphboot::Graph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) g.add_edge(i, j);
    }
  }
  return g;
}

inline graphboot::Graph relabel(const graphboot::Graph& g, const std::vector<std::size_t>& perm) {
  graphboot::Graph out(g.node_count());
  for (const auto& [u, v] : g.edges()) out.add_edge(perm[u], perm[v]);
  return out;
}

inline std::vector<std::size_t> random_permutation(std::size_t n, graphboot::Seed seed) {
  graphboot::Rng rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  return perm;
}

// Edge-preserving bijection search over all p! relabelings.
inline bool brute_isomorphic(int p, graphboot::PairMask a, int q, graphboot::PairMask b) {
  if (p != q) return false;
  const auto edge = [](graphboot::PairMask m, int x, int y) {
    if (x > y) std::swap(x, y);
    return (m >> (y * (y - 1) / 2 + x)) & 1U;
  };
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int x = 0; x < p && ok; ++x) {
      for (int y = x + 1; y < p && ok; ++y) ok = edge(a, x, y) == edge(b, perm[x], perm[y]);
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline std::uint64_t brute_automorphisms(const graphboot::Motif& m) {
  std::vector<int> perm(m.vertex_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (int x = 0; x < m.vertex_count() && ok; ++x) {
      for (int y = x + 1; y < m.vertex_count() && ok; ++y) ok = m.has_edge(x, y) == m.has_edge(perm[x], perm[y]);
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace testutil
