#include "graphboot/census.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "graphboot/parallel.hpp"

namespace graphboot {
namespace {

template <typename F>
void for_each_bit(std::span<const std::uint64_t> words, F&& f) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      const int b = std::countr_zero(bits);
      f(w * 64 + static_cast<std::size_t>(b));
      bits &= bits - 1;
    }
  }
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  if (r > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("binomial overflow");
  return static_cast<std::uint64_t>(r);
}

struct TriadStats {
  std::uint64_t n = 0;
  std::uint64_t edges = 0;
  std::uint64_t wedges = 0;  // sum over nodes of C(d, 2)
  std::uint64_t triangles = 0;
};

TriadStats triad_stats(const Graph& g) {
  TriadStats s;
  s.n = g.node_count();
  s.edges = g.edge_count();
  std::uint64_t closed = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const std::uint64_t d = g.degree(u);
    if (d > 1) s.wedges += d * (d - 1) / 2;
    for_each_bit(g.row(u), [&](std::size_t v) {
      if (v > u) closed += g.codegree(u, v);
    });
  }
  s.triangles = closed / 3;
  return s;
}

std::map<std::string, std::uint64_t> triads_from(const TriadStats& s) {
  const std::uint64_t total = choose(s.n, 3);
  const std::uint64_t three = s.triangles;
  const std::uint64_t two = s.wedges - 3 * three;
  const std::uint64_t one = s.edges * (s.n >= 2 ? s.n - 2 : 0) - 2 * two - 3 * three;
  const std::uint64_t zero = total - one - two - three;
  return {{motifs::empty(3).key(), zero},
          {Motif(3, {{0, 1}}).key(), one},
          {motifs::two_star().key(), two},
          {motifs::triangle().key(), three}};
}

// s(F, H): number of edge subsets of a fixed labelled H that form a spanning
// graph isomorphic to F, for the eleven 4-vertex classes.
struct FourVertexTable {
  std::vector<Motif> classes;  // ordered by edge count
  std::vector<std::vector<std::int64_t>> contains;  // contains[f][h]

  FourVertexTable() : classes(isomorphism_classes(4)) {
    const std::size_t c = classes.size();
    contains.assign(c, std::vector<std::int64_t>(c, 0));
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < c; ++i) index[classes[i].key()] = i;
    for (std::size_t h = 0; h < c; ++h) {
      const PairMask hm = classes[h].mask();
      // Enumerate submasks of hm.
      for (PairMask sub = hm;; sub = (sub - 1) & hm) {
        ++contains[index.at(canonical_label(4, sub))][h];
        if (sub == 0) break;
      }
    }
  }
};

const FourVertexTable& four_vertex_table() {
  static const FourVertexTable table;
  return table;
}

// Labelled masks isomorphic to a motif, as a lookup structure over the
// 2^C(k,2) possible masks.
class MaskSet {
 public:
  explicit MaskSet(const Motif& motif) {
    const auto copies = labeled_copies(motif);
    if (motif.vertex_count() <= 7) {
      bits_.assign((std::size_t{1} << pair_count(motif.vertex_count())) / 64 + 1, 0);
      for (PairMask m : copies) bits_[m >> 6] |= std::uint64_t{1} << (m & 63);
    } else {
      set_.insert(copies.begin(), copies.end());
    }
  }
  bool contains(PairMask m) const {
    if (!bits_.empty()) return (bits_[m >> 6] >> (m & 63)) & 1U;
    return set_.count(m) != 0;
  }

 private:
  std::vector<std::uint64_t> bits_;
  std::unordered_set<PairMask> set_;
};

// Wernicke's ESU enumeration of connected induced k-subsets. `visit` gets
// the subset (in insertion order) and its pair mask in that order.
template <typename Visit>
class EsuEnumerator {
 public:
  EsuEnumerator(const Graph& g, int k, Visit& visit)
      : g_(g), k_(k), words_(g.words_per_row()), visit_(visit),
        ext_(static_cast<std::size_t>(k + 1) * words_), closed_(static_cast<std::size_t>(k + 1) * words_) {}

  void run_root(NodeId root) {
    sub_[0] = root;
    mask_[0] = 0;
    auto ext = level(ext_, 0);
    auto closed = level(closed_, 0);
    const auto row = g_.row(root);
    for (std::size_t w = 0; w < words_; ++w) {
      closed[w] = row[w];
      ext[w] = row[w] & above_mask(root, w);
    }
    closed[root >> 6] |= std::uint64_t{1} << (root & 63);
    extend(1, root);
  }

 private:
  std::span<std::uint64_t> level(std::vector<std::uint64_t>& v, int depth) {
    return {v.data() + static_cast<std::size_t>(depth) * words_, words_};
  }

  static std::uint64_t above_mask(NodeId root, std::size_t w) {
    const std::size_t base = w * 64;
    if (base + 63 <= root) return 0;
    if (base > root) return ~std::uint64_t{0};
    const std::size_t shift = root - base + 1;
    return shift >= 64 ? 0 : (~std::uint64_t{0} << shift);
  }

  void extend(int size, NodeId root) {
    if (size == k_) {
      visit_(std::span<const NodeId>(sub_.data(), static_cast<std::size_t>(k_)), mask_[static_cast<std::size_t>(k_ - 1)]);
      return;
    }
    auto ext = level(ext_, size - 1);
    auto closed = level(closed_, size - 1);
    auto next_ext = level(ext_, size);
    auto next_closed = level(closed_, size);
    for (std::size_t w = 0; w < words_; ++w) {
      while (ext[w] != 0) {
        const int b = std::countr_zero(ext[w]);
        ext[w] &= ext[w] - 1;
        const NodeId v = w * 64 + static_cast<std::size_t>(b);
        const auto row = g_.row(v);
        for (std::size_t x = 0; x < words_; ++x) {
          next_ext[x] = ext[x] | (row[x] & ~closed[x] & above_mask(root, x));
          next_closed[x] = closed[x] | row[x];
        }
        PairMask m = mask_[static_cast<std::size_t>(size - 1)];
        for (int i = 0; i < size; ++i) {
          if (g_.has_edge(sub_[static_cast<std::size_t>(i)], v)) m |= PairMask{1} << pair_index(i, size);
        }
        sub_[static_cast<std::size_t>(size)] = v;
        mask_[static_cast<std::size_t>(size)] = m;
        extend(size + 1, root);
      }
    }
  }

  const Graph& g_;
  int k_;
  std::size_t words_;
  Visit& visit_;
  std::vector<std::uint64_t> ext_;
  std::vector<std::uint64_t> closed_;
  std::array<NodeId, kMaxMotifVertices> sub_{};
  std::array<PairMask, kMaxMotifVertices> mask_{};
};

void check_esu_args(const Graph& g, int k) {
  if (k < 1 || k > kMaxMotifVertices) throw std::invalid_argument("ESU subset size must be in 1..8");
  if (static_cast<std::size_t>(k) > g.node_count()) {
    throw std::invalid_argument("motif larger than graph");
  }
}

}  // namespace

double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  unsigned __int128 exact = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    exact = exact * (n - k + i) / i;
    if (exact > (static_cast<unsigned __int128>(1) << 100)) {
      double r = 1.0;
      for (std::uint64_t j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
      return r;
    }
  }
  return static_cast<double>(exact);
}

std::map<std::string, std::uint64_t> triad_census(const Graph& graph) {
  if (graph.node_count() < 3) throw std::invalid_argument("motif larger than graph");
  return triads_from(triad_stats(graph));
}

std::map<std::string, std::uint64_t> four_vertex_census(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 4) throw std::invalid_argument("motif larger than graph");
  const auto deg = g.degrees();
  const std::int64_t m = static_cast<std::int64_t>(g.edge_count());
  std::int64_t wedges = 0;
  std::int64_t stars3 = 0;
  for (auto d : deg) {
    const auto di = static_cast<std::int64_t>(d);
    wedges += di * (di - 1) / 2;
    stars3 += di * (di - 1) * (di - 2) / 6;
  }
  std::int64_t closed = 0;         // 3 * triangles
  std::int64_t paths4 = 0;         // sum over edges (d_u - 1)(d_v - 1)
  std::int64_t diamonds = 0;       // sum over edges C(c_uv, 2)
  std::int64_t cycle_pairs = 0;    // sum over all pairs C(c_uv, 2) = 2 * C4
  std::int64_t k4_sum = 0;         // 6 * K4
  std::vector<std::int64_t> tri_at(n, 0);  // 2 * triangles at each node
  std::vector<std::uint64_t> common(g.words_per_row());
  for (NodeId u = 0; u < n; ++u) {
    const auto ru = g.row(u);
    for (NodeId v = u + 1; v < n; ++v) {
      const auto c = static_cast<std::int64_t>(g.codegree(u, v));
      cycle_pairs += c * (c - 1) / 2;
      if (!g.has_edge(u, v)) continue;
      closed += c;
      tri_at[u] += c;
      tri_at[v] += c;
      paths4 += (static_cast<std::int64_t>(deg[u]) - 1) * (static_cast<std::int64_t>(deg[v]) - 1);
      diamonds += c * (c - 1) / 2;
      if (c >= 2) {
        const auto rv = g.row(v);
        for (std::size_t w = 0; w < common.size(); ++w) common[w] = ru[w] & rv[w];
        std::int64_t inner = 0;
        for_each_bit(common, [&](std::size_t x) {
          inner += static_cast<std::int64_t>(intersection_count(g.row(x), common));
        });
        k4_sum += inner / 2;
      }
    }
  }
  const std::int64_t triangles = closed / 3;
  std::int64_t paws = 0;
  for (NodeId v = 0; v < n; ++v) paws += (tri_at[v] / 2) * (static_cast<std::int64_t>(deg[v]) - 2);
  const auto ni = static_cast<std::int64_t>(n);

  // Non-induced copy counts for each class.
  std::map<std::string, std::int64_t> copies;
  copies[motifs::empty(4).key()] = static_cast<std::int64_t>(choose(n, 4));
  copies[Motif(4, {{0, 1}}).key()] = m * ((ni - 2) * (ni - 3) / 2);
  copies[Motif(4, {{0, 1}, {2, 3}}).key()] = m * (m - 1) / 2 - wedges;
  copies[Motif(4, {{0, 1}, {1, 2}}).key()] = wedges * (ni - 3);
  copies[Motif(4, {{0, 1}, {0, 2}, {1, 2}}).key()] = triangles * (ni - 3);
  copies[motifs::path(4).key()] = paths4 - closed;
  copies[motifs::star(4).key()] = stars3;
  copies[motifs::cycle(4).key()] = cycle_pairs / 2;
  copies[Motif(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}}).key()] = paws;
  copies[Motif(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}).key()] = diamonds;
  copies[motifs::complete(4).key()] = k4_sum / 6;

  // Invert copies = S * induced, S upper triangular in edge-count order.
  const auto& table = four_vertex_table();
  const std::size_t c = table.classes.size();
  std::vector<std::int64_t> induced(c, 0);
  for (std::size_t h = c; h-- > 0;) {
    std::int64_t value = copies.at(table.classes[h].key());
    for (std::size_t h2 = h + 1; h2 < c; ++h2) value -= table.contains[h][h2] * induced[h2];
    induced[h] = value;
  }
  std::map<std::string, std::uint64_t> out;
  for (std::size_t h = 0; h < c; ++h) {
    if (induced[h] < 0) throw std::logic_error("negative induced count in 4-vertex census");
    out[table.classes[h].key()] = static_cast<std::uint64_t>(induced[h]);
  }
  return out;
}

std::map<std::string, std::uint64_t> esu_census(const Graph& g, int k, int threads) {
  check_esu_args(g, k);
  const std::size_t workers = static_cast<std::size_t>(std::max(threads, 1));
  std::vector<std::unordered_map<PairMask, std::uint64_t>> partial(workers);
  parallel_for(workers, threads, [&](std::size_t w) {
    auto& local = partial[w];
    auto visit = [&](std::span<const NodeId>, PairMask m) { ++local[m]; };
    EsuEnumerator<decltype(visit)> esu(g, k, visit);
    for (NodeId root = w; root < g.node_count(); root += workers) esu.run_root(root);
  });
  std::unordered_map<PairMask, std::string> keys;
  std::map<std::string, std::uint64_t> out;
  for (const auto& local : partial) {
    for (const auto& [m, count] : local) {
      auto it = keys.find(m);
      if (it == keys.end()) it = keys.emplace(m, canonical_label(k, m)).first;
      out[it->second] += count;
    }
  }
  return out;
}

std::uint64_t esu_count(const Graph& g, const Motif& motif, int threads) {
  check_esu_args(g, motif.vertex_count());
  if (!motif.connected()) throw std::invalid_argument("ESU counts connected motifs only");
  const MaskSet targets(motif);
  const std::size_t workers = static_cast<std::size_t>(std::max(threads, 1));
  std::vector<std::uint64_t> partial(workers, 0);
  parallel_for(workers, threads, [&](std::size_t w) {
    std::uint64_t local = 0;
    auto visit = [&](std::span<const NodeId>, PairMask m) { local += targets.contains(m) ? 1 : 0; };
    EsuEnumerator<decltype(visit)> esu(g, motif.vertex_count(), visit);
    for (NodeId root = w; root < g.node_count(); root += workers) esu.run_root(root);
    partial[w] = local;
  });
  std::uint64_t total = 0;
  for (auto c : partial) total += c;
  return total;
}

namespace {

struct CensusContext {
  const Graph& graph;
  std::optional<std::map<std::string, std::uint64_t>> triads;
  std::optional<std::map<std::string, std::uint64_t>> fours;

  std::uint64_t count(const Motif& motif) {
    const int p = motif.vertex_count();
    if (static_cast<std::size_t>(p) > graph.node_count()) {
      throw std::invalid_argument("motif with " + std::to_string(p) + " vertices larger than graph with " +
                                  std::to_string(graph.node_count()) + " nodes");
    }
    switch (p) {
      case 2:
        return motif.edge_count() == 1 ? graph.edge_count() : choose(graph.node_count(), 2) - graph.edge_count();
      case 3:
        if (!triads) triads = triad_census(graph);
        return triads->at(motif.key());
      case 4:
        if (!fours) fours = four_vertex_census(graph);
        return fours->at(motif.key());
      default:
        if (motif.connected()) return esu_count(graph, motif);
        return esu_count(graph.complement(), motif.complement());
    }
  }

  DensityReport density(const Motif& motif) {
    DensityReport r{motif, 0.0, std::nullopt, 0.0, 0, 0};
    const int p = motif.vertex_count();
    r.subset_count = count(motif);
    const std::uint64_t pf = factorial(p);
    if (r.subset_count > std::numeric_limits<std::uint64_t>::max() / pf) {
      throw std::overflow_error("ordered match count overflows 64 bits");
    }
    r.ordered_match_count = r.subset_count * pf;
    r.raw_density = static_cast<double>(r.subset_count) /
                    (binomial(graph.node_count(), static_cast<std::uint64_t>(p)) *
                     static_cast<double>(labeled_copy_count(motif)));
    r.edge_density = graph.edge_density();
    if (r.edge_density > 0.0) {
      r.normalized_density = r.raw_density / std::pow(r.edge_density, motif.edge_count());
    }
    return r;
  }
};

}  // namespace

std::uint64_t count_induced_copies(const Graph& graph, const Motif& motif) {
  CensusContext ctx{graph, {}, {}};
  return ctx.count(motif);
}

DensityReport motif_density(const Graph& graph, const Motif& motif) {
  CensusContext ctx{graph, {}, {}};
  return ctx.density(motif);
}

std::vector<DensityReport> motif_densities(const Graph& graph, std::span<const Motif> motifs) {
  CensusContext ctx{graph, {}, {}};
  std::vector<DensityReport> out;
  out.reserve(motifs.size());
  for (const auto& m : motifs) out.push_back(ctx.density(m));
  return out;
}

}  // namespace graphboot
