#include "graphboot/motif.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace graphboot {
namespace {

struct PairTable {
  std::array<std::pair<std::uint8_t, std::uint8_t>, 28> ends{};
  PairTable() {
    for (int b = 1; b < kMaxMotifVertices; ++b) {
      for (int a = 0; a < b; ++a) {
        ends[static_cast<std::size_t>(pair_index(a, b))] = {static_cast<std::uint8_t>(a),
                                                            static_cast<std::uint8_t>(b)};
      }
    }
  }
};

const PairTable& pair_table() {
  static const PairTable table;
  return table;
}

void check_vertex_count(int p) {
  if (p < kMinMotifVertices || p > kMaxMotifVertices) {
    throw std::invalid_argument("motif vertex count " + std::to_string(p) +
                                " outside supported range 2..8");
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(std::string_view s, std::string_view context) {
  const std::string t = trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw std::invalid_argument("malformed integer '" + t + "' in motif literal '" +
                                std::string(context) + "'");
  }
  return value;
}

}  // namespace

PairMask permute_mask(int p, PairMask mask, std::span<const int> perm) {
  const auto& ends = pair_table().ends;
  PairMask out = 0;
  (void)p;
  for (PairMask rest = mask; rest != 0; rest &= rest - 1) {
    const auto [a, b] = ends[static_cast<std::size_t>(std::countr_zero(rest))];
    out |= PairMask{1} << pair_index(perm[a], perm[b]);
  }
  return out;
}

Motif::Motif(int vertex_count, PairMask mask, std::string name, int)
    : p_(vertex_count), mask_(mask), name_(std::move(name)) {
  check_vertex_count(p_);
  if (p_ < 8 && (mask_ >> pair_count(p_)) != 0) {
    throw std::invalid_argument("pair mask has bits beyond the vertex count");
  }
  key_ = canonical_label(p_, mask_);
}

Motif::Motif(int vertex_count, std::span<const std::pair<int, int>> edges, std::string name)
    : p_(vertex_count), mask_(0), name_(std::move(name)) {
  check_vertex_count(p_);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= p_ || b >= p_) {
      throw std::invalid_argument("motif edge " + std::to_string(a) + "-" + std::to_string(b) +
                                  " out of range");
    }
    if (a == b) throw std::invalid_argument("motif self-loop at vertex " + std::to_string(a));
    const PairMask bit = PairMask{1} << pair_index(a, b);
    if (mask_ & bit) {
      throw std::invalid_argument("duplicate motif edge " + std::to_string(a) + "-" +
                                  std::to_string(b));
    }
    mask_ |= bit;
  }
  key_ = canonical_label(p_, mask_);
}

Motif::Motif(int vertex_count, std::initializer_list<std::pair<int, int>> edges, std::string name)
    : Motif(vertex_count, std::span<const std::pair<int, int>>(edges.begin(), edges.size()),
            std::move(name)) {}

Motif::Motif(int vertex_count, PairMask mask, std::string name, std::string key)
    : p_(vertex_count), mask_(mask), name_(std::move(name)), key_(std::move(key)) {}

Motif Motif::from_mask(int vertex_count, PairMask mask, std::string name) {
  return Motif(vertex_count, mask, std::move(name), 0);
}

Motif Motif::from_canonical_mask(int vertex_count, PairMask mask, std::string name) {
  check_vertex_count(vertex_count);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%d:%x", vertex_count, mask);
  return Motif(vertex_count, mask, std::move(name), std::string(buf));
}

Motif Motif::parse(std::string_view literal) {
  const std::string text = trim(literal);
  const auto semi = text.find(';');
  if (semi == std::string::npos) {
    if (text == "K2" || text == "edge") return motifs::edge();
    if (text == "2star" || text == "2-star" || text == "path3") return motifs::two_star();
    if (text == "triangle" || text == "K3") return motifs::triangle();
    if (text == "path4") return motifs::path(4);
    if (text == "star4") return motifs::star(4);
    if (text == "cycle4") return motifs::cycle(4);
    if (text == "K4") return motifs::complete(4);
    throw std::invalid_argument("unknown motif '" + text + "'");
  }
  std::string head = text.substr(0, semi);
  std::string name;
  if (const auto colon = head.find(':'); colon != std::string::npos) {
    name = trim(std::string_view(head).substr(0, colon));
    head = head.substr(colon + 1);
  }
  const int p = parse_int(head, text);
  std::vector<std::pair<int, int>> edges;
  std::string_view rest(text);
  rest.remove_prefix(semi + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      throw std::invalid_argument("malformed motif edge '" + item + "' in '" + text + "'");
    }
    edges.emplace_back(parse_int(std::string_view(item).substr(0, dash), text),
                       parse_int(std::string_view(item).substr(dash + 1), text));
  }
  return Motif(p, edges, std::move(name));
}

int Motif::edge_count() const noexcept { return std::popcount(mask_); }

std::vector<std::pair<int, int>> Motif::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < p_; ++a) {
    for (int b = a + 1; b < p_; ++b) {
      if (has_edge(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

bool Motif::connected() const noexcept {
  unsigned seen = 1U;
  unsigned frontier = 1U;
  while (frontier != 0U) {
    unsigned next = 0U;
    for (int v = 0; v < p_; ++v) {
      if (!((frontier >> v) & 1U)) continue;
      for (int w = 0; w < p_; ++w) {
        if (w != v && has_edge(v, w) && !((seen >> w) & 1U)) next |= 1U << w;
      }
    }
    seen |= next;
    frontier = next;
  }
  return seen == (1U << p_) - 1U;
}

Motif Motif::complement() const {
  const PairMask full = p_ == 8 ? 0x0FFFFFFFU : (PairMask{1} << pair_count(p_)) - 1U;
  return Motif::from_mask(p_, full & ~mask_);
}

std::string Motif::literal() const {
  std::string out = std::to_string(p_) + ";";
  bool first = true;
  for (const auto& [a, b] : edges()) {
    out += first ? " " : ",";
    out += std::to_string(a) + "-" + std::to_string(b);
    first = false;
  }
  return out;
}

PairMask exhaustive_canonical_mask(int p, PairMask mask) {
  std::array<int, kMaxMotifVertices> perm{};
  std::iota(perm.begin(), perm.begin() + p, 0);
  PairMask best = mask;
  do {
    best = std::min(best, permute_mask(p, mask, std::span<const int>(perm.data(), static_cast<std::size_t>(p))));
  } while (std::next_permutation(perm.begin(), perm.begin() + p));
  return best;
}

CanonicalForm canonical_form(int p, PairMask mask) {
  std::array<int, kMaxMotifVertices> perm{};
  std::iota(perm.begin(), perm.begin() + p, 0);
  CanonicalForm out{mask, 0};
  do {
    const PairMask m = permute_mask(p, mask, std::span<const int>(perm.data(), static_cast<std::size_t>(p)));
    out.mask = std::min(out.mask, m);
    if (m == mask) ++out.automorphisms;
  } while (std::next_permutation(perm.begin(), perm.begin() + p));
  return out;
}

PairMask refined_canonical_mask(int p, PairMask mask) {
  std::array<unsigned, kMaxMotifVertices> nbr{};
  for (int i = 0; i < pair_count(p); ++i) {
    if ((mask >> i) & 1U) {
      const auto [a, b] = pair_table().ends[static_cast<std::size_t>(i)];
      nbr[a] |= 1U << b;
      nbr[b] |= 1U << a;
    }
  }
  std::array<int, kMaxMotifVertices> color{};
  for (int v = 0; v < p; ++v) color[static_cast<std::size_t>(v)] = std::popcount(nbr[static_cast<std::size_t>(v)]);
  int classes = 0;
  for (;;) {
    // Signature: own colour, then per-colour neighbour counts (4 bits each).
    std::array<std::uint64_t, kMaxMotifVertices> sig{};
    for (int v = 0; v < p; ++v) {
      std::uint64_t s = static_cast<std::uint64_t>(color[static_cast<std::size_t>(v)]) << 40;
      for (int w = 0; w < p; ++w) {
        if ((nbr[static_cast<std::size_t>(v)] >> w) & 1U) s += std::uint64_t{1} << (4 * color[static_cast<std::size_t>(w)]);
      }
      sig[static_cast<std::size_t>(v)] = s;
    }
    std::array<std::uint64_t, kMaxMotifVertices> sorted = sig;
    std::sort(sorted.begin(), sorted.begin() + p);
    const auto end = std::unique(sorted.begin(), sorted.begin() + p);
    const int next_classes = static_cast<int>(end - sorted.begin());
    for (int v = 0; v < p; ++v) {
      color[static_cast<std::size_t>(v)] =
          static_cast<int>(std::lower_bound(sorted.begin(), end, sig[static_cast<std::size_t>(v)]) - sorted.begin());
    }
    if (next_classes == classes) break;
    classes = next_classes;
  }
  // Vertices grouped by colour; every cell-respecting relabeling is tried.
  std::array<int, kMaxMotifVertices> order{};
  std::iota(order.begin(), order.begin() + p, 0);
  std::sort(order.begin(), order.begin() + p, [&](int a, int b) {
    return color[static_cast<std::size_t>(a)] < color[static_cast<std::size_t>(b)];
  });
  std::array<int, kMaxMotifVertices + 1> cell_start{};
  int cells = 0;
  for (int i = 0; i < p; ++i) {
    if (i == 0 || color[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] !=
                      color[static_cast<std::size_t>(order[static_cast<std::size_t>(i - 1)])]) {
      cell_start[static_cast<std::size_t>(cells++)] = i;
    }
  }
  cell_start[static_cast<std::size_t>(cells)] = p;
  PairMask best = ~PairMask{0};
  std::array<int, kMaxMotifVertices> perm{};
  for (;;) {
    for (int i = 0; i < p; ++i) perm[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    best = std::min(best, permute_mask(p, mask, std::span<const int>(perm.data(), static_cast<std::size_t>(p))));
    // Odometer over per-cell permutations.
    int c = 0;
    for (; c < cells; ++c) {
      auto first = order.begin() + cell_start[static_cast<std::size_t>(c)];
      auto last = order.begin() + cell_start[static_cast<std::size_t>(c + 1)];
      if (std::next_permutation(first, last)) break;
    }
    if (c == cells) break;
  }
  return best;
}

std::string canonical_label(int p, PairMask mask) {
  check_vertex_count(p);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%d:%x", p, exhaustive_canonical_mask(p, mask));
  return buf;
}

std::string canonical_label(const Motif& motif) { return motif.key(); }

std::uint64_t automorphism_count(const Motif& motif) {
  const int p = motif.vertex_count();
  std::array<int, kMaxMotifVertices> perm{};
  std::iota(perm.begin(), perm.begin() + p, 0);
  std::uint64_t count = 0;
  do {
    if (permute_mask(p, motif.mask(), std::span<const int>(perm.data(), static_cast<std::size_t>(p))) == motif.mask()) ++count;
  } while (std::next_permutation(perm.begin(), perm.begin() + p));
  return count;
}

std::uint64_t labeled_copy_count(const Motif& motif) {
  return factorial(motif.vertex_count()) / automorphism_count(motif);
}

std::vector<PairMask> labeled_copies(const Motif& motif) {
  const int p = motif.vertex_count();
  std::array<int, kMaxMotifVertices> perm{};
  std::iota(perm.begin(), perm.begin() + p, 0);
  std::vector<PairMask> out;
  do {
    out.push_back(permute_mask(p, motif.mask(), std::span<const int>(perm.data(), static_cast<std::size_t>(p))));
  } while (std::next_permutation(perm.begin(), perm.begin() + p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_isomorphic(const Motif& a, const Motif& b) noexcept { return a.key() == b.key(); }

std::vector<Motif> isomorphism_classes(int p, bool connected_only) {
  check_vertex_count(p);
  if (p > 7) throw std::invalid_argument("class enumeration supports at most 7 vertices");
  std::unordered_set<PairMask> seen;
  std::vector<PairMask> reps;
  const PairMask limit = PairMask{1} << pair_count(p);
  for (PairMask m = 0; m < limit; ++m) {
    if (seen.insert(refined_canonical_mask(p, m)).second) reps.push_back(m);
  }
  std::vector<std::pair<std::pair<int, PairMask>, PairMask>> keyed;
  for (PairMask m : reps) {
    const PairMask canon = exhaustive_canonical_mask(p, m);
    keyed.push_back({{std::popcount(canon), canon}, canon});
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<Motif> out;
  for (const auto& [k, canon] : keyed) {
    Motif m = Motif::from_mask(p, canon);
    if (!connected_only || m.connected()) out.push_back(std::move(m));
  }
  return out;
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

namespace motifs {

Motif edge() { return Motif(2, {{0, 1}}, "K2"); }
Motif two_star() { return Motif(3, {{0, 1}, {1, 2}}, "2star"); }
Motif triangle() { return Motif(3, {{0, 1}, {0, 2}, {1, 2}}, "triangle"); }

Motif path(int p) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < p; ++i) e.emplace_back(i, i + 1);
  return Motif(p, e, "path" + std::to_string(p));
}

Motif star(int p) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < p; ++i) e.emplace_back(0, i);
  return Motif(p, e, "star" + std::to_string(p));
}

Motif cycle(int p) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < p; ++i) e.emplace_back(i, (i + 1) % p);
  return Motif(p, e, "cycle" + std::to_string(p));
}

Motif complete(int p) {
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) e.emplace_back(a, b);
  }
  return Motif(p, e, "K" + std::to_string(p));
}

Motif empty(int p) { return Motif::from_mask(p, 0, "empty" + std::to_string(p)); }

}  // namespace motifs
}  // namespace graphboot
