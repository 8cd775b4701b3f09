#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace graphboot {

inline constexpr int kMinMotifVertices = 2;
inline constexpr int kMaxMotifVertices = 8;

/// Bit set over unordered vertex pairs of a graph on at most 8 vertices.
/// Pair {a, b} with a < b occupies bit b(b-1)/2 + a.
using PairMask = std::uint32_t;

constexpr int pair_index(int a, int b) noexcept {
  return a < b ? b * (b - 1) / 2 + a : a * (a - 1) / 2 + b;
}

constexpr int pair_count(int p) noexcept { return p * (p - 1) / 2; }

/// Relabels `mask` so that old vertex v becomes perm[v].
PairMask permute_mask(int p, PairMask mask, std::span<const int> perm);

/// A small labelled pattern graph (the R, S or W of the motif calculus).
/// Connectivity is not required: merged-copy motifs can be disconnected.
class Motif {
 public:
  Motif(int vertex_count, std::span<const std::pair<int, int>> edges, std::string name = {});
  Motif(int vertex_count, std::initializer_list<std::pair<int, int>> edges, std::string name = {});

  static Motif from_mask(int vertex_count, PairMask mask, std::string name = {});
  /// As from_mask, for a mask already known to be the exhaustive canonical
  /// mask of its class; skips the search.
  static Motif from_canonical_mask(int vertex_count, PairMask mask, std::string name = {});

  /// Parses "name: p; a-b,c-d", "p; a-b,c-d" or a builtin name
  /// (K2, 2star, triangle, path4, star4, cycle4, K4).
  static Motif parse(std::string_view literal);

  int vertex_count() const noexcept { return p_; }
  int edge_count() const noexcept;
  PairMask mask() const noexcept { return mask_; }
  bool has_edge(int a, int b) const noexcept { return (mask_ >> pair_index(a, b)) & 1U; }
  std::vector<std::pair<int, int>> edges() const;

  /// Isomorphism-class key; equal keys iff isomorphic.
  const std::string& key() const noexcept { return key_; }
  const std::string& name() const noexcept { return name_; }
  /// Name if one was given, else the canonical key.
  const std::string& label() const noexcept { return name_.empty() ? key_ : name_; }

  bool connected() const noexcept;
  Motif complement() const;
  /// Round-trippable literal "p; a-b,...".
  std::string literal() const;

  bool operator==(const Motif& o) const noexcept { return p_ == o.p_ && mask_ == o.mask_; }

 private:
  Motif(int vertex_count, PairMask mask, std::string name, int);
  Motif(int vertex_count, PairMask mask, std::string name, std::string key);

  int p_;
  PairMask mask_;
  std::string name_;
  std::string key_;
};

/// Canonical key: vertex count plus the minimum pair mask over all p!
/// relabelings, rendered as "p:hex".
std::string canonical_label(const Motif& motif);
std::string canonical_label(int p, PairMask mask);

/// Minimum pair mask over all p! relabelings.
PairMask exhaustive_canonical_mask(int p, PairMask mask);

struct CanonicalForm {
  PairMask mask;
  std::uint64_t automorphisms;
};

/// Exhaustive canonical mask and |Aut| from a single sweep over relabelings.
CanonicalForm canonical_form(int p, PairMask mask);

/// A canonical mask computed by colour refinement followed by a search over
/// relabelings that respect the refined cells. Canonical (equal iff
/// isomorphic) but generally different from exhaustive_canonical_mask; used
/// as a fast cache index when classifying many labelled graphs.
PairMask refined_canonical_mask(int p, PairMask mask);

std::uint64_t automorphism_count(const Motif& motif);
/// N(R) = p! / |Aut(R)|, the number of labelled graphs on 1..p isomorphic to R.
std::uint64_t labeled_copy_count(const Motif& motif);
/// The N(R) distinct pair masks isomorphic to `motif`, sorted ascending.
std::vector<PairMask> labeled_copies(const Motif& motif);

bool is_isomorphic(const Motif& a, const Motif& b) noexcept;

/// One representative per isomorphism class on p vertices, ordered by
/// (edge count, canonical mask).
std::vector<Motif> isomorphism_classes(int p, bool connected_only = false);

std::uint64_t factorial(int k);

namespace motifs {
Motif edge();
Motif two_star();
Motif triangle();
Motif path(int p);
Motif star(int p);
Motif cycle(int p);
Motif complete(int p);
Motif empty(int p);
}  // namespace motifs

}  // namespace graphboot
