#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphboot/graph.hpp"
#include "graphboot/graphon.hpp"
#include "graphboot/histogram.hpp"
#include "graphboot/motif.hpp"

namespace graphboot {

// ---------------------------------------------------------------------------
// Merged copy sets

struct MergedCopyEntry {
  Motif motif;
  /// D(W): ordered pairs (i, j) of ordered p-tuples over 1..k covering
  /// 1..k with W(i) ~ R and W(j) ~ R.
  std::uint64_t coefficient;
  /// N(W).
  std::uint64_t labeled_copies;
};

class MergedCopyCatalog {
 public:
  MergedCopyCatalog(Motif base, std::vector<std::vector<MergedCopyEntry>> by_k);

  const Motif& base() const noexcept { return base_; }
  int min_k() const noexcept { return base_.vertex_count(); }
  int max_k() const noexcept { return 2 * base_.vertex_count(); }
  /// Entries on k vertices, ordered by (edge count, canonical key).
  std::span<const MergedCopyEntry> entries(int k) const;
  std::size_t size() const noexcept;

 private:
  Motif base_;
  std::vector<std::vector<MergedCopyEntry>> by_k_;
};

/// Catalog of MC(R, k) for k = p..2p. Built once per isomorphism class
/// and cached. Throws std::invalid_argument for p > 4.
const MergedCopyCatalog& merged_copy_catalog(const Motif& motif);

/// D(W) by direct enumeration of ordered tuple pairs (k <= 6 recommended).
std::uint64_t direct_coefficient(const Motif& base, const Motif& w);

// ---------------------------------------------------------------------------
// Merge-collision sets

struct MergeCollisionEntry {
  Motif motif;
  /// Partitions into independent cells whose quotient (edge between cells
  /// iff some cross pair is an edge) is isomorphic to `motif`.
  std::uint64_t multiplicity;
  /// Those partitions whose cross-cell blocks are all edges or all
  /// non-edges; only these contribute under a zero-diagonal {0,1} link.
  std::uint64_t exact_multiplicity;
};

class MergeCollisionCatalog {
 public:
  MergeCollisionCatalog(Motif base, std::vector<std::vector<MergeCollisionEntry>> by_j);

  const Motif& base() const noexcept { return base_; }
  /// Entries on j cells, j = 1..q; j = 1 is always empty for a motif with edges.
  std::span<const MergeCollisionEntry> entries(int j) const;

 private:
  Motif base_;
  std::vector<std::vector<MergeCollisionEntry>> by_j_;
};

/// Throws std::invalid_argument for q > 6 or an edgeless motif.
const MergeCollisionCatalog& merge_collision_catalog(const Motif& motif);

nlohmann::json to_json(const MergedCopyCatalog& catalog);
nlohmann::json to_json(const MergeCollisionCatalog& catalog);

// ---------------------------------------------------------------------------
// Link providers

/// Uniform handle on h_n, h_adj or h_hist for computing labelled motif
/// probabilities P_W.
class LinkProvider {
 public:
  enum class Kind { true_graphon, empirical, histogram };

  static LinkProvider true_graphon(GraphonSpec spec, double rho);
  static LinkProvider empirical(Graph graph);
  static LinkProvider histogram(HistogramModel model);

  Kind kind() const noexcept { return kind_; }
  std::string kind_name() const;

  /// P_K2 under the provider.
  double edge_density() const;

  /// Exact P_W, or empty when no exact route exists: additive graphon with
  /// more than 7 vertices, empirical provider with more than 4 vertices
  /// unless n^k <= 1e7.
  std::optional<double> exact_probability(const Motif& w) const;
  /// exact_probability carried in extended precision.
  std::optional<long double> exact_probability_extended(const Motif& w) const;

  /// Averages the edge/non-edge product over `samples` iid latent vectors.
  ProbabilityEstimate monte_carlo_probability(const Motif& w, std::size_t samples, Seed seed) const;

  /// Discrete latent mixture (uniform class weights, class-pair edge
  /// probabilities) equivalent to the provider, when one exists: constant
  /// and block graphons, histograms, and the empirical graphon (classes are
  /// source nodes). Empty for the additive graphon.
  struct Mixture {
    std::size_t classes = 0;
    std::vector<double> probs;
  };
  std::optional<Mixture> mixture() const;

  const GraphonSpec* spec() const noexcept;
  double rho() const noexcept { return rho_; }
  const Graph* graph() const noexcept;
  const HistogramModel* model() const noexcept;

 private:
  LinkProvider() = default;
  struct EmpiricalCache;

  Kind kind_ = Kind::true_graphon;
  std::shared_ptr<const GraphonSpec> spec_;
  double rho_ = 0.0;
  std::shared_ptr<const Graph> graph_;
  std::shared_ptr<const HistogramModel> model_;
  std::shared_ptr<EmpiricalCache> cache_;
};

enum class DensityMethod { exact, monte_carlo };

struct DensityOptions {
  DensityMethod method = DensityMethod::exact;
  std::size_t samples = 1'000'000;
  Seed seed = 0;
};

/// P_R(provider). Exact mode throws std::domain_error when unavailable.
ProbabilityEstimate expected_motif_density(const LinkProvider& provider, const Motif& motif,
                                           const DensityOptions& options = {});

/// E[P_R(G_n)^2] for an n-node graph drawn from the provider, from the
/// merged copy catalog. Throws std::domain_error when some P_W has no exact
/// route.
double second_moment(const LinkProvider& provider, const Motif& motif, std::size_t n);

/// sigma^2_R = n / rho^{2|E(R)|} (E[P_R^2] - P_R^2) with rho the provider
/// edge density.
double variance_sigma2(const LinkProvider& provider, const Motif& motif, std::size_t n);

struct Moments {
  double mean = 0.0;
  double second_moment = 0.0;
};

/// Exact E[P_R] and E[P_R^2] by enumerating every class assignment of the
/// provider's latent mixture and every labelled graph on n <= 5 nodes.
/// Throws std::invalid_argument for n > 5 or more than 10^5 assignments,
/// std::domain_error for providers without a mixture form.
Moments brute_force_moments(const LinkProvider& provider, const Motif& motif, std::size_t n);

}  // namespace graphboot
