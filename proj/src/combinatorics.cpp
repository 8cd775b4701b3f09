#include "graphboot/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <map>
#include <mutex>
#include <unordered_map>

#include "graphboot/census.hpp"

namespace graphboot {

namespace {

PairMask embed(int p, PairMask mask, int offset) {
  PairMask out = 0;
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) {
      if ((mask >> pair_index(a, b)) & 1U) out |= PairMask{1} << pair_index(a + offset, b + offset);
    }
  }
  return out;
}

PairMask induced_mask(PairMask mask, std::span<const int> vertices) {
  PairMask out = 0;
  const int p = static_cast<int>(vertices.size());
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) {
      if ((mask >> pair_index(vertices[static_cast<std::size_t>(a)], vertices[static_cast<std::size_t>(b)])) & 1U) {
        out |= PairMask{1} << pair_index(a, b);
      }
    }
  }
  return out;
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Entries hold canonical masks, so the mask orders classes.
bool entry_order(const Motif& a, const Motif& b) {
  if (a.edge_count() != b.edge_count()) return a.edge_count() < b.edge_count();
  return a.mask() < b.mask();
}

std::vector<std::vector<MergedCopyEntry>> build_merged_copies(const Motif& base) {
  const int p = base.vertex_count();
  const auto copies = labeled_copies(base);
  const std::uint64_t nr = copies.size();
  const std::uint64_t pf = factorial(p);
  std::vector<std::vector<MergedCopyEntry>> by_k;
  for (int k = p; k <= 2 * p; ++k) {
    const int shift = k - p;
    PairMask overlap = 0;
    for (int a = shift; a < p; ++a) {
      for (int b = a + 1; b < p; ++b) overlap |= PairMask{1} << pair_index(a, b);
    }
    std::vector<int> cross;
    for (int a = 0; a < shift; ++a) {
      for (int b = p; b < k; ++b) cross.push_back(pair_index(a, b));
    }
    // Disjoint copies: the symmetric group on each side acts transitively
    // on copy pairs, so one pair suffices, weighted by N(R)^2.
    const bool disjoint = shift == p;
    const std::size_t first_count = disjoint ? 1 : copies.size();
    const std::uint64_t weight = disjoint ? nr * nr : 1;

    std::unordered_map<PairMask, std::size_t> index;
    std::vector<PairMask> reps;
    std::vector<std::uint64_t> counts;
    const std::uint64_t subsets = std::uint64_t{1} << cross.size();
    for (std::size_t ci = 0; ci < first_count; ++ci) {
      const PairMask mi = embed(p, copies[ci], 0);
      for (std::size_t cj = 0; cj < first_count; ++cj) {
        const PairMask mj = embed(p, copies[cj], shift);
        if ((mi & overlap) != (mj & overlap)) continue;
        const PairMask both = mi | mj;
        for (std::uint64_t s = 0; s < subsets; ++s) {
          PairMask g = both;
          for (std::size_t t = 0; t < cross.size(); ++t) {
            if ((s >> t) & 1U) g |= PairMask{1} << cross[t];
          }
          const PairMask canon = refined_canonical_mask(k, g);
          auto [it, inserted] = index.try_emplace(canon, reps.size());
          if (inserted) {
            reps.push_back(g);
            counts.push_back(0);
          }
          counts[it->second] += weight;
        }
      }
    }
    const std::uint64_t placements = pf * pf * choose(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(p)) *
                                     choose(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(shift));
    std::vector<MergedCopyEntry> entries;
    for (std::size_t c = 0; c < reps.size(); ++c) {
      const auto form = canonical_form(k, reps[c]);
      Motif w = Motif::from_canonical_mask(k, form.mask);
      const std::uint64_t nw = factorial(k) / form.automorphisms;
      const std::uint64_t total = placements * counts[c];
      if (total % nw != 0) throw std::logic_error("merged copy coefficient is not integral");
      entries.push_back({std::move(w), total / nw, nw});
    }
    std::sort(entries.begin(), entries.end(),
              [](const MergedCopyEntry& a, const MergedCopyEntry& b) { return entry_order(a.motif, b.motif); });
    by_k.push_back(std::move(entries));
  }
  return by_k;
}

std::vector<std::vector<MergeCollisionEntry>> build_merge_collisions(const Motif& base) {
  const int q = base.vertex_count();
  std::vector<std::vector<MergeCollisionEntry>> by_j(static_cast<std::size_t>(q));
  std::vector<std::unordered_map<std::string, std::size_t>> index(static_cast<std::size_t>(q));
  std::vector<int> cell(static_cast<std::size_t>(q), 0);
  std::vector<int> max_prefix(static_cast<std::size_t>(q), 0);
  // Restricted growth strings enumerate set partitions once each.
  for (;;) {
    const int j = *std::max_element(cell.begin(), cell.end()) + 1;
    bool independent = true;
    std::vector<int> edge_pairs(static_cast<std::size_t>(j * j), 0);
    std::vector<int> all_pairs(static_cast<std::size_t>(j * j), 0);
    for (int a = 0; a < q && independent; ++a) {
      for (int b = a + 1; b < q; ++b) {
        const int ca = cell[static_cast<std::size_t>(a)];
        const int cb = cell[static_cast<std::size_t>(b)];
        const bool edge = base.has_edge(a, b);
        if (ca == cb) {
          if (edge) {
            independent = false;
            break;
          }
          continue;
        }
        const auto slot = static_cast<std::size_t>(std::min(ca, cb) * j + std::max(ca, cb));
        ++all_pairs[slot];
        if (edge) ++edge_pairs[slot];
      }
    }
    if (independent && j >= 2) {
      PairMask quotient = 0;
      bool homogeneous = true;
      for (int x = 0; x < j; ++x) {
        for (int y = x + 1; y < j; ++y) {
          const auto slot = static_cast<std::size_t>(x * j + y);
          if (edge_pairs[slot] > 0) quotient |= PairMask{1} << pair_index(x, y);
          if (edge_pairs[slot] != 0 && edge_pairs[slot] != all_pairs[slot]) homogeneous = false;
        }
      }
      const std::string key = canonical_label(j, quotient);
      auto& entries = by_j[static_cast<std::size_t>(j - 1)];
      auto [it, inserted] = index[static_cast<std::size_t>(j - 1)].try_emplace(key, entries.size());
      if (inserted) entries.push_back({Motif::from_mask(j, exhaustive_canonical_mask(j, quotient)), 0, 0});
      entries[it->second].multiplicity += 1;
      if (homogeneous) entries[it->second].exact_multiplicity += 1;
    }
    int pos = q - 1;
    while (pos > 0 && cell[static_cast<std::size_t>(pos)] == max_prefix[static_cast<std::size_t>(pos)] + 1) --pos;
    if (pos == 0) break;
    ++cell[static_cast<std::size_t>(pos)];
    for (int t = pos + 1; t < q; ++t) {
      cell[static_cast<std::size_t>(t)] = 0;
      max_prefix[static_cast<std::size_t>(t)] =
          std::max(max_prefix[static_cast<std::size_t>(t - 1)], cell[static_cast<std::size_t>(t - 1)]);
    }
  }
  for (auto& entries : by_j) {
    std::sort(entries.begin(), entries.end(),
              [](const MergeCollisionEntry& a, const MergeCollisionEntry& b) { return entry_order(a.motif, b.motif); });
  }
  return by_j;
}

template <typename Catalog, typename Build>
const Catalog& cached_catalog(const Motif& motif, Build build) {
  static std::mutex mutex;
  static std::map<std::pair<int, PairMask>, std::unique_ptr<Catalog>> cache;
  const Motif canonical = Motif::from_mask(motif.vertex_count(),
                                           exhaustive_canonical_mask(motif.vertex_count(), motif.mask()), motif.name());
  const std::pair<int, PairMask> key{canonical.vertex_count(), canonical.mask()};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Catalog>(canonical, build(canonical))).first;
  return *it->second;
}

// Sum over class assignments of the edge/non-edge product, by depth-first
// extension so that shared prefixes are multiplied once.
long double mixture_sum(const LinkProvider::Mixture& mix, int k, PairMask w, int t, std::vector<std::size_t>& cls,
                        long double prefix) {
  if (t == k) return prefix;
  long double total = 0.0L;
  for (std::size_t c = 0; c < mix.classes; ++c) {
    long double term = prefix;
    for (int s = 0; s < t && term != 0.0L; ++s) {
      const double h = mix.probs[cls[static_cast<std::size_t>(s)] * mix.classes + c];
      term *= ((w >> pair_index(s, t)) & 1U) ? h : 1.0 - h;
    }
    if (term == 0.0L) continue;
    cls[static_cast<std::size_t>(t)] = c;
    total += mixture_sum(mix, k, w, t + 1, cls, term);
  }
  return total;
}

long double mixture_probability(const LinkProvider::Mixture& mix, const Motif& w) {
  const int k = w.vertex_count();
  std::vector<std::size_t> cls(static_cast<std::size_t>(k), 0);
  const long double total = mixture_sum(mix, k, w.mask(), 0, cls, 1.0L);
  return total / std::pow(static_cast<long double>(mix.classes), k);
}

}  // namespace

MergedCopyCatalog::MergedCopyCatalog(Motif base, std::vector<std::vector<MergedCopyEntry>> by_k)
    : base_(std::move(base)), by_k_(std::move(by_k)) {}

std::span<const MergedCopyEntry> MergedCopyCatalog::entries(int k) const {
  if (k < min_k() || k > max_k()) return {};
  return by_k_[static_cast<std::size_t>(k - min_k())];
}

std::size_t MergedCopyCatalog::size() const noexcept {
  std::size_t total = 0;
  for (const auto& e : by_k_) total += e.size();
  return total;
}

const MergedCopyCatalog& merged_copy_catalog(const Motif& motif) {
  if (motif.vertex_count() > 4) {
    throw std::invalid_argument("merged copy catalogs support motifs with at most 4 vertices");
  }
  return cached_catalog<MergedCopyCatalog>(motif, build_merged_copies);
}

std::uint64_t direct_coefficient(const Motif& base, const Motif& w) {
  const int p = base.vertex_count();
  const int k = w.vertex_count();
  if (k < p || k > 2 * p) return 0;
  const auto copies = labeled_copies(base);
  std::vector<std::uint64_t> per_set(std::size_t{1} << k, 0);
  std::vector<int> tuple(static_cast<std::size_t>(p));
  // Odometer over ordered p-tuples of distinct vertices.
  std::vector<int> digits(static_cast<std::size_t>(p), 0);
  for (;;) {
    unsigned used = 0;
    bool distinct = true;
    for (int t = 0; t < p; ++t) {
      const int v = digits[static_cast<std::size_t>(t)];
      if ((used >> v) & 1U) {
        distinct = false;
        break;
      }
      used |= 1U << v;
      tuple[static_cast<std::size_t>(t)] = v;
    }
    if (distinct && std::binary_search(copies.begin(), copies.end(), induced_mask(w.mask(), tuple))) ++per_set[used];
    int pos = 0;
    while (pos < p && ++digits[static_cast<std::size_t>(pos)] == k) digits[static_cast<std::size_t>(pos++)] = 0;
    if (pos == p) break;
  }
  const unsigned full = (1U << k) - 1;
  std::uint64_t total = 0;
  for (unsigned s = 0; s <= full; ++s) {
    if (!per_set[s]) continue;
    for (unsigned t = 0; t <= full; ++t) {
      if (per_set[t] && (s | t) == full) total += per_set[s] * per_set[t];
    }
  }
  return total;
}

MergeCollisionCatalog::MergeCollisionCatalog(Motif base, std::vector<std::vector<MergeCollisionEntry>> by_j)
    : base_(std::move(base)), by_j_(std::move(by_j)) {}

std::span<const MergeCollisionEntry> MergeCollisionCatalog::entries(int j) const {
  if (j < 1 || j > base_.vertex_count()) return {};
  return by_j_[static_cast<std::size_t>(j - 1)];
}

const MergeCollisionCatalog& merge_collision_catalog(const Motif& motif) {
  if (motif.vertex_count() > 6) {
    throw std::invalid_argument("merge collision catalogs support motifs with at most 6 vertices");
  }
  if (motif.edge_count() == 0) throw std::invalid_argument("merge collision catalog needs a motif with edges");
  return cached_catalog<MergeCollisionCatalog>(motif, build_merge_collisions);
}

namespace {

nlohmann::json motif_json(const Motif& m) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : m.edges()) edges.push_back({a, b});
  return {{"vertices", m.vertex_count()}, {"edges", edges}, {"key", m.key()}, {"literal", m.literal()}};
}

}  // namespace

nlohmann::json to_json(const MergedCopyCatalog& catalog) {
  nlohmann::json entries = nlohmann::json::array();
  for (int k = catalog.min_k(); k <= catalog.max_k(); ++k) {
    for (const auto& e : catalog.entries(k)) {
      entries.push_back({{"k", k}, {"motif", motif_json(e.motif)}, {"D", e.coefficient}, {"N", e.labeled_copies}});
    }
  }
  return {{"base", motif_json(catalog.base())}, {"entries", entries}};
}

nlohmann::json to_json(const MergeCollisionCatalog& catalog) {
  nlohmann::json entries = nlohmann::json::array();
  for (int j = 1; j <= catalog.base().vertex_count(); ++j) {
    for (const auto& e : catalog.entries(j)) {
      entries.push_back({{"j", j},
                         {"motif", motif_json(e.motif)},
                         {"multiplicity", e.multiplicity},
                         {"exact_multiplicity", e.exact_multiplicity}});
    }
  }
  return {{"base", motif_json(catalog.base())}, {"entries", entries}};
}

// ---------------------------------------------------------------------------

struct LinkProvider::EmpiricalCache {
  std::mutex mutex;
  std::map<std::string, long double> raw;
};

LinkProvider LinkProvider::true_graphon(GraphonSpec spec, double rho) {
  validate_rho(spec, rho);
  LinkProvider p;
  p.kind_ = Kind::true_graphon;
  p.spec_ = std::make_shared<const GraphonSpec>(std::move(spec));
  p.rho_ = rho;
  return p;
}

LinkProvider LinkProvider::empirical(Graph graph) {
  if (graph.node_count() < 2) throw std::invalid_argument("empirical provider needs at least 2 nodes");
  LinkProvider p;
  p.kind_ = Kind::empirical;
  p.graph_ = std::make_shared<const Graph>(std::move(graph));
  p.cache_ = std::make_shared<EmpiricalCache>();
  return p;
}

LinkProvider LinkProvider::histogram(HistogramModel model) {
  LinkProvider p;
  p.kind_ = Kind::histogram;
  p.model_ = std::make_shared<const HistogramModel>(std::move(model));
  return p;
}

std::string LinkProvider::kind_name() const {
  switch (kind_) {
    case Kind::true_graphon:
      return "true-graphon";
    case Kind::empirical:
      return "empirical";
    case Kind::histogram:
      return "histogram";
  }
  return "?";
}

const GraphonSpec* LinkProvider::spec() const noexcept { return spec_.get(); }
const Graph* LinkProvider::graph() const noexcept { return graph_.get(); }
const HistogramModel* LinkProvider::model() const noexcept { return model_.get(); }

double LinkProvider::edge_density() const {
  switch (kind_) {
    case Kind::true_graphon:
      return *exact_probability(motifs::edge());
    case Kind::empirical: {
      const double n = static_cast<double>(graph_->node_count());
      return graph_->edge_density() * (n - 1.0) / n;
    }
    case Kind::histogram:
      return model_->edge_density();
  }
  return 0.0;
}

std::optional<LinkProvider::Mixture> LinkProvider::mixture() const {
  Mixture m;
  switch (kind_) {
    case Kind::true_graphon: {
      if (spec_->kind() == GraphonKind::additive) return std::nullopt;
      m.classes = spec_->cell_count();
      m.probs.resize(m.classes * m.classes);
      for (std::size_t a = 0; a < m.classes; ++a) {
        for (std::size_t b = 0; b < m.classes; ++b) m.probs[a * m.classes + b] = rho_ * spec_->cell_weight(a, b);
      }
      return m;
    }
    case Kind::empirical: {
      m.classes = graph_->node_count();
      m.probs.resize(m.classes * m.classes);
      for (std::size_t a = 0; a < m.classes; ++a) {
        for (std::size_t b = 0; b < m.classes; ++b) m.probs[a * m.classes + b] = a != b && graph_->has_edge(a, b);
      }
      return m;
    }
    case Kind::histogram:
      m.classes = model_->bin_count();
      m.probs = model_->block_probs();
      return m;
  }
  return std::nullopt;
}

std::optional<double> LinkProvider::exact_probability(const Motif& w) const {
  const auto value = exact_probability_extended(w);
  if (!value) return std::nullopt;
  return static_cast<double>(*value);
}

std::optional<long double> LinkProvider::exact_probability_extended(const Motif& w) const {
  const int k = w.vertex_count();
  switch (kind_) {
    case Kind::true_graphon:
      if (spec_->kind() == GraphonKind::additive) {
        if (k > 7) return std::nullopt;
        return true_motif_probability(*spec_, rho_, w, {ProbabilityMethod::polynomial, 0, 0}).value;
      }
      return mixture_probability(*mixture(), w);
    case Kind::histogram:
      return mixture_probability(*mixture(), w);
    case Kind::empirical:
      break;
  }
  const std::size_t n = graph_->node_count();
  if (k > 4 || w.edge_count() == 0) {
    // Small source graphs: sum over all n^k node maps directly.
    if (std::pow(static_cast<double>(n), k) <= 1e7) return mixture_probability(*mixture(), w);
    return std::nullopt;
  }
  const auto& catalog = merge_collision_catalog(w);
  long double total = 0.0L;
  for (int j = 2; j <= k; ++j) {
    if (static_cast<std::size_t>(j) > n) break;
    // n^(j) / n^k
    long double weight = 1.0L;
    for (int t = 0; t < j; ++t) weight *= static_cast<long double>(n - static_cast<std::size_t>(t)) / n;
    for (int t = j; t < k; ++t) weight /= static_cast<long double>(n);
    for (const auto& e : catalog.entries(j)) {
      if (e.exact_multiplicity == 0) continue;
      long double raw = 0.0L;
      {
        std::lock_guard lock(cache_->mutex);
        auto it = cache_->raw.find(e.motif.key());
        if (it == cache_->raw.end()) {
          const auto count = static_cast<long double>(count_induced_copies(*graph_, e.motif));
          const long double denom = static_cast<long double>(binomial(n, static_cast<std::uint64_t>(j))) *
                                    static_cast<long double>(labeled_copy_count(e.motif));
          it = cache_->raw.emplace(e.motif.key(), count / denom).first;
        }
        raw = it->second;
      }
      total += weight * static_cast<long double>(e.exact_multiplicity) * raw;
    }
  }
  return total;
}

ProbabilityEstimate LinkProvider::monte_carlo_probability(const Motif& w, std::size_t samples, Seed seed) const {
  if (samples < 2) throw std::invalid_argument("monte-carlo needs at least 2 samples");
  if (kind_ == Kind::true_graphon) {
    return true_motif_probability(*spec_, rho_, w, {ProbabilityMethod::monte_carlo, samples, seed});
  }
  const int k = w.vertex_count();
  const std::size_t n = kind_ == Kind::empirical ? graph_->node_count() : model_->node_count();
  Rng rng(derive_seed(seed, StreamTag::monte_carlo, 0));
  std::vector<NodeId> node(static_cast<std::size_t>(k));
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& v : node) v = rng.below(n);
    double term = 1.0;
    for (int a = 0; a < k && term != 0.0; ++a) {
      for (int b = a + 1; b < k; ++b) {
        const NodeId x = node[static_cast<std::size_t>(a)];
        const NodeId y = node[static_cast<std::size_t>(b)];
        const double h = kind_ == Kind::empirical ? (x != y && graph_->has_edge(x, y) ? 1.0 : 0.0) : model_->theta(x, y);
        term *= w.has_edge(a, b) ? h : 1.0 - h;
      }
    }
    const double delta = term - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (term - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

ProbabilityEstimate expected_motif_density(const LinkProvider& provider, const Motif& motif,
                                           const DensityOptions& options) {
  if (options.method == DensityMethod::monte_carlo) {
    return provider.monte_carlo_probability(motif, options.samples, options.seed);
  }
  const auto value = provider.exact_probability(motif);
  if (!value) {
    throw std::domain_error("no exact density for motif " + motif.label() + " under the " + provider.kind_name() +
                            " provider");
  }
  return {*value, 0.0};
}

namespace {

long double second_moment_extended(const LinkProvider& provider, const Motif& motif, std::size_t n) {
  const int p = motif.vertex_count();
  if (n < static_cast<std::size_t>(p)) throw std::invalid_argument("graph has fewer nodes than the motif");
  const auto& catalog = merged_copy_catalog(motif);
  long double total = 0.0L;
  for (int k = p; k <= 2 * p && static_cast<std::size_t>(k) <= n; ++k) {
    long double layer = 0.0L;
    for (const auto& e : catalog.entries(k)) {
      const auto pw = provider.exact_probability_extended(e.motif);
      if (!pw) {
        throw std::domain_error("no exact probability for merged copy " + e.motif.literal() + " under the " +
                                provider.kind_name() + " provider");
      }
      layer += static_cast<long double>(e.labeled_copies) * static_cast<long double>(e.coefficient) * *pw;
    }
    total += static_cast<long double>(binomial(n, static_cast<std::uint64_t>(k))) * layer;
  }
  const long double norm = static_cast<long double>(binomial(n, static_cast<std::uint64_t>(p))) *
                           static_cast<long double>(factorial(p)) * static_cast<long double>(labeled_copy_count(motif));
  return total / (norm * norm);
}

}  // namespace

double second_moment(const LinkProvider& provider, const Motif& motif, std::size_t n) {
  return static_cast<double>(second_moment_extended(provider, motif, n));
}

double variance_sigma2(const LinkProvider& provider, const Motif& motif, std::size_t n) {
  const long double second = second_moment_extended(provider, motif, n);
  const auto exact_mean = provider.exact_probability_extended(motif);
  if (!exact_mean) throw std::domain_error("no exact density for motif " + motif.label());
  const long double mean = *exact_mean;
  const long double rho = provider.edge_density();
  if (rho <= 0.0L) throw std::domain_error("provider has zero edge density");
  const long double scale = static_cast<long double>(n) / std::pow(rho, 2 * motif.edge_count());
  return static_cast<double>(scale * (second - mean * mean));
}

Moments brute_force_moments(const LinkProvider& provider, const Motif& motif, std::size_t n) {
  const int p = motif.vertex_count();
  if (n > 5) throw std::invalid_argument("brute-force moments enumerate graphs on at most 5 nodes");
  if (n < static_cast<std::size_t>(p)) throw std::invalid_argument("graph has fewer nodes than the motif");
  const auto mix = provider.mixture();
  if (!mix) throw std::domain_error("the " + provider.kind_name() + " provider has no finite latent mixture");
  const double assignments = std::pow(static_cast<double>(mix->classes), static_cast<double>(n));
  if (assignments > 1e5) throw std::invalid_argument("too many latent class assignments for brute force");

  const int nn = static_cast<int>(n);
  const int pairs = pair_count(nn);
  const std::size_t graphs = std::size_t{1} << pairs;
  const auto copies = labeled_copies(motif);
  // Statistic per labelled graph, from a plain scan of p-subsets.
  std::vector<std::vector<int>> subsets;
  for (unsigned s = 0; s < (1U << nn); ++s) {
    if (std::popcount(s) != p) continue;
    std::vector<int> vs;
    for (int v = 0; v < nn; ++v) {
      if ((s >> v) & 1U) vs.push_back(v);
    }
    subsets.push_back(std::move(vs));
  }
  const double norm = static_cast<double>(subsets.size()) * static_cast<double>(copies.size());
  std::vector<double> stat(graphs);
  for (std::size_t g = 0; g < graphs; ++g) {
    std::size_t count = 0;
    for (const auto& vs : subsets) {
      if (std::binary_search(copies.begin(), copies.end(), induced_mask(static_cast<PairMask>(g), vs))) ++count;
    }
    stat[g] = static_cast<double>(count) / norm;
  }

  std::vector<std::size_t> cls(n, 0);
  std::vector<long double> f1(graphs), f2(graphs);
  long double mean = 0.0L;
  long double second = 0.0L;
  for (;;) {
    for (std::size_t g = 0; g < graphs; ++g) {
      f1[g] = stat[g];
      f2[g] = static_cast<long double>(stat[g]) * stat[g];
    }
    // Fold out one pair at a time: E over an independent Bernoulli edge.
    std::size_t size = graphs;
    for (int t = pairs - 1; t >= 0; --t) {
      int a = 0;
      int b = 1;
      for (int x = 0; x < nn; ++x) {
        for (int y = x + 1; y < nn; ++y) {
          if (pair_index(x, y) == t) {
            a = x;
            b = y;
          }
        }
      }
      const long double h = mix->probs[cls[static_cast<std::size_t>(a)] * mix->classes + cls[static_cast<std::size_t>(b)]];
      size >>= 1;
      for (std::size_t g = 0; g < size; ++g) {
        f1[g] = (1.0L - h) * f1[g] + h * f1[g | size];
        f2[g] = (1.0L - h) * f2[g] + h * f2[g | size];
      }
    }
    mean += f1[0];
    second += f2[0];
    std::size_t pos = 0;
    while (pos < n && ++cls[pos] == mix->classes) cls[pos++] = 0;
    if (pos == n) break;
  }
  const long double weight = 1.0L / static_cast<long double>(assignments);
  return {static_cast<double>(mean * weight), static_cast<double>(second * weight)};
}

}  // namespace graphboot
