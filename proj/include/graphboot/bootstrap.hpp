#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphboot/combinatorics.hpp"
#include "graphboot/graph.hpp"
#include "graphboot/graphon.hpp"
#include "graphboot/histogram.hpp"
#include "graphboot/motif.hpp"
#include "graphboot/rng.hpp"

namespace graphboot {

enum class BootstrapMethod { empirical_graphon, histogram };

BootstrapMethod parse_bootstrap_method(const std::string& name);
std::string to_string(BootstrapMethod method);

/// Resamples m nodes of `graph` with replacement; bootstrap nodes i != j
/// are adjacent iff their source nodes are distinct and adjacent.
Graph empirical_bootstrap_replicate(const Graph& graph, std::size_t m, Seed seed);

/// Draws eps*_1..eps*_n uniform and each pair i < j independently with
/// probability Q[z(ceil(n eps*_i))][z(ceil(n eps*_j))].
Graph histogram_bootstrap_replicate(const HistogramModel& model, std::size_t n, Seed seed);

struct BootstrapPlan {
  BootstrapMethod method = BootstrapMethod::empirical_graphon;
  std::vector<Motif> motifs;
  std::size_t replicates = 2000;
  /// Bootstrap graph size; 0 means n. The histogram method requires m = n.
  std::size_t m = 0;
  DensityMethod center_method = DensityMethod::exact;
  std::size_t center_samples = 1'000'000;
  std::vector<double> levels{0.9};
  Seed seed = 0;
  int threads = 1;
  /// Histogram bin count; empty selects it from the observed edge density.
  std::optional<std::size_t> bin_count;
  SearchOptions search;
};

struct BootstrapInterval {
  double level = 0.0;
  /// Percentile interval of the scaled replicates.
  double scaled_lo = 0.0;
  double scaled_hi = 0.0;
  /// Implied interval for P_R(h): P_R(G) - [hi, lo] rho_hat^|E| / sqrt(n).
  double lo = 0.0;
  double hi = 0.0;
  /// The same interval divided by rho_hat^|E|.
  double normalized_lo = 0.0;
  double normalized_hi = 0.0;
};

struct MotifBootstrap {
  Motif motif;
  double observed = 0.0;
  std::optional<double> observed_normalized;
  /// P_R(h_hat).
  double center = 0.0;
  bool center_exact = true;
  double center_std_error = 0.0;
  /// sqrt(m) / rho_bar^|E|.
  double scale = 0.0;
  std::vector<double> raw;
  std::vector<double> scaled;
  std::vector<BootstrapInterval> intervals;
};

struct BootstrapResult {
  BootstrapMethod method = BootstrapMethod::empirical_graphon;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t replicates = 0;
  Seed seed = 0;
  double rho_hat = 0.0;
  /// P_K2(h_hat).
  double rho_bar = 0.0;
  std::optional<HistogramModel> model;
  std::vector<MotifBootstrap> motifs;
  std::vector<std::string> warnings;

  const MotifBootstrap& find(const std::string& key_or_name) const;
};

/// Fits the estimator, computes centers and rho_bar, and draws the
/// replicates. Replicate k uses derive_seed(plan.seed, bootstrap_replicate,
/// k), so results do not depend on plan.threads.
BootstrapResult run_bootstrap(const Graph& graph, const BootstrapPlan& plan);

/// M statistics sqrt(n) / rho_hat^|E| (P_R(G) - P_R(h)) over independent
/// graphs; graph i uses derive_seed(seed, truth_sample, i). One vector per
/// motif. P_R(h) is exact where the graphon allows it, else Monte Carlo
/// with standard error at most 1e-4.
std::vector<std::vector<double>> sampling_distribution_truth(const GraphonSpec& spec,
                                                             const SparsitySchedule& schedule, std::size_t n,
                                                             const std::vector<Motif>& motifs, std::size_t count,
                                                             Seed seed, int threads = 1);

/// P_R(h) with the exact method when the kind has one.
ProbabilityEstimate true_probability(const GraphonSpec& spec, double rho, const Motif& motif, Seed seed = 0);

nlohmann::json to_json(const BootstrapResult& result);
/// Columns motif_key, replicate_index, raw, scaled.
void write_replicates_csv(const BootstrapResult& result, std::ostream& out);

}  // namespace graphboot
