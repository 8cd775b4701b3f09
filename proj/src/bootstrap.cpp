#include "graphboot/bootstrap.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "graphboot/census.hpp"
#include "graphboot/parallel.hpp"
#include "graphboot/stats.hpp"

namespace graphboot {

BootstrapMethod parse_bootstrap_method(const std::string& name) {
  if (name == "empirical" || name == "empirical-graphon") return BootstrapMethod::empirical_graphon;
  if (name == "histogram") return BootstrapMethod::histogram;
  throw std::invalid_argument("unknown bootstrap method '" + name + "'");
}

std::string to_string(BootstrapMethod method) {
  return method == BootstrapMethod::histogram ? "histogram" : "empirical-graphon";
}

Graph empirical_bootstrap_replicate(const Graph& graph, std::size_t m, Seed seed) {
  const std::size_t n = graph.node_count();
  if (m < 2) throw std::invalid_argument("bootstrap graph needs at least 2 nodes");
  if (n == 0) throw std::invalid_argument("cannot resample an empty graph");
  Rng rng(seed);
  std::vector<NodeId> source(m);
  for (auto& v : source) v = rng.below(n);
  Graph out(m);
  for (NodeId i = 0; i < m; ++i) {
    for (NodeId j = i + 1; j < m; ++j) {
      if (source[i] != source[j] && graph.has_edge(source[i], source[j])) out.add_edge(i, j);
    }
  }
  return out;
}

Graph histogram_bootstrap_replicate(const HistogramModel& model, std::size_t n, Seed seed) {
  if (n < 2) throw std::invalid_argument("bootstrap graph needs at least 2 nodes");
  const std::size_t source_n = model.node_count();
  Rng rng(seed);
  std::vector<std::uint32_t> block(n);
  for (auto& b : block) {
    const double eps = rng.uniform();
    const auto node = static_cast<std::size_t>(std::ceil(static_cast<double>(source_n) * eps));
    b = model.assignment()[std::min(std::max<std::size_t>(node, 1), source_n) - 1];
  }
  Graph out(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (rng.uniform() < model.block_prob(block[i], block[j])) out.add_edge(i, j);
    }
  }
  return out;
}

const MotifBootstrap& BootstrapResult::find(const std::string& key_or_name) const {
  for (const auto& m : motifs) {
    if (m.motif.key() == key_or_name || m.motif.name() == key_or_name) return m;
  }
  throw std::out_of_range("motif '" + key_or_name + "' is not part of the bootstrap result");
}

BootstrapResult run_bootstrap(const Graph& graph, const BootstrapPlan& plan) {
  const std::size_t n = graph.node_count();
  if (plan.motifs.empty()) throw std::invalid_argument("bootstrap plan lists no motifs");
  if (plan.replicates == 0) throw std::invalid_argument("bootstrap plan needs at least one replicate");
  BootstrapResult result;
  result.method = plan.method;
  result.n = n;
  result.replicates = plan.replicates;
  result.seed = plan.seed;
  result.rho_hat = graph.edge_density();
  if (result.rho_hat <= 0.0) throw std::invalid_argument("cannot bootstrap a graph without edges");

  const std::size_t m = plan.m == 0 ? n : plan.m;
  if (plan.method == BootstrapMethod::empirical_graphon && m < n) {
    throw std::invalid_argument("empirical graphon bootstrap requires m >= n");
  }
  if (plan.method == BootstrapMethod::histogram && m != n) {
    throw std::invalid_argument("histogram bootstrap draws graphs of size n");
  }
  result.m = m;
  for (const auto& motif : plan.motifs) {
    if (static_cast<std::size_t>(motif.vertex_count()) > std::min(n, m)) {
      throw std::invalid_argument("motif " + motif.label() + " is larger than the graph");
    }
  }

  std::optional<LinkProvider> provider;
  if (plan.method == BootstrapMethod::empirical_graphon) {
    provider = LinkProvider::empirical(graph);
    for (const auto& motif : plan.motifs) {
      const double needed = std::pow(result.rho_hat, -4.0 * motif.edge_count());
      if (static_cast<double>(m) < needed) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "m = %zu is below rho_hat^-4|E| = %.4g for motif %s", m, needed,
                      motif.label().c_str());
        result.warnings.emplace_back(buf);
      }
    }
  } else {
    const std::size_t r = plan.bin_count ? *plan.bin_count : select_bin_count(n, result.rho_hat);
    SearchOptions search = plan.search;
    search.threads = plan.threads;
    result.model = fit_histogram(graph, r, search, plan.seed);
    provider = LinkProvider::histogram(*result.model);
  }
  result.rho_bar = provider->edge_density();

  const auto observed = motif_densities(graph, plan.motifs);
  for (std::size_t i = 0; i < plan.motifs.size(); ++i) {
    const Motif& motif = plan.motifs[i];
    MotifBootstrap mb{motif, observed[i].raw_density, observed[i].normalized_density, 0.0, true, 0.0, 0.0, {}, {}, {}};
    const Seed center_seed = derive_seed(plan.seed, StreamTag::monte_carlo, i);
    if (plan.center_method == DensityMethod::exact) {
      if (const auto exact = provider->exact_probability(motif)) {
        mb.center = *exact;
      } else {
        const auto est = provider->monte_carlo_probability(motif, plan.center_samples, center_seed);
        mb.center = est.value;
        mb.center_std_error = est.std_error;
        mb.center_exact = false;
        result.warnings.push_back("no exact center for motif " + motif.label() + "; used Monte Carlo");
      }
    } else {
      const auto est = provider->monte_carlo_probability(motif, plan.center_samples, center_seed);
      mb.center = est.value;
      mb.center_std_error = est.std_error;
      mb.center_exact = false;
    }
    mb.scale = std::sqrt(static_cast<double>(m)) / std::pow(result.rho_bar, motif.edge_count());
    mb.raw.assign(plan.replicates, 0.0);
    result.motifs.push_back(std::move(mb));
  }

  parallel_for(plan.replicates, plan.threads, [&](std::size_t k) {
    const Seed seed = derive_seed(plan.seed, StreamTag::bootstrap_replicate, k);
    const Graph g = plan.method == BootstrapMethod::empirical_graphon
                        ? empirical_bootstrap_replicate(graph, m, seed)
                        : histogram_bootstrap_replicate(*result.model, n, seed);
    const auto reports = motif_densities(g, plan.motifs);
    for (std::size_t i = 0; i < reports.size(); ++i) result.motifs[i].raw[k] = reports[i].raw_density;
  });

  const double root_n = std::sqrt(static_cast<double>(n));
  for (auto& mb : result.motifs) {
    mb.scaled.resize(mb.raw.size());
    for (std::size_t k = 0; k < mb.raw.size(); ++k) mb.scaled[k] = mb.scale * (mb.raw[k] - mb.center);
    if (mb.scaled.size() < 10) continue;
    const double data_scale = std::pow(result.rho_hat, mb.motif.edge_count());
    for (double level : plan.levels) {
      const auto [lo, hi] = percentile_interval(mb.scaled, level);
      BootstrapInterval iv;
      iv.level = level;
      iv.scaled_lo = lo;
      iv.scaled_hi = hi;
      iv.lo = mb.observed - hi * data_scale / root_n;
      iv.hi = mb.observed - lo * data_scale / root_n;
      iv.normalized_lo = iv.lo / data_scale;
      iv.normalized_hi = iv.hi / data_scale;
      mb.intervals.push_back(iv);
    }
  }
  if (plan.replicates < 10) result.warnings.emplace_back("fewer than 10 replicates; no intervals computed");
  return result;
}

ProbabilityEstimate true_probability(const GraphonSpec& spec, double rho, const Motif& motif, Seed seed) {
  const ProbabilityMethod method = exact_method_for(spec);
  if (method == ProbabilityMethod::polynomial && motif.vertex_count() > 7) {
    return true_motif_probability(spec, rho, motif, {ProbabilityMethod::monte_carlo, 4'000'000, seed});
  }
  return true_motif_probability(spec, rho, motif, {method, 0, seed});
}

std::vector<std::vector<double>> sampling_distribution_truth(const GraphonSpec& spec,
                                                             const SparsitySchedule& schedule, std::size_t n,
                                                             const std::vector<Motif>& motifs, std::size_t count,
                                                             Seed seed, int threads) {
  const double rho = schedule.rho(n);
  std::vector<double> truth;
  for (std::size_t i = 0; i < motifs.size(); ++i) {
    const auto est = true_probability(spec, rho, motifs[i], derive_seed(seed, StreamTag::monte_carlo, i));
    if (est.std_error > 1e-4) throw std::runtime_error("true motif probability is not accurate enough");
    truth.push_back(est.value);
  }
  std::vector<std::vector<double>> out(motifs.size(), std::vector<double>(count, 0.0));
  const double root_n = std::sqrt(static_cast<double>(n));
  parallel_for(count, threads, [&](std::size_t i) {
    const auto sample = sample_graph(spec, schedule, n, derive_seed(seed, StreamTag::truth_sample, i));
    const auto reports = motif_densities(sample.graph, motifs);
    const double rho_hat = sample.graph.edge_density();
    if (rho_hat <= 0.0) throw std::runtime_error("sampled graph has no edges");
    for (std::size_t j = 0; j < motifs.size(); ++j) {
      out[j][i] = root_n / std::pow(rho_hat, motifs[j].edge_count()) * (reports[j].raw_density - truth[j]);
    }
  });
  return out;
}

nlohmann::json to_json(const BootstrapResult& result) {
  nlohmann::json motifs = nlohmann::json::array();
  for (const auto& mb : result.motifs) {
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& iv : mb.intervals) {
      intervals.push_back({{"level", iv.level},
                           {"scaled", {iv.scaled_lo, iv.scaled_hi}},
                           {"probability", {iv.lo, iv.hi}},
                           {"normalized", {iv.normalized_lo, iv.normalized_hi}}});
    }
    nlohmann::json entry = {{"motif", mb.motif.label()},
                            {"key", mb.motif.key()},
                            {"literal", mb.motif.literal()},
                            {"observed", mb.observed},
                            {"center", mb.center},
                            {"center_exact", mb.center_exact},
                            {"center_std_error", mb.center_std_error},
                            {"scale", mb.scale},
                            {"intervals", intervals}};
    entry["observed_normalized"] = mb.observed_normalized ? nlohmann::json(*mb.observed_normalized) : nlohmann::json();
    if (mb.scaled.size() >= 2) {
      entry["scaled_mean"] = mean(mb.scaled);
      entry["scaled_sd"] = stddev(mb.scaled);
    }
    motifs.push_back(std::move(entry));
  }
  nlohmann::json out = {{"method", to_string(result.method)},
                        {"n", result.n},
                        {"m", result.m},
                        {"replicates", result.replicates},
                        {"seed", result.seed},
                        {"rho_hat", result.rho_hat},
                        {"rho_bar", result.rho_bar},
                        {"motifs", motifs},
                        {"warnings", result.warnings}};
  if (result.model) {
    const auto& model = *result.model;
    std::vector<std::uint32_t> labels(model.assignment());
    for (auto& z : labels) ++z;
    out["histogram"] = {{"bin_count", model.bin_count()},
                        {"loss", model.loss()},
                        {"block_probs", model.block_probs()},
                        {"assignment", labels}};
  }
  return out;
}

void write_replicates_csv(const BootstrapResult& result, std::ostream& out) {
  out << "motif_key,replicate_index,raw,scaled\n";
  char buf[96];
  for (const auto& mb : result.motifs) {
    for (std::size_t k = 0; k < mb.raw.size(); ++k) {
      std::snprintf(buf, sizeof buf, ",%zu,%.17g,%.17g\n", k, mb.raw[k], mb.scaled[k]);
      out << mb.motif.key() << buf;
    }
  }
}

}  // namespace graphboot
