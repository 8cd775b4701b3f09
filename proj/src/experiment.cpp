#include "graphboot/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "graphboot/census.hpp"
#include "graphboot/combinatorics.hpp"
#include "graphboot/io.hpp"
#include "graphboot/parallel.hpp"
#include "graphboot/stats.hpp"

#ifndef GRAPHBOOT_VERSION
#define GRAPHBOOT_VERSION "unknown"
#endif

namespace graphboot {

namespace pt = boost::property_tree;

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

const std::map<std::string, ExperimentKind>& kind_names() {
  static const std::map<std::string, ExperimentKind> names = {
      {"bootstrap", ExperimentKind::bootstrap},
      {"validate-theorem1", ExperimentKind::validate_theorem1},
      {"validate-theorem2", ExperimentKind::validate_theorem2},
      {"coverage", ExperimentKind::coverage},
      {"clt-check", ExperimentKind::clt_check},
      {"oracle", ExperimentKind::oracle},
      {"histogram-error", ExperimentKind::histogram_error},
  };
  return names;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  double x = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(x)) {
    throw ConfigError(field, "expected a number, got '" + text + "'");
  }
  return x;
}

std::uint64_t parse_uint(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t x = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError(field, "expected a nonnegative integer, got '" + text + "'");
  }
  return x;
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& field, const std::string& text, F&& one) {
  std::vector<T> out;
  for (const auto& item : split(text, ',')) out.push_back(one(field, item));
  if (out.empty()) throw ConfigError(field, "expected a nonempty list");
  return out;
}

struct Sections {
  const pt::ptree& tree;

  const pt::ptree* section(const std::string& name) const {
    const auto it = tree.find(name);
    return it == tree.not_found() ? nullptr : &it->second;
  }
  std::optional<std::string> get(const std::string& sec, const std::string& key) const {
    const pt::ptree* s = section(sec);
    if (!s) return std::nullopt;
    const auto it = s->find(key);
    if (it == s->not_found()) return std::nullopt;
    return trim(it->second.data());
  }
};

void check_keys(const pt::ptree& tree) {
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"experiment", {"kind", "seeds", "threads", "output"}},
      {"graphon", {"kind", "matrix"}},
      {"sparsity", {"kind", "c", "alpha"}},
      {"grid", {"n"}},
      {"data", {"graph"}},
      {"bootstrap",
       {"method", "replicates", "m", "truth_samples", "levels", "center", "center_samples", "bin_count"}},
      {"search", {"restarts", "max_sweeps"}},
      {"coverage", {"simulations"}},
      {"histogram", {"fits"}},
      {"oracle", {"rhos"}},
  };
  for (const auto& [name, sec] : tree) {
    if (name == "motifs") continue;
    const auto it = allowed.find(name);
    if (it == allowed.end()) throw ConfigError(name, "unknown section");
    if (!sec.data().empty() && sec.empty()) throw ConfigError(name, "expected a section");
    for (const auto& [key, value] : sec) {
      if (!it->second.count(key)) throw ConfigError(name + "." + key, "unknown key");
    }
  }
}

std::vector<std::vector<double>> parse_matrix(const std::string& field, const std::string& text) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : split(text, ';')) {
    std::vector<double> values;
    std::istringstream in(row);
    std::string item;
    while (in >> item) values.push_back(parse_double(field, item));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ConfigError(field, "expected rows separated by ';'");
  return rows;
}

std::string motif_label(const Motif& m) { return m.label(); }

// ---------------------------------------------------------------------------

struct CellOut {
  std::vector<MetricRow> rows;
  std::vector<std::string> warnings;
  std::vector<NamedReplicates> replicates;
  nlohmann::json detail;
};

template <typename Body>
std::vector<CellOut> run_cells(std::size_t count, int threads, Body&& body) {
  std::vector<CellOut> out(count);
  parallel_for(count, threads, [&](std::size_t i) { body(i, out[i]); });
  return out;
}

int inner_threads(int threads, std::size_t cells) {
  if (cells == 0) return threads;
  return std::max(1, threads / static_cast<int>(std::min<std::size_t>(cells, 1 << 20)));
}

void merge(ExperimentReport& report, std::vector<CellOut>& cells, nlohmann::json& detail_list) {
  for (auto& c : cells) {
    for (auto& r : c.rows) report.rows.push_back(std::move(r));
    for (auto& w : c.warnings) report.warnings.push_back(std::move(w));
    for (auto& r : c.replicates) report.replicates.push_back(std::move(r));
    if (!c.detail.is_null()) detail_list.push_back(std::move(c.detail));
  }
}

MetricRow row(const std::string& experiment, std::size_t n, const std::string& motif, const std::string& seed,
              const std::string& metric, double value) {
  return {experiment, n, motif, seed, metric, value, "ok"};
}

MetricRow skipped(const std::string& experiment, std::size_t n, const std::string& motif, const std::string& seed,
                  const std::string& metric) {
  return {experiment, n, motif, seed, metric, nan_value, "skipped"};
}

Seed cell_seed(Seed master, std::size_t n) { return derive_seed(master, StreamTag::experiment_cell, n); }

Graph data_graph(const ExperimentConfig& config, const GraphonSpec& spec, std::size_t n, Seed master) {
  return sample_graph(spec, config.schedule, n, derive_seed(master, StreamTag::data_graph, n)).graph;
}

BootstrapPlan make_plan(const ExperimentConfig& config, BootstrapMethod method, Seed seed, int threads) {
  BootstrapPlan plan;
  plan.method = method;
  plan.motifs = config.motifs;
  plan.replicates = config.replicates;
  plan.m = method == BootstrapMethod::histogram ? 0 : config.m;
  plan.center_method = config.center;
  plan.center_samples = config.center_samples;
  plan.levels = config.levels;
  plan.seed = seed;
  plan.threads = threads;
  plan.bin_count = config.bin_count;
  plan.search = config.search;
  return plan;
}

std::string replicate_file(BootstrapMethod method, std::size_t n, Seed seed) {
  return "replicates-" + to_string(method) + "-n" + std::to_string(n) + "-seed" + std::to_string(seed) + ".csv";
}

void bootstrap_rows(const std::string& exp, const BootstrapResult& result, const std::string& seed_label,
                    std::vector<MetricRow>& rows) {
  const std::size_t n = result.n;
  rows.push_back(row(exp, n, "-", seed_label, "rho_hat", result.rho_hat));
  rows.push_back(row(exp, n, "-", seed_label, "rho_bar", result.rho_bar));
  if (result.model) {
    rows.push_back(row(exp, n, "-", seed_label, "bin_count", static_cast<double>(result.model->bin_count())));
  }
  for (const auto& mb : result.motifs) {
    const std::string label = motif_label(mb.motif);
    rows.push_back(row(exp, n, label, seed_label, "observed", mb.observed));
    if (mb.observed_normalized) {
      rows.push_back(row(exp, n, label, seed_label, "observed_normalized", *mb.observed_normalized));
    }
    rows.push_back(row(exp, n, label, seed_label, "center", mb.center));
    rows.push_back(row(exp, n, label, seed_label, "center_std_error", mb.center_std_error));
    if (mb.scaled.size() >= 2) {
      rows.push_back(row(exp, n, label, seed_label, "scaled_mean", mean(mb.scaled)));
      rows.push_back(row(exp, n, label, seed_label, "scaled_sd", stddev(mb.scaled)));
    }
    for (const auto& iv : mb.intervals) {
      const std::string tag = "_" + num(iv.level);
      rows.push_back(row(exp, n, label, seed_label, "scaled_lo" + tag, iv.scaled_lo));
      rows.push_back(row(exp, n, label, seed_label, "scaled_hi" + tag, iv.scaled_hi));
      rows.push_back(row(exp, n, label, seed_label, "lo" + tag, iv.lo));
      rows.push_back(row(exp, n, label, seed_label, "hi" + tag, iv.hi));
      rows.push_back(row(exp, n, label, seed_label, "normalized_lo" + tag, iv.normalized_lo));
      rows.push_back(row(exp, n, label, seed_label, "normalized_hi" + tag, iv.normalized_hi));
    }
  }
}

// median of the ok rows matching (experiment, n, motif, metric) over seeds
void add_median_summaries(ExperimentReport& report, const std::string& exp, const std::string& metric,
                          const std::string& summary_metric) {
  std::vector<std::pair<std::size_t, std::string>> keys;
  std::map<std::pair<std::size_t, std::string>, std::vector<double>> values;
  for (const auto& r : report.rows) {
    if (r.experiment != exp || r.metric != metric || r.seed == "all") continue;
    const auto key = std::make_pair(r.n, r.motif);
    if (!values.count(key)) keys.push_back(key);
    auto& v = values[key];
    if (r.status == "ok") v.push_back(r.value);
  }
  for (const auto& key : keys) {
    const auto& v = values[key];
    if (v.empty()) {
      report.rows.push_back(skipped(exp, key.first, key.second, "all", summary_metric));
    } else {
      report.rows.push_back(row(exp, key.first, key.second, "all", summary_metric, median(v)));
    }
  }
}

std::string cell_error(const std::string& exp, std::size_t n, Seed seed, const std::exception& e) {
  return exp + " n=" + std::to_string(n) + " seed=" + std::to_string(seed) + " skipped: " + e.what();
}

// ---------------------------------------------------------------------------

void run_bootstrap_kind(const ExperimentConfig& config, ExperimentReport& report) {
  const GraphonSpec spec = config.spec();
  std::optional<Graph> given;
  if (config.graph_path) given = load_graph(*config.graph_path);
  const std::vector<std::size_t> grid = given ? std::vector<std::size_t>{given->node_count()} : config.n_grid;

  struct Cell {
    std::size_t n;
    Seed seed;
    BootstrapMethod method;
  };
  std::vector<Cell> cells;
  for (const auto method : config.methods) {
    for (const auto n : grid) {
      for (const auto seed : config.seeds) cells.push_back({n, seed, method});
    }
  }
  const int threads = inner_threads(config.threads, cells.size());
  auto out = run_cells(cells.size(), config.threads, [&](std::size_t i, CellOut& cell) {
    const auto& c = cells[i];
    const std::string exp = "bootstrap:" + to_string(c.method);
    const std::string seed_label = std::to_string(c.seed);
    try {
      const Graph graph = given ? *given : data_graph(config, spec, c.n, c.seed);
      BootstrapResult result = run_bootstrap(graph, make_plan(config, c.method, cell_seed(c.seed, c.n), threads));
      bootstrap_rows(exp, result, seed_label, cell.rows);
      for (const auto& w : result.warnings) cell.warnings.push_back(exp + " n=" + std::to_string(c.n) + ": " + w);
      cell.detail = to_json(result);
      cell.detail["master_seed"] = c.seed;
      cell.replicates.push_back({replicate_file(c.method, c.n, c.seed), std::move(result)});
    } catch (const std::exception& e) {
      cell.warnings.push_back(cell_error(exp, c.n, c.seed, e));
      for (const auto& m : config.motifs) cell.rows.push_back(skipped(exp, c.n, motif_label(m), seed_label, "observed"));
    }
  });
  nlohmann::json list = nlohmann::json::array();
  merge(report, out, list);
  report.details["bootstraps"] = std::move(list);
}

void run_validate_kind(const ExperimentConfig& config, ExperimentReport& report, BootstrapMethod method) {
  const GraphonSpec spec = config.spec();
  const std::string exp = to_string(config.kind);
  struct Cell {
    std::size_t n;
    Seed seed;
  };
  std::vector<Cell> cells;
  for (const auto n : config.n_grid) {
    for (const auto seed : config.seeds) cells.push_back({n, seed});
  }
  const int threads = inner_threads(config.threads, cells.size());
  auto out = run_cells(cells.size(), config.threads, [&](std::size_t i, CellOut& cell) {
    const auto& c = cells[i];
    const std::string seed_label = std::to_string(c.seed);
    try {
      const Graph graph = data_graph(config, spec, c.n, c.seed);
      BootstrapResult result = run_bootstrap(graph, make_plan(config, method, cell_seed(c.seed, c.n), threads));
      const auto truth = sampling_distribution_truth(spec, config.schedule, c.n, config.motifs, config.truth_samples,
                                                     derive_seed(c.seed, StreamTag::truth_sample, c.n), threads);
      cell.rows.push_back(row(exp, c.n, "-", seed_label, "rho_hat", result.rho_hat));
      if (result.model) {
        cell.rows.push_back(row(exp, c.n, "-", seed_label, "bin_count", static_cast<double>(result.model->bin_count())));
      }
      for (std::size_t j = 0; j < result.motifs.size(); ++j) {
        const auto& mb = result.motifs[j];
        const std::string label = motif_label(mb.motif);
        cell.rows.push_back(row(exp, c.n, label, seed_label, "ks", ks_two_sample(mb.scaled, truth[j])));
        cell.rows.push_back(row(exp, c.n, label, seed_label, "center", mb.center));
        if (mb.scaled.size() >= 2 && truth[j].size() >= 2) {
          cell.rows.push_back(row(exp, c.n, label, seed_label, "bootstrap_mean", mean(mb.scaled)));
          cell.rows.push_back(row(exp, c.n, label, seed_label, "bootstrap_sd", stddev(mb.scaled)));
          cell.rows.push_back(row(exp, c.n, label, seed_label, "truth_mean", mean(truth[j])));
          cell.rows.push_back(row(exp, c.n, label, seed_label, "truth_sd", stddev(truth[j])));
        }
      }
      for (const auto& w : result.warnings) cell.warnings.push_back(exp + " n=" + std::to_string(c.n) + ": " + w);
      cell.detail = {{"n", c.n}, {"master_seed", c.seed}, {"bootstrap", to_json(result)}};
      cell.replicates.push_back({replicate_file(method, c.n, c.seed), std::move(result)});
    } catch (const std::exception& e) {
      cell.warnings.push_back(cell_error(exp, c.n, c.seed, e));
      for (const auto& m : config.motifs) cell.rows.push_back(skipped(exp, c.n, motif_label(m), seed_label, "ks"));
    }
  });
  nlohmann::json list = nlohmann::json::array();
  merge(report, out, list);
  report.details["cells"] = std::move(list);
  add_median_summaries(report, exp, "ks", "median_ks");
}

void run_clt_kind(const ExperimentConfig& config, ExperimentReport& report) {
  const GraphonSpec spec = config.spec();
  const std::string exp = "clt-check";
  struct Cell {
    std::size_t n;
    Seed seed;
  };
  std::vector<Cell> cells;
  for (const auto n : config.n_grid) {
    for (const auto seed : config.seeds) cells.push_back({n, seed});
  }
  const int threads = inner_threads(config.threads, cells.size());
  auto out = run_cells(cells.size(), config.threads, [&](std::size_t i, CellOut& cell) {
    const auto& c = cells[i];
    const std::string seed_label = std::to_string(c.seed);
    try {
      const auto truth = sampling_distribution_truth(spec, config.schedule, c.n, config.motifs, config.truth_samples,
                                                     derive_seed(c.seed, StreamTag::truth_sample, c.n), threads);
      for (std::size_t j = 0; j < config.motifs.size(); ++j) {
        const std::string label = motif_label(config.motifs[j]);
        const double mu = mean(truth[j]);
        const double sd = stddev(truth[j]);
        cell.rows.push_back(row(exp, c.n, label, seed_label, "ks_normal", ks_normal(truth[j], mu, sd)));
        cell.rows.push_back(row(exp, c.n, label, seed_label, "mean", mu));
        cell.rows.push_back(row(exp, c.n, label, seed_label, "sd", sd));
      }
    } catch (const std::exception& e) {
      cell.warnings.push_back(cell_error(exp, c.n, c.seed, e));
      for (const auto& m : config.motifs) {
        cell.rows.push_back(skipped(exp, c.n, motif_label(m), seed_label, "ks_normal"));
      }
    }
  });
  nlohmann::json list = nlohmann::json::array();
  merge(report, out, list);
  add_median_summaries(report, exp, "ks_normal", "median_ks_normal");

  const auto provider_rho = [&](std::size_t n) { return config.schedule.rho(n); };
  for (const auto n : config.n_grid) {
    const auto provider = LinkProvider::true_graphon(spec, provider_rho(n));
    for (const auto& m : config.motifs) {
      try {
        report.rows.push_back(row(exp, n, motif_label(m), "all", "sigma_analytic",
                                  std::sqrt(variance_sigma2(provider, m, n))));
      } catch (const std::exception& e) {
        report.warnings.push_back("clt-check sigma_analytic n=" + std::to_string(n) + " " + motif_label(m) +
                                  " skipped: " + e.what());
        report.rows.push_back(skipped(exp, n, motif_label(m), "all", "sigma_analytic"));
      }
    }
  }
}

void run_coverage_kind(const ExperimentConfig& config, ExperimentReport& report) {
  const GraphonSpec spec = config.spec();
  std::map<std::size_t, std::vector<double>> targets;
  for (const auto n : config.n_grid) {
    for (std::size_t j = 0; j < config.motifs.size(); ++j) {
      const auto est = true_probability(spec, config.schedule.rho(n), config.motifs[j],
                                        derive_seed(0, StreamTag::monte_carlo, j));
      targets[n].push_back(est.value);
      report.rows.push_back(row("coverage", n, motif_label(config.motifs[j]), "all", "true_probability", est.value));
    }
  }
  struct Cell {
    BootstrapMethod method;
    std::size_t n;
    Seed seed;
    std::size_t sim;
  };
  std::vector<Cell> cells;
  for (const auto method : config.methods) {
    for (const auto n : config.n_grid) {
      for (const auto seed : config.seeds) {
        for (std::size_t s = 0; s < config.simulations; ++s) cells.push_back({method, n, seed, s});
      }
    }
  }
  const int threads = inner_threads(config.threads, cells.size());
  auto out = run_cells(cells.size(), config.threads, [&](std::size_t i, CellOut& cell) {
    const auto& c = cells[i];
    const std::string exp = "coverage:" + to_string(c.method);
    const std::string seed_label = std::to_string(c.seed) + "/" + std::to_string(c.sim);
    const Seed base = cell_seed(c.seed, c.n);
    try {
      const Graph graph =
          sample_graph(spec, config.schedule, c.n, derive_seed(base, StreamTag::data_graph, c.sim)).graph;
      const auto result =
          run_bootstrap(graph, make_plan(config, c.method, derive_seed(base, StreamTag::bootstrap_replicate, c.sim),
                                         threads));
      for (std::size_t j = 0; j < result.motifs.size(); ++j) {
        const auto& mb = result.motifs[j];
        const double target = targets.at(c.n)[j];
        for (const auto& iv : mb.intervals) {
          const std::string tag = "_" + num(iv.level);
          cell.rows.push_back(row(exp, c.n, motif_label(mb.motif), seed_label, "covered" + tag,
                                  iv.lo <= target && target <= iv.hi ? 1.0 : 0.0));
          cell.rows.push_back(row(exp, c.n, motif_label(mb.motif), seed_label, "normalized_width" + tag,
                                  iv.normalized_hi - iv.normalized_lo));
        }
      }
    } catch (const std::exception& e) {
      cell.warnings.push_back(cell_error(exp, c.n, c.seed, e) + " (simulation " + std::to_string(c.sim) + ")");
      for (const auto& m : config.motifs) {
        for (double level : config.levels) {
          cell.rows.push_back(skipped(exp, c.n, motif_label(m), seed_label, "covered_" + num(level)));
        }
      }
    }
  });
  nlohmann::json list = nlohmann::json::array();
  merge(report, out, list);

  for (const auto method : config.methods) {
    const std::string exp = "coverage:" + to_string(method);
    for (const auto n : config.n_grid) {
      for (const auto& m : config.motifs) {
        for (double level : config.levels) {
          const std::string metric = "covered_" + num(level);
          double hits = 0.0;
          std::size_t total = 0;
          for (const auto& r : report.rows) {
            if (r.experiment == exp && r.n == n && r.motif == motif_label(m) && r.metric == metric &&
                r.status == "ok") {
              hits += r.value;
              ++total;
            }
          }
          if (total == 0) {
            report.rows.push_back(skipped(exp, n, motif_label(m), "all", "coverage_" + num(level)));
          } else {
            report.rows.push_back(
                row(exp, n, motif_label(m), "all", "coverage_" + num(level), hits / static_cast<double>(total)));
          }
          report.rows.push_back(row(exp, n, motif_label(m), "all", "simulations", static_cast<double>(total)));
        }
      }
    }
  }
}

void run_histogram_error_kind(const ExperimentConfig& config, ExperimentReport& report) {
  const GraphonSpec spec = config.spec();
  const std::string exp = "histogram-error";
  struct Cell {
    std::size_t n;
    Seed seed;
    std::size_t fit;
  };
  std::vector<Cell> cells;
  for (const auto n : config.n_grid) {
    for (const auto seed : config.seeds) {
      for (std::size_t f = 0; f < config.fits; ++f) cells.push_back({n, seed, f});
    }
  }
  const int threads = inner_threads(config.threads, cells.size());
  auto out = run_cells(cells.size(), config.threads, [&](std::size_t i, CellOut& cell) {
    const auto& c = cells[i];
    const std::string seed_label = std::to_string(c.seed) + "/" + std::to_string(c.fit);
    const Seed base = cell_seed(c.seed, c.n);
    try {
      const double rho = config.schedule.rho(c.n);
      const auto sample = sample_graph(spec, config.schedule, c.n, derive_seed(base, StreamTag::data_graph, c.fit));
      const std::size_t r =
          config.bin_count ? *config.bin_count : select_bin_count(c.n, sample.graph.edge_density());
      SearchOptions search = config.search;
      search.threads = threads;
      const auto model =
          fit_histogram(sample.graph, r, search, derive_seed(base, StreamTag::histogram_restart, c.fit));
      const auto err = estimator_error(model, spec, rho, sample.latent);
      cell.rows.push_back(row(exp, c.n, "-", seed_label, "bin_count", static_cast<double>(r)));
      cell.rows.push_back(row(exp, c.n, "-", seed_label, "mse", err.mse));
      cell.rows.push_back(row(exp, c.n, "-", seed_label, "max_dev", err.max_dev));
      cell.rows.push_back(row(exp, c.n, "-", seed_label, "max_dev_over_rho", err.max_dev / rho));
    } catch (const std::exception& e) {
      cell.warnings.push_back(cell_error(exp, c.n, c.seed, e) + " (fit " + std::to_string(c.fit) + ")");
      cell.rows.push_back(skipped(exp, c.n, "-", seed_label, "mse"));
      cell.rows.push_back(skipped(exp, c.n, "-", seed_label, "max_dev_over_rho"));
    }
  });
  nlohmann::json list = nlohmann::json::array();
  merge(report, out, list);
  add_median_summaries(report, exp, "mse", "median_mse");
  add_median_summaries(report, exp, "max_dev_over_rho", "median_max_dev_over_rho");
  if (config.n_grid.size() > 1) {
    const std::size_t first = config.n_grid.front();
    const auto& base = report.find("median_mse", first, "-");
    for (std::size_t k = 1; k < config.n_grid.size(); ++k) {
      const auto& cur = report.find("median_mse", config.n_grid[k], "-");
      const std::string metric = "median_mse_ratio_to_n" + std::to_string(first);
      if (base.status == "ok" && cur.status == "ok" && base.value > 0.0) {
        report.rows.push_back(row(exp, config.n_grid[k], "-", "all", metric, cur.value / base.value));
      } else {
        report.rows.push_back(skipped(exp, config.n_grid[k], "-", "all", metric));
      }
    }
  }
}

// Permutation-count automorphisms, independent of the motif module's search.
std::uint64_t brute_automorphisms(const Motif& m) {
  const int p = m.vertex_count();
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (int a = 0; a < p && ok; ++a) {
      for (int b = a + 1; b < p && ok; ++b) ok = m.has_edge(a, b) == m.has_edge(perm[a], perm[b]);
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

double fixture_mismatches() {
  double bad = 0.0;
  const auto& k2 = merged_copy_catalog(motifs::edge());
  const auto expect_d = [&](int k, const Motif& w, std::uint64_t d) {
    for (const auto& e : k2.entries(k)) {
      if (e.motif.key() == w.key()) {
        if (e.coefficient != d) bad += 1.0;
        return;
      }
    }
    bad += 1.0;
  };
  expect_d(2, motifs::edge(), 4);
  expect_d(3, motifs::two_star(), 8);
  expect_d(3, motifs::triangle(), 24);
  expect_d(4, Motif(4, {{0, 1}, {2, 3}}), 8);
  if (k2.entries(3).size() != 2) bad += 1.0;

  const auto& path3 = merge_collision_catalog(motifs::two_star());
  const auto j2 = path3.entries(2);
  const auto j3 = path3.entries(3);
  if (j2.size() != 1 || j2[0].motif.key() != motifs::edge().key() || j2[0].multiplicity != 1) bad += 1.0;
  if (j3.size() != 1 || j3[0].motif.key() != motifs::two_star().key() || j3[0].multiplicity != 1) bad += 1.0;
  if (!path3.entries(1).empty()) bad += 1.0;
  return bad;
}

double labeled_copy_mismatches() {
  double bad = 0.0;
  for (int p = 2; p <= 5; ++p) {
    const PairMask full = p * (p - 1) / 2;
    std::set<std::string> seen;
    for (PairMask mask = 0; mask < (PairMask{1} << full); ++mask) {
      const Motif m = Motif::from_mask(p, mask);
      if (!m.connected() || !seen.insert(m.key()).second) continue;
      if (labeled_copy_count(m) * brute_automorphisms(m) != factorial(p)) bad += 1.0;
    }
  }
  return bad;
}

Graph oracle_toy_graph() {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {0, 2}};
  return Graph::from_edges(4, edges);
}

void run_oracle_kind(const ExperimentConfig& config, ExperimentReport& report) {
  const std::string exp = "oracle";
  const std::string seed_label = std::to_string(config.seeds.front());
  std::vector<std::pair<std::string, LinkProvider>> providers;
  for (double rho : config.oracle_rhos) {
    providers.emplace_back("constant-" + num(rho), LinkProvider::true_graphon(GraphonSpec::constant(), rho));
  }
  const Graph toy = oracle_toy_graph();
  const std::vector<std::uint32_t> toy_z{0, 0, 1, 1};
  providers.emplace_back("histogram-toy", LinkProvider::histogram(fit_histogram_fixed(toy, toy_z, 2)));
  providers.emplace_back("empirical-toy", LinkProvider::empirical(toy));

  double max_second = 0.0;
  double max_mean = 0.0;
  for (const auto n : config.n_grid) {
    for (const auto& m : config.motifs) {
      for (const auto& [name, provider] : providers) {
        const std::string second_metric = "second_moment_rel_error@" + name;
        const std::string mean_metric = "mean_abs_error@" + name;
        try {
          if (static_cast<std::size_t>(m.vertex_count()) > n) throw std::invalid_argument("motif larger than n");
          const Moments bf = brute_force_moments(provider, m, n);
          const double rho = provider.edge_density();
          const double p = *provider.exact_probability(m);
          const double implied =
              variance_sigma2(provider, m, n) * std::pow(rho, 2.0 * m.edge_count()) / static_cast<double>(n) + p * p;
          const double rel = std::abs(implied - bf.second_moment) / std::abs(bf.second_moment);
          const double mean_err =
              std::abs(expected_motif_density(provider, m, {DensityMethod::exact, 0, 0}).value - bf.mean);
          max_second = std::max(max_second, rel);
          max_mean = std::max(max_mean, mean_err);
          report.rows.push_back(row(exp, n, motif_label(m), seed_label, second_metric, rel));
          report.rows.push_back(row(exp, n, motif_label(m), seed_label, mean_metric, mean_err));
        } catch (const std::exception& e) {
          report.warnings.push_back("oracle n=" + std::to_string(n) + " " + motif_label(m) + " " + name +
                                    " skipped: " + e.what());
          report.rows.push_back(skipped(exp, n, motif_label(m), seed_label, second_metric));
          report.rows.push_back(skipped(exp, n, motif_label(m), seed_label, mean_metric));
        }
      }
    }
  }

  double max_er = 0.0;
  for (double rho : {0.1, 0.5}) {
    const auto provider = LinkProvider::true_graphon(GraphonSpec::constant(), rho);
    for (std::size_t n : {10, 100}) {
      const double expected = 2.0 * (1.0 - rho) / ((static_cast<double>(n) - 1.0) * rho);
      const double rel = std::abs(variance_sigma2(provider, motifs::edge(), n) - expected) / expected;
      max_er = std::max(max_er, rel);
      report.rows.push_back(row(exp, n, "K2", seed_label, "er_sigma2_rel_error@constant-" + num(rho), rel));
    }
  }

  const double fixtures = fixture_mismatches();
  const double copies = labeled_copy_mismatches();
  report.rows.push_back(row(exp, 0, "*", "all", "max_second_moment_rel_error", max_second));
  report.rows.push_back(row(exp, 0, "*", "all", "max_mean_abs_error", max_mean));
  report.rows.push_back(row(exp, 0, "K2", "all", "max_er_sigma2_rel_error", max_er));
  report.rows.push_back(row(exp, 0, "*", "all", "catalog_fixture_mismatches", fixtures));
  report.rows.push_back(row(exp, 0, "*", "all", "labeled_copy_mismatches", copies));
  report.details["merged_copy_catalog_K2"] = to_json(merged_copy_catalog(motifs::edge()));
  report.details["merge_collision_catalog_2star"] = to_json(merge_collision_catalog(motifs::two_star()));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  const auto it = kind_names().find(name);
  if (it == kind_names().end()) throw ConfigError("experiment.kind", "unknown experiment kind '" + name + "'");
  return it->second;
}

std::string to_string(ExperimentKind kind) {
  for (const auto& [name, k] : kind_names()) {
    if (k == kind) return name;
  }
  return "unknown";
}

ConfigError::ConfigError(std::string field, const std::string& what)
    : std::runtime_error("config field '" + field + "': " + what), field_(std::move(field)) {}

GraphonSpec ExperimentConfig::spec() const {
  switch (graphon) {
    case GraphonKind::constant:
      return GraphonSpec::constant();
    case GraphonKind::additive:
      return GraphonSpec::additive();
    case GraphonKind::block:
      return GraphonSpec::block(block_matrix);
  }
  return GraphonSpec::constant();
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }
  check_keys(tree);
  const Sections s{tree};
  ExperimentConfig c;

  const auto kind = s.get("experiment", "kind");
  if (!kind) throw ConfigError("experiment.kind", "missing");
  c.kind = parse_experiment_kind(*kind);
  if (auto v = s.get("experiment", "seeds")) {
    c.seeds = parse_list<Seed>("experiment.seeds", *v, parse_uint);
  }
  if (auto v = s.get("experiment", "threads")) {
    const auto t = parse_uint("experiment.threads", *v);
    if (t < 1 || t > 1024) throw ConfigError("experiment.threads", "must lie in [1, 1024]");
    c.threads = static_cast<int>(t);
  }
  if (auto v = s.get("experiment", "output")) c.output_dir = *v;

  if (auto v = s.get("graphon", "kind")) {
    try {
      c.graphon = parse_graphon_kind(*v);
    } catch (const std::exception& e) {
      throw ConfigError("graphon.kind", e.what());
    }
  }
  if (c.graphon == GraphonKind::block) {
    const auto v = s.get("graphon", "matrix");
    if (!v) throw ConfigError("graphon.matrix", "required for the block kind");
    c.block_matrix = parse_matrix("graphon.matrix", *v);
    try {
      (void)GraphonSpec::block(c.block_matrix);
    } catch (const std::exception& e) {
      throw ConfigError("graphon.matrix", e.what());
    }
  } else if (s.get("graphon", "matrix")) {
    throw ConfigError("graphon.matrix", "only valid for the block kind");
  }

  {
    const std::string skind = s.get("sparsity", "kind").value_or("constant");
    const double cval = s.get("sparsity", "c") ? parse_double("sparsity.c", *s.get("sparsity", "c")) : 0.2;
    const double alpha = s.get("sparsity", "alpha") ? parse_double("sparsity.alpha", *s.get("sparsity", "alpha")) : 0.0;
    try {
      if (skind == "constant") {
        if (alpha != 0.0) throw ConfigError("sparsity.alpha", "must be 0 for the constant kind");
        c.schedule = SparsitySchedule::constant(cval);
      } else if (skind == "power") {
        c.schedule = SparsitySchedule::power(cval, alpha);
      } else {
        throw ConfigError("sparsity.kind", "unknown schedule '" + skind + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("sparsity.c", e.what());
    }
  }

  if (auto v = s.get("data", "graph")) c.graph_path = *v;

  if (auto v = s.get("grid", "n")) {
    c.n_grid = parse_list<std::size_t>("grid.n", *v, parse_uint);
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
      if (c.n_grid[i] < 2) throw ConfigError("grid.n", "every n must be at least 2");
      if (i > 0 && c.n_grid[i] <= c.n_grid[i - 1]) throw ConfigError("grid.n", "must be sorted ascending");
    }
  } else if (c.kind == ExperimentKind::oracle) {
    c.n_grid = {4, 5};
  } else if (!(c.kind == ExperimentKind::bootstrap && c.graph_path)) {
    throw ConfigError("grid.n", "missing");
  }

  if (const pt::ptree* sec = s.section("motifs"); sec && !sec->empty()) {
    for (const auto& [name, value] : *sec) {
      try {
        const Motif m = Motif::parse(trim(value.data()));
        c.motifs.push_back(Motif::from_mask(m.vertex_count(), m.mask(), name));
      } catch (const std::exception& e) {
        throw ConfigError("motifs." + name, e.what());
      }
    }
  } else if (c.kind == ExperimentKind::oracle) {
    c.motifs = {motifs::edge(), motifs::two_star(), motifs::triangle()};
  } else if (c.kind != ExperimentKind::histogram_error) {
    throw ConfigError("motifs", "at least one motif is required");
  }

  if (auto v = s.get("bootstrap", "method")) {
    c.methods.clear();
    for (const auto& item : split(*v, ',')) {
      try {
        c.methods.push_back(parse_bootstrap_method(item));
      } catch (const std::exception& e) {
        throw ConfigError("bootstrap.method", e.what());
      }
    }
    if (c.methods.empty()) throw ConfigError("bootstrap.method", "expected a nonempty list");
  }
  if (c.kind == ExperimentKind::validate_theorem1) c.methods = {BootstrapMethod::empirical_graphon};
  if (c.kind == ExperimentKind::validate_theorem2) c.methods = {BootstrapMethod::histogram};
  if (auto v = s.get("bootstrap", "replicates")) c.replicates = parse_uint("bootstrap.replicates", *v);
  if (c.replicates == 0) throw ConfigError("bootstrap.replicates", "must be positive");
  if (auto v = s.get("bootstrap", "m")) c.m = parse_uint("bootstrap.m", *v);
  if (auto v = s.get("bootstrap", "truth_samples")) c.truth_samples = parse_uint("bootstrap.truth_samples", *v);
  if (c.truth_samples < 2) throw ConfigError("bootstrap.truth_samples", "must be at least 2");
  if (auto v = s.get("bootstrap", "levels")) {
    c.levels = parse_list<double>("bootstrap.levels", *v, parse_double);
    for (double l : c.levels) {
      if (!(l > 0.0 && l < 1.0)) throw ConfigError("bootstrap.levels", "levels must lie in (0, 1)");
    }
  }
  if (auto v = s.get("bootstrap", "center")) {
    if (*v == "exact") {
      c.center = DensityMethod::exact;
    } else if (*v == "monte-carlo") {
      c.center = DensityMethod::monte_carlo;
    } else {
      throw ConfigError("bootstrap.center", "expected 'exact' or 'monte-carlo'");
    }
  }
  if (auto v = s.get("bootstrap", "center_samples")) {
    c.center_samples = parse_uint("bootstrap.center_samples", *v);
    if (c.center_samples == 0) throw ConfigError("bootstrap.center_samples", "must be positive");
  }
  if (auto v = s.get("bootstrap", "bin_count"); v && *v != "auto") {
    c.bin_count = parse_uint("bootstrap.bin_count", *v);
    if (*c.bin_count < 1) throw ConfigError("bootstrap.bin_count", "must be positive");
  }
  if (auto v = s.get("search", "restarts")) {
    c.search.restarts = static_cast<int>(parse_uint("search.restarts", *v));
    if (c.search.restarts < 1) throw ConfigError("search.restarts", "must be positive");
  }
  if (auto v = s.get("search", "max_sweeps")) c.search.max_sweeps = static_cast<int>(parse_uint("search.max_sweeps", *v));
  if (auto v = s.get("coverage", "simulations")) {
    c.simulations = parse_uint("coverage.simulations", *v);
    if (c.simulations == 0) throw ConfigError("coverage.simulations", "must be positive");
  }
  if (auto v = s.get("histogram", "fits")) {
    c.fits = parse_uint("histogram.fits", *v);
    if (c.fits == 0) throw ConfigError("histogram.fits", "must be positive");
  }
  if (auto v = s.get("oracle", "rhos")) {
    c.oracle_rhos = parse_list<double>("oracle.rhos", *v, parse_double);
    for (double r : c.oracle_rhos) {
      if (!(r > 0.0 && r <= 1.0)) throw ConfigError("oracle.rhos", "values must lie in (0, 1]");
    }
  }

  if (c.kind != ExperimentKind::oracle) {
    const GraphonSpec spec = c.spec();
    for (const auto n : c.n_grid) {
      try {
        validate_rho(spec, c.schedule.rho(n));
      } catch (const std::exception& e) {
        throw ConfigError("sparsity.c", "n = " + std::to_string(n) + ": " + e.what());
      }
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_ini(const ExperimentConfig& c) {
  std::ostringstream o;
  const auto join = [](const auto& xs, auto&& f) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : ", ") + f(x);
    return out;
  };
  o << "[experiment]\n";
  o << "kind = " << to_string(c.kind) << '\n';
  o << "seeds = " << join(c.seeds, [](Seed s) { return std::to_string(s); }) << '\n';
  o << "threads = " << c.threads << '\n';
  o << "output = " << c.output_dir << '\n';
  o << "\n[graphon]\n";
  o << "kind = " << c.spec().kind_name() << '\n';
  if (c.graphon == GraphonKind::block) {
    std::string rows;
    for (const auto& r : c.block_matrix) {
      std::string line;
      for (double x : r) line += (line.empty() ? "" : " ") + num(x);
      rows += (rows.empty() ? "" : "; ") + line;
    }
    o << "matrix = " << rows << '\n';
  }
  o << "\n[sparsity]\n";
  o << "kind = " << (c.schedule.kind() == SparsitySchedule::Kind::power ? "power" : "constant") << '\n';
  o << "c = " << num(c.schedule.c()) << '\n';
  o << "alpha = " << num(c.schedule.alpha()) << '\n';
  if (!c.n_grid.empty()) {
    o << "\n[grid]\n";
    o << "n = " << join(c.n_grid, [](std::size_t n) { return std::to_string(n); }) << '\n';
  }
  if (c.graph_path) o << "\n[data]\ngraph = " << *c.graph_path << '\n';
  if (!c.motifs.empty()) {
    o << "\n[motifs]\n";
    for (const auto& m : c.motifs) o << m.label() << " = " << m.literal() << '\n';
  }
  o << "\n[bootstrap]\n";
  o << "method = " << join(c.methods, [](BootstrapMethod m) { return to_string(m); }) << '\n';
  o << "replicates = " << c.replicates << '\n';
  o << "m = " << c.m << '\n';
  o << "truth_samples = " << c.truth_samples << '\n';
  o << "levels = " << join(c.levels, [](double x) { return num(x); }) << '\n';
  o << "center = " << (c.center == DensityMethod::exact ? "exact" : "monte-carlo") << '\n';
  o << "center_samples = " << c.center_samples << '\n';
  o << "bin_count = " << (c.bin_count ? std::to_string(*c.bin_count) : "auto") << '\n';
  o << "\n[search]\n";
  o << "restarts = " << c.search.restarts << '\n';
  o << "max_sweeps = " << c.search.max_sweeps << '\n';
  o << "\n[coverage]\nsimulations = " << c.simulations << '\n';
  o << "\n[histogram]\nfits = " << c.fits << '\n';
  o << "\n[oracle]\nrhos = " << join(c.oracle_rhos, [](double x) { return num(x); }) << '\n';
  return o.str();
}

const MetricRow& ExperimentReport::find(const std::string& metric, std::size_t n, const std::string& motif,
                                        const std::string& seed) const {
  for (const auto& r : rows) {
    if (r.metric == metric && r.n == n && (motif.empty() || r.motif == motif) && r.seed == seed) return r;
  }
  throw std::out_of_range("no metric row " + metric + " n=" + std::to_string(n) + " motif=" + motif +
                          " seed=" + seed);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report;
  report.config = config;
  switch (config.kind) {
    case ExperimentKind::bootstrap:
      run_bootstrap_kind(config, report);
      break;
    case ExperimentKind::validate_theorem1:
      run_validate_kind(config, report, BootstrapMethod::empirical_graphon);
      break;
    case ExperimentKind::validate_theorem2:
      run_validate_kind(config, report, BootstrapMethod::histogram);
      break;
    case ExperimentKind::coverage:
      run_coverage_kind(config, report);
      break;
    case ExperimentKind::clt_check:
      run_clt_kind(config, report);
      break;
    case ExperimentKind::oracle:
      run_oracle_kind(config, report);
      break;
    case ExperimentKind::histogram_error:
      run_histogram_error_kind(config, report);
      break;
  }
  if (report.replicates.size() == 1) report.replicates.front().file = "replicates.csv";
  return report;
}

std::string metrics_csv(const ExperimentReport& report) {
  std::string out = "experiment,n,motif,seed,metric,value,status\n";
  char buf[64];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.value);
    out += csv_field(r.experiment) + ',' + std::to_string(r.n) + ',' + csv_field(r.motif) + ',' +
           csv_field(r.seed) + ',' + csv_field(r.metric) + ',' + buf + ',' + r.status + '\n';
  }
  return out;
}

nlohmann::json report_json(const ExperimentReport& report) {
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& r : report.rows) {
    if (r.seed != "all") continue;
    summary.push_back({{"experiment", r.experiment},
                       {"n", r.n},
                       {"motif", r.motif},
                       {"metric", r.metric},
                       {"value", r.status == "ok" ? nlohmann::json(r.value) : nlohmann::json()},
                       {"status", r.status}});
  }
  nlohmann::json files = {"report.json", "metrics.csv", "config.ini"};
  for (const auto& r : report.replicates) files.push_back(r.file);
  return {{"experiment", to_string(report.config.kind)},
          {"config", to_ini(report.config)},
          {"seeds", report.config.seeds},
          {"metadata",
           {{"version", GRAPHBOOT_VERSION},
            {"compiler", __VERSION__},
            {"cxx_standard", __cplusplus},
            {"threads", report.config.threads}}},
          {"summary", summary},
          {"warnings", report.warnings},
          {"files", files},
          {"details", report.details}};
}

void write_report(const ExperimentReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    out << content;
  };
  write("metrics.csv", metrics_csv(report));
  write("config.ini", to_ini(report.config));
  write("report.json", report_json(report).dump(2) + "\n");
  for (const auto& r : report.replicates) {
    std::ostringstream csv;
    write_replicates_csv(r.result, csv);
    write(r.file, csv.str());
  }
}

}  // namespace graphboot
