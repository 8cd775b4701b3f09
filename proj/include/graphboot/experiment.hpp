#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphboot/bootstrap.hpp"
#include "graphboot/graphon.hpp"
#include "graphboot/motif.hpp"
#include "graphboot/rng.hpp"

namespace graphboot {

enum class ExperimentKind {
  bootstrap,
  validate_theorem1,
  validate_theorem2,
  coverage,
  clt_check,
  oracle,
  histogram_error,
};

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

/// Invalid configuration; field() is "section.key".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::bootstrap;
  std::vector<Seed> seeds{0};
  int threads = 1;
  std::string output_dir = "out";

  GraphonKind graphon = GraphonKind::constant;
  /// Raw block weights as written; normalized when the spec is built.
  std::vector<std::vector<double>> block_matrix;
  SparsitySchedule schedule = SparsitySchedule::constant(0.2);

  std::vector<std::size_t> n_grid;
  std::vector<Motif> motifs;
  /// Optional data graph for the bootstrap kind; replaces sampling.
  std::optional<std::string> graph_path;

  std::vector<BootstrapMethod> methods{BootstrapMethod::empirical_graphon};
  std::size_t replicates = 2000;
  std::size_t m = 0;
  std::size_t truth_samples = 2000;
  std::vector<double> levels{0.9};
  DensityMethod center = DensityMethod::exact;
  std::size_t center_samples = 1'000'000;
  std::optional<std::size_t> bin_count;
  SearchOptions search;

  std::size_t simulations = 200;
  std::size_t fits = 20;
  std::vector<double> oracle_rhos{0.3, 0.7};

  GraphonSpec spec() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Canonical INI text with every field spelled out; parse_config of the
/// result yields an equivalent config.
std::string to_ini(const ExperimentConfig& config);

struct MetricRow {
  std::string experiment;
  std::size_t n = 0;
  std::string motif;
  std::string seed;
  std::string metric;
  double value = 0.0;
  std::string status = "ok";
};

struct NamedReplicates {
  std::string file;
  BootstrapResult result;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<MetricRow> rows;
  std::vector<std::string> warnings;
  std::vector<NamedReplicates> replicates;
  nlohmann::json details = nlohmann::json::object();

  /// First row matching all given fields; throws std::out_of_range.
  const MetricRow& find(const std::string& metric, std::size_t n, const std::string& motif = {},
                        const std::string& seed = "all") const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

/// metrics.csv contents: experiment,n,motif,seed,metric,value,status.
std::string metrics_csv(const ExperimentReport& report);
nlohmann::json report_json(const ExperimentReport& report);
/// Writes report.json, metrics.csv, config.ini and replicate CSVs into dir.
void write_report(const ExperimentReport& report, const std::string& dir);

}  // namespace graphboot
