#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphboot/bootstrap.hpp"
#include "graphboot/census.hpp"
#include "graphboot/combinatorics.hpp"
#include "graphboot/experiment.hpp"
#include "graphboot/graphon.hpp"
#include "graphboot/histogram.hpp"
#include "graphboot/io.hpp"

using namespace graphboot;

namespace {

struct Globals {
  std::string config;
  std::optional<Seed> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

ExperimentConfig configured(const Globals& g, ExperimentKind kind, bool required) {
  ExperimentConfig c;
  if (!g.config.empty()) {
    c = load_config(g.config);
    if (c.kind != kind) {
      std::fprintf(stderr, "note: running %s (config kind was %s)\n", to_string(kind).c_str(),
                   to_string(c.kind).c_str());
    }
  } else if (required) {
    throw ConfigError("--config", "this command needs a config file");
  }
  // Re-parse with the requested kind so kind-specific defaults and checks apply.
  std::string text = to_ini(c);
  const auto pos = text.find("kind = " + to_string(c.kind));
  text.replace(pos, 7 + to_string(c.kind).size(), "kind = " + to_string(kind));
  c = parse_config(text);
  if (g.seed) c.seeds = {*g.seed};
  if (g.out) c.output_dir = *g.out;
  if (g.threads) c.threads = *g.threads;
  return c;
}

void print_summary(const ExperimentReport& report) {
  for (const auto& r : report.rows) {
    if (r.seed != "all") continue;
    if (r.status == "ok") {
      std::printf("%-24s n=%-6zu %-10s %-36s %.6g\n", r.experiment.c_str(), r.n, r.motif.c_str(),
                  r.metric.c_str(), r.value);
    } else {
      std::printf("%-24s n=%-6zu %-10s %-36s %s\n", r.experiment.c_str(), r.n, r.motif.c_str(), r.metric.c_str(),
                  r.status.c_str());
    }
  }
  for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

int run_and_write(const ExperimentConfig& config) {
  const auto report = run_experiment(config);
  write_report(report, config.output_dir);
  print_summary(report);
  std::printf("wrote %s/metrics.csv and %s/report.json\n", config.output_dir.c_str(), config.output_dir.c_str());
  return 0;
}

std::vector<Motif> parse_motifs(const std::vector<std::string>& literals) {
  std::vector<Motif> out;
  for (const auto& l : literals) out.push_back(Motif::parse(l));
  return out;
}

void emit(const nlohmann::json& j, const std::optional<std::string>& path) {
  if (!path) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(*path);
  if (!out) throw std::runtime_error("cannot write " + *path);
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bootstrap inference for motif densities of exchangeable random graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Experiment config (INI)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Master seed; replaces the config seed list");
  app.add_option("--out", g.out, "Output directory or file");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 1024));

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a graph from a graphon");
  std::string gen_kind = "constant";
  double gen_rho = 0.2;
  std::size_t gen_n = 100;
  std::optional<std::string> gen_latent;
  gen->add_option("--graphon", gen_kind, "constant, additive")->check(CLI::IsMember({"constant", "additive"}));
  gen->add_option("--rho", gen_rho, "Sparsity factor");
  gen->add_option("-n,--nodes", gen_n, "Node count")->check(CLI::Range(2, 1 << 24));
  gen->add_option("--latent", gen_latent, "Also write the latent values to this file");

  // motifs
  auto* mot = app.add_subcommand("motifs", "Motif densities, censuses and catalogs");
  std::string mot_graph;
  std::vector<std::string> mot_literals;
  std::optional<int> mot_census;
  bool mot_catalog = false;
  mot->add_option("--graph", mot_graph, "Edge-list file")->check(CLI::ExistingFile);
  mot->add_option("-m,--motif", mot_literals, "Motif literal, e.g. \"2star: 3; 0-1,1-2\" or K2");
  mot->add_option("--census", mot_census, "Induced census of all k-vertex classes")->check(CLI::Range(3, 6));
  mot->add_flag("--catalog", mot_catalog, "Print merged-copy and merge-collision catalogs of each motif");

  // fit-histogram
  auto* fit = app.add_subcommand("fit-histogram", "Least-squares balanced block fit");
  std::string fit_graph;
  std::optional<std::size_t> fit_bins;
  std::optional<std::string> fit_fixed;
  SearchOptions fit_search;
  fit->add_option("--graph", fit_graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  fit->add_option("--bins", fit_bins, "Bin count r (default: selected from the edge density)");
  fit->add_option("--fixed-assignment", fit_fixed, "File of n block labels 1..r; skips the search")
      ->check(CLI::ExistingFile);
  fit->add_option("--restarts", fit_search.restarts, "Random restarts")->check(CLI::Range(1, 100000));
  fit->add_option("--max-sweeps", fit_search.max_sweeps, "Sweep cap per restart")->check(CLI::Range(0, 100000));

  // bootstrap
  auto* boot = app.add_subcommand("bootstrap", "Bootstrap a graph's motif densities");
  std::optional<std::string> boot_graph;
  std::vector<std::string> boot_literals;
  std::optional<std::string> boot_method;
  std::optional<std::size_t> boot_replicates;
  std::optional<std::size_t> boot_m;
  std::vector<double> boot_levels;
  boot->add_option("--graph", boot_graph, "Edge-list file (else sampled per the config)")->check(CLI::ExistingFile);
  boot->add_option("-m,--motif", boot_literals, "Motif literal");
  boot->add_option("--method", boot_method, "empirical or histogram");
  boot->add_option("-B,--replicates", boot_replicates, "Bootstrap replicates");
  boot->add_option("--size", boot_m, "Bootstrap graph size m (empirical method; default n)");
  boot->add_option("--level", boot_levels, "Interval level(s)");

  auto* val = app.add_subcommand("validate", "Compare bootstrap and sampling distributions");
  int theorem = 1;
  val->add_option("--theorem", theorem, "1: empirical graphon, 2: histogram")->required()->check(CLI::IsMember({1, 2}));
  auto* cov = app.add_subcommand("coverage", "Percentile interval coverage study");
  auto* clt = app.add_subcommand("clt-check", "Normality of the scaled density statistic");
  auto* ora = app.add_subcommand("oracle", "Brute-force identity checks");
  auto* herr = app.add_subcommand("histogram-error", "Histogram estimator MSE and max deviation sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) {
      const auto spec = gen_kind == "additive" ? GraphonSpec::additive() : GraphonSpec::constant();
      const auto sample = sample_graph(spec, gen_rho, gen_n, g.seed.value_or(0));
      if (g.out) {
        save_graph(sample.graph, *g.out);
      } else {
        write_graph(sample.graph, std::cout);
      }
      if (gen_latent) {
        std::ofstream out(*gen_latent);
        char buf[32];
        for (double u : sample.latent.values) {
          std::snprintf(buf, sizeof buf, "%.17g\n", u);
          out << buf;
        }
      }
      return 0;
    }
    if (*mot) {
      nlohmann::json out = nlohmann::json::object();
      const auto motifs = parse_motifs(mot_literals);
      if (!mot_graph.empty()) {
        const Graph graph = load_graph(mot_graph);
        out["n"] = graph.node_count();
        out["edge_density"] = graph.edge_density();
        nlohmann::json list = nlohmann::json::array();
        for (const auto& d : motif_densities(graph, motifs)) {
          list.push_back({{"motif", d.motif.label()},
                          {"key", d.motif.key()},
                          {"subsets", d.subset_count},
                          {"raw", d.raw_density},
                          {"normalized", d.normalized_density ? nlohmann::json(*d.normalized_density)
                                                              : nlohmann::json()}});
        }
        out["densities"] = list;
        if (mot_census) {
          const int k = *mot_census;
          out["census"] = k == 3   ? nlohmann::json(triad_census(graph))
                          : k == 4 ? nlohmann::json(four_vertex_census(graph))
                                   : nlohmann::json(esu_census(graph, k, g.threads.value_or(1)));
        }
      } else if (mot_census) {
        throw std::invalid_argument("--census needs --graph");
      }
      if (mot_catalog) {
        nlohmann::json cats = nlohmann::json::array();
        for (const auto& m : motifs) {
          nlohmann::json entry = {{"motif", m.label()}, {"key", m.key()}, {"labeled_copies", labeled_copy_count(m)}};
          if (m.vertex_count() <= 4) entry["merged_copies"] = to_json(merged_copy_catalog(m));
          if (m.edge_count() > 0 && m.vertex_count() <= 6) entry["merge_collisions"] = to_json(merge_collision_catalog(m));
          cats.push_back(std::move(entry));
        }
        out["catalogs"] = cats;
      }
      emit(out, g.out);
      return 0;
    }
    if (*fit) {
      const Graph graph = load_graph(fit_graph);
      HistogramModel model;
      if (fit_fixed) {
        std::ifstream in(*fit_fixed);
        std::vector<std::uint32_t> z;
        long long label = 0;
        while (in >> label) {
          if (label < 1) throw std::invalid_argument("block labels are 1-based");
          z.push_back(static_cast<std::uint32_t>(label - 1));
        }
        if (!in.eof()) throw std::invalid_argument("malformed assignment file " + *fit_fixed);
        std::size_t r = 0;
        for (auto b : z) r = std::max<std::size_t>(r, b + 1);
        if (fit_bins && *fit_bins != r) r = *fit_bins;
        model = fit_histogram_fixed(graph, z, r);
      } else {
        const std::size_t r = fit_bins ? *fit_bins : select_bin_count(graph.node_count(), graph.edge_density());
        fit_search.threads = g.threads.value_or(1);
        model = fit_histogram(graph, r, fit_search, g.seed.value_or(0));
      }
      std::vector<std::uint32_t> labels(model.assignment());
      for (auto& z : labels) ++z;
      emit({{"n", model.node_count()},
            {"bin_count", model.bin_count()},
            {"loss", model.loss()},
            {"edge_density", model.edge_density()},
            {"block_probs", model.block_probs()},
            {"assignment", labels}},
           g.out);
      return 0;
    }
    if (*boot) {
      ExperimentConfig c;
      if (!g.config.empty()) {
        c = configured(g, ExperimentKind::bootstrap, false);
      } else {
        if (!boot_graph) throw ConfigError("--graph", "bootstrap needs --graph or --config");
        std::string text = "[experiment]\nkind = bootstrap\n[data]\ngraph = " + *boot_graph + "\n[motifs]\n";
        if (boot_literals.empty()) boot_literals.push_back("K2");
        for (std::size_t i = 0; i < boot_literals.size(); ++i) {
          const Motif m = Motif::parse(boot_literals[i]);
          text += (m.name().empty() ? "motif" + std::to_string(i + 1) : m.name()) + " = " + m.literal() + "\n";
        }
        c = parse_config(text);
        if (g.seed) c.seeds = {*g.seed};
        if (g.out) c.output_dir = *g.out;
        if (g.threads) c.threads = *g.threads;
      }
      if (boot_graph) c.graph_path = *boot_graph;
      if (boot_method) c.methods = {parse_bootstrap_method(*boot_method)};
      if (boot_replicates) c.replicates = *boot_replicates;
      if (boot_m) c.m = *boot_m;
      if (!boot_levels.empty()) c.levels = boot_levels;
      if (!boot_literals.empty() && !g.config.empty()) c.motifs = parse_motifs(boot_literals);
      return run_and_write(parse_config(to_ini(c)));
    }
    if (*val) {
      return run_and_write(configured(g, theorem == 1 ? ExperimentKind::validate_theorem1
                                                      : ExperimentKind::validate_theorem2,
                                      true));
    }
    if (*cov) return run_and_write(configured(g, ExperimentKind::coverage, true));
    if (*clt) return run_and_write(configured(g, ExperimentKind::clt_check, true));
    if (*ora) return run_and_write(configured(g, ExperimentKind::oracle, false));
    if (*herr) return run_and_write(configured(g, ExperimentKind::histogram_error, true));
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const GraphFormatError& e) {
    std::fprintf(stderr, "graph file error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
