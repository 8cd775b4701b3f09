#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "graphboot/experiment.hpp"

using namespace graphboot;

namespace {

std::string config_field_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

const char* small_theorem1 = R"([experiment]
kind = validate-theorem1
seeds = 0, 1
[graphon]
kind = constant
[sparsity]
c = 0.3
[grid]
n = 40, 60
[motifs]
K2 = 2; 0-1
wedge = 3; 0-1,1-2
[bootstrap]
replicates = 100
truth_samples = 100
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config parsing") {
  const auto c = parse_config(small_theorem1);
  CHECK(c.kind == ExperimentKind::validate_theorem1);
  CHECK(c.seeds == std::vector<Seed>{0, 1});
  CHECK(c.n_grid == std::vector<std::size_t>{40, 60});
  REQUIRE(c.motifs.size() == 2);
  CHECK(c.motifs[1].name() == "wedge");
  CHECK(c.motifs[1].edge_count() == 2);
  CHECK(c.replicates == 100);
  CHECK(c.schedule.rho(40) == 0.3);
  CHECK(c.methods == std::vector<BootstrapMethod>{BootstrapMethod::empirical_graphon});
}

TEST_CASE("configuration errors name the field") {
  CHECK(config_field_error("[experiment]\nkind = jackknife\n") == "experiment.kind");
  CHECK(config_field_error("[experiment]\nkind = oracle\nseed = 3\n") == "experiment.seed");
  CHECK(config_field_error("[experiment]\nkind = clt-check\n[grid]\nn = 400, 100\n[motifs]\nK2 = K2\n") ==
        "grid.n");
  CHECK(config_field_error("[experiment]\nkind = clt-check\n[grid]\nn = 100\n[motifs]\nbad = 3; 0-4\n") ==
        "motifs.bad");
  CHECK(config_field_error("[experiment]\nkind = clt-check\n[grid]\nn = 100\n") == "motifs");
  CHECK(config_field_error("[experiment]\nkind = clt-check\n[graphon]\nkind = additive\n[sparsity]\nc = 0.7\n"
                           "[grid]\nn = 100\n[motifs]\nK2 = K2\n") == "sparsity.c");
  CHECK(config_field_error("[experiment]\nkind = coverage\n[grid]\nn = 100\n[motifs]\nK2 = K2\n"
                           "[bootstrap]\nlevels = 1.5\n") == "bootstrap.levels");
  CHECK(config_field_error("[experiment]\nkind = oracle\n[graphon]\nkind = block\n") == "graphon.matrix");
  CHECK(config_field_error("[experiment]\nkind = oracle\n[extra]\nx = 1\n") == "extra");
}

TEST_CASE("echoed config parses back to the same config") {
  const std::string text =
      "[experiment]\nkind = coverage\nseeds = 4\n[graphon]\nkind = block\nmatrix = 3 1; 1 0.5\n"
      "[sparsity]\nkind = power\nc = 0.9\nalpha = 0.25\n[grid]\nn = 64\n[motifs]\ntri = K3\n"
      "[bootstrap]\nmethod = empirical, histogram\nlevels = 0.8, 0.95\nbin_count = 4\n";
  const auto c = parse_config(text);
  const std::string echo = to_ini(c);
  CHECK(to_ini(parse_config(echo)) == echo);
  const auto back = parse_config(echo);
  CHECK(back.block_matrix == c.block_matrix);
  CHECK(back.schedule.alpha() == 0.25);
  CHECK(back.methods.size() == 2);
  CHECK(back.bin_count == std::optional<std::size_t>(4));
  CHECK(back.motifs[0].name() == "tri");
}

TEST_CASE("validation sweep produces one KS row per cell and medians") {
  const auto report = run_experiment(parse_config(small_theorem1));
  for (std::size_t n : {40, 60}) {
    for (const char* motif : {"K2", "wedge"}) {
      int rows = 0;
      for (const auto& r : report.rows) rows += r.metric == "ks" && r.n == n && r.motif == motif;
      CHECK(rows == 2);
      const auto& med = report.find("median_ks", n, motif);
      CHECK(med.status == "ok");
      CHECK((med.value > 0.0 && med.value <= 1.0));
    }
  }
  CHECK(report.replicates.size() == 4);
}

TEST_CASE("infeasible cells are explicit skipped rows") {
  const std::string text =
      "[experiment]\nkind = validate-theorem2\n[graphon]\nkind = additive\n[sparsity]\nc = 0.3\n"
      "[grid]\nn = 31, 32\n[motifs]\nK2 = K2\n[bootstrap]\nreplicates = 50\ntruth_samples = 50\n";
  const auto report = run_experiment(parse_config(text));
  CHECK(report.find("ks", 31, "K2", "0").status == "skipped");
  CHECK(report.find("median_ks", 31, "K2").status == "skipped");
  CHECK(report.find("ks", 32, "K2", "0").status == "ok");
  CHECK_FALSE(report.warnings.empty());
  CHECK(metrics_csv(report).find("validate-theorem2,31,K2,0,ks,nan,skipped") != std::string::npos);
}

TEST_CASE("metrics are identical for 1 and 3 threads") {
  auto c = parse_config(small_theorem1);
  c.threads = 1;
  const auto a = metrics_csv(run_experiment(c));
  c = parse_config(to_ini(c));
  c.threads = 3;
  const auto b = metrics_csv(run_experiment(c));
  CHECK(a == b);

  const std::string cov =
      "[experiment]\nkind = coverage\nthreads = 2\n[graphon]\nkind = additive\n[sparsity]\nc = 0.3\n"
      "[grid]\nn = 48\n[motifs]\nK2 = K2\n[bootstrap]\nmethod = empirical, histogram\nreplicates = 60\n"
      "[coverage]\nsimulations = 6\n";
  auto cc = parse_config(cov);
  const auto c2 = metrics_csv(run_experiment(cc));
  cc.threads = 1;
  CHECK(metrics_csv(run_experiment(cc)) == c2);
}

TEST_CASE("coverage, clt-check and histogram-error summaries") {
  const auto cov = run_experiment(parse_config(
      "[experiment]\nkind = coverage\n[graphon]\nkind = additive\n[sparsity]\nc = 0.3\n[grid]\nn = 48\n"
      "[motifs]\nK2 = K2\n[bootstrap]\nmethod = empirical, histogram\nreplicates = 60\n[coverage]\nsimulations = 5\n"));
  for (const char* exp : {"coverage:empirical-graphon", "coverage:histogram"}) {
    bool found = false;
    for (const auto& r : cov.rows) {
      if (r.experiment == exp && r.metric == "coverage_0.9" && r.seed == "all") {
        found = true;
        CHECK((r.value >= 0.0 && r.value <= 1.0));
      }
    }
    CHECK(found);
  }
  CHECK(cov.find("true_probability", 48, "K2").value == doctest::Approx(0.3));

  const auto clt = run_experiment(parse_config(
      "[experiment]\nkind = clt-check\n[sparsity]\nc = 0.3\n[grid]\nn = 50\n[motifs]\nK2 = K2\n"
      "[bootstrap]\ntruth_samples = 200\n"));
  CHECK(clt.find("median_ks_normal", 50, "K2").status == "ok");
  CHECK(clt.find("sigma_analytic", 50, "K2").value == doctest::Approx(std::sqrt(2.0 * 0.7 / (49.0 * 0.3))));

  const auto herr = run_experiment(parse_config(
      "[experiment]\nkind = histogram-error\n[graphon]\nkind = additive\n[sparsity]\nc = 0.3\n[grid]\nn = 32, 64\n"
      "[histogram]\nfits = 3\n"));
  CHECK(herr.find("median_mse", 32, "-").status == "ok");
  CHECK(herr.find("median_mse_ratio_to_n32", 64, "-").status == "ok");
}

TEST_CASE("oracle kind defaults") {
  const auto report = run_experiment(parse_config("[experiment]\nkind = oracle\n"));
  CHECK(report.find("max_second_moment_rel_error", 0, "*").value <= 1e-10);
  CHECK(report.find("max_mean_abs_error", 0, "*").value <= 1e-12);
  CHECK(report.find("max_er_sigma2_rel_error", 0, "K2").value <= 1e-12);
  CHECK(report.find("catalog_fixture_mismatches", 0, "*").value == 0.0);
  CHECK(report.find("labeled_copy_mismatches", 0, "*").value == 0.0);
}

TEST_CASE("report files") {
  const auto dir = std::filesystem::temp_directory_path() / "graphboot_report_test";
  std::filesystem::remove_all(dir);
  auto c = parse_config(small_theorem1);
  c.n_grid = {40};
  c.seeds = {3};
  const auto report = run_experiment(c);
  write_report(report, dir.string());
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "config.ini"));
  CHECK(std::filesystem::exists(dir / "replicates.csv"));
  const std::string metrics = slurp(dir / "metrics.csv");
  CHECK(metrics.rfind("experiment,n,motif,seed,metric,value,status\n", 0) == 0);
  CHECK(metrics == metrics_csv(report));
  const auto rerun = run_experiment(parse_config(slurp(dir / "config.ini")));
  CHECK(metrics_csv(rerun) == metrics);
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["experiment"] == "validate-theorem1");
  CHECK(j["config"] == to_ini(c));
  std::filesystem::remove_all(dir);
}

}
