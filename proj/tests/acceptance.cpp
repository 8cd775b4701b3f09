#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "graphboot/combinatorics.hpp"
#include "graphboot/experiment.hpp"
#include "graphboot/motif.hpp"

using namespace graphboot;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const MetricRow& row_of(const ExperimentReport& report, const std::string& experiment, const std::string& metric,
                        std::size_t n, const std::string& motif) {
  for (const auto& r : report.rows) {
    if (r.experiment == experiment && r.metric == metric && r.n == n && r.motif == motif && r.seed == "all") return r;
  }
  throw std::out_of_range("missing " + experiment + " " + metric);
}

double value_of(const ExperimentReport& report, const std::string& metric, std::size_t n, const std::string& motif) {
  const auto& r = report.find(metric, n, motif);
  if (r.status != "ok") throw std::runtime_error(metric + " is " + r.status);
  return r.value;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const ExperimentReport& oracle_report() {
  static const ExperimentReport report = run_experiment(parse_config(
      "[experiment]\nkind = oracle\n[grid]\nn = 4, 5\n[motifs]\nK2 = K2\n2star = 3; 0-1,0-2\nK3 = K3\n"
      "[oracle]\nrhos = 0.3, 0.7\n"));
  return report;
}

Outcome criterion1() {
  const double err = value_of(oracle_report(), "max_second_moment_rel_error", 0, "*");
  return {err <= 1e-10, "max relative error " + fmt("%.3g", err)};
}

Outcome criterion2() {
  const double err = value_of(oracle_report(), "max_mean_abs_error", 0, "*");
  return {err <= 1e-12, "max abs error " + fmt("%.3g", err)};
}

Outcome criterion3() {
  double worst = 0.0;
  for (double rho : {0.1, 0.5}) {
    const auto provider = LinkProvider::true_graphon(GraphonSpec::constant(), rho);
    for (std::size_t n : {10, 100}) {
      const double got = variance_sigma2(provider, motifs::edge(), n);
      const double want = 2.0 * (1.0 - rho) / (static_cast<double>(n - 1) * rho);
      worst = std::max(worst, std::abs(got - want) / want);
    }
  }
  return {worst <= 1e-12, "max relative error " + fmt("%.3g", worst)};
}

Outcome validate(const std::string& text, const std::vector<std::string>& motif_names, std::size_t small,
                 std::size_t large, double bound) {
  const auto report = run_experiment(parse_config(text));
  bool pass = true;
  std::string detail;
  for (const auto& m : motif_names) {
    const double ks_small = value_of(report, "median_ks", small, m);
    const double ks_large = value_of(report, "median_ks", large, m);
    pass = pass && ks_large < ks_small && ks_large < bound;
    detail += m + ": KS(" + std::to_string(small) + ")=" + fmt("%.4f", ks_small) + " KS(" + std::to_string(large) +
              ")=" + fmt("%.4f", ks_large) + " ";
  }
  detail.pop_back();
  return {pass, detail};
}

Outcome criterion4() {
  return validate(
      "[experiment]\nkind = validate-theorem1\nseeds = 0, 1, 2, 3, 4\n[graphon]\nkind = constant\n"
      "[sparsity]\nc = 0.2\n[grid]\nn = 100, 400\n[motifs]\nK2 = K2\n"
      "[bootstrap]\nreplicates = 2000\ntruth_samples = 2000\n",
      {"K2"}, 100, 400, 0.15);
}

Outcome criterion5() {
  return validate(
      "[experiment]\nkind = validate-theorem2\nseeds = 0, 1, 2, 3, 4\n[graphon]\nkind = additive\n"
      "[sparsity]\nc = 0.3\n[grid]\nn = 128, 512\n[motifs]\nK2 = K2\n2star = 3; 0-1,0-2\n"
      "[bootstrap]\nreplicates = 2000\ntruth_samples = 2000\n",
      {"K2", "2star"}, 128, 512, 0.2);
}

const ExperimentReport& histogram_error_report() {
  static const ExperimentReport report = run_experiment(parse_config(
      "[experiment]\nkind = histogram-error\n[graphon]\nkind = additive\n[sparsity]\nc = 0.3\n"
      "[grid]\nn = 128, 256, 512\n[histogram]\nfits = 20\n"));
  return report;
}

Outcome criterion6() {
  const auto& report = histogram_error_report();
  const double ratio = value_of(report, "median_mse", 512, "-") / value_of(report, "median_mse", 128, "-");
  return {ratio >= 0.2 && ratio <= 0.6, "median MSE ratio " + fmt("%.4f", ratio)};
}

Outcome criterion7() {
  const auto& report = histogram_error_report();
  bool pass = true;
  std::string detail = "median max_dev/rho:";
  double previous = 0.0;
  for (std::size_t n : {128, 256, 512}) {
    const double v = value_of(report, "median_max_dev_over_rho", n, "-");
    if (n != 128) pass = pass && v <= 1.2 * previous;
    previous = v;
    detail += " " + fmt("%.4f", v);
  }
  return {pass, detail};
}

Outcome criterion8() {
  const auto report = run_experiment(parse_config(
      "[experiment]\nkind = clt-check\n[graphon]\nkind = constant\n[sparsity]\nc = 0.3\n[grid]\nn = 500\n"
      "[motifs]\nK2 = K2\n[bootstrap]\ntruth_samples = 1000\n"));
  const double ks = value_of(report, "median_ks_normal", 500, "K2");
  return {ks < 0.06, "KS to normal " + fmt("%.4f", ks)};
}

Outcome criterion9() {
  const auto report = run_experiment(parse_config(
      "[experiment]\nkind = coverage\n[graphon]\nkind = additive\n[sparsity]\nc = 0.3\n[grid]\nn = 256\n"
      "[motifs]\nK2 = K2\n[bootstrap]\nmethod = empirical, histogram\nreplicates = 2000\nlevels = 0.9\n"
      "[coverage]\nsimulations = 200\n"));
  bool pass = true;
  std::string detail;
  for (const char* method : {"empirical-graphon", "histogram"}) {
    const auto& r = row_of(report, std::string("coverage:") + method, "coverage_0.9", 256, "K2");
    pass = pass && r.status == "ok" && r.value >= 0.80;
    detail += std::string(method) + " " + fmt("%.3f", r.value) + " ";
  }
  detail.pop_back();
  return {pass, detail};
}

std::uint64_t brute_automorphisms(const Motif& m) {
  std::vector<int> perm(static_cast<std::size_t>(m.vertex_count()));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (int a = 0; a < m.vertex_count() && ok; ++a) {
      for (int b = a + 1; b < m.vertex_count(); ++b) {
        if (m.has_edge(a, b) != m.has_edge(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)])) {
          ok = false;
          break;
        }
      }
    }
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

Outcome criterion10() {
  int mismatches = 0;
  int checked = 0;
  for (int p = 2; p <= 5; ++p) {
    std::uint64_t factorial = 1;
    for (int t = 2; t <= p; ++t) factorial *= static_cast<std::uint64_t>(t);
    for (const auto& m : isomorphism_classes(p, true)) {
      ++checked;
      mismatches += labeled_copy_count(m) != factorial / brute_automorphisms(m);
    }
  }
  const auto& edge = merged_copy_catalog(motifs::edge());
  const auto coefficient = [&](int k, const Motif& w) -> std::uint64_t {
    for (const auto& e : edge.entries(k)) {
      if (e.motif.key() == w.key()) return e.coefficient;
    }
    return 0;
  };
  const Motif two_edges = Motif::parse("4; 0-1,2-3");
  mismatches += coefficient(3, motifs::two_star()) != 8;
  mismatches += coefficient(3, motifs::triangle()) != 24;
  mismatches += coefficient(4, two_edges) != 8;
  const auto& path3 = merge_collision_catalog(motifs::path(3));
  const bool collision_ok = path3.entries(1).empty() && path3.entries(2).size() == 1 &&
                            path3.entries(2)[0].motif.key() == motifs::edge().key() &&
                            path3.entries(2)[0].multiplicity == 1 && path3.entries(3).size() == 1 &&
                            path3.entries(3)[0].motif.key() == motifs::path(3).key() &&
                            path3.entries(3)[0].multiplicity == 1;
  mismatches += !collision_ok;
  return {mismatches == 0,
          std::to_string(checked) + " connected motifs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome criterion11() {
  const std::vector<std::string> configs = {
      "[experiment]\nkind = bootstrap\nseeds = 1, 2\n[graphon]\nkind = additive\n[sparsity]\nc = 0.3\n"
      "[grid]\nn = 64, 96\n[motifs]\nK2 = K2\nK3 = K3\n[bootstrap]\nmethod = empirical, histogram\n"
      "replicates = 300\nlevels = 0.9, 0.95\n",
      "[experiment]\nkind = validate-theorem2\nseeds = 0, 1, 2\n[graphon]\nkind = additive\n[sparsity]\nc = 0.3\n"
      "[grid]\nn = 64, 128\n[motifs]\nK2 = K2\n2star = 3; 0-1,0-2\n[bootstrap]\nreplicates = 200\n"
      "truth_samples = 200\n",
      "[experiment]\nkind = coverage\n[graphon]\nkind = block\nmatrix = 2 1; 1 1\n[sparsity]\nc = 0.25\n"
      "[grid]\nn = 64\n[motifs]\nK2 = K2\n[bootstrap]\nmethod = empirical, histogram\nreplicates = 200\n"
      "[coverage]\nsimulations = 12\n",
      "[experiment]\nkind = histogram-error\n[graphon]\nkind = additive\n[sparsity]\nc = 0.3\n"
      "[grid]\nn = 64, 128\n[histogram]\nfits = 6\n",
      "[experiment]\nkind = clt-check\n[sparsity]\nc = 0.3\n[grid]\nn = 80, 120\n[motifs]\nK2 = K2\n"
      "[bootstrap]\ntruth_samples = 300\n",
      "[experiment]\nkind = oracle\n",
  };
  int identical = 0;
  std::string failed;
  for (const auto& text : configs) {
    const auto base = parse_config(text);
    const std::string echo = to_ini(base);
    std::vector<std::string> outputs;
    for (int threads : {1, 8}) {
      auto c = parse_config(echo);
      c.threads = threads;
      outputs.push_back(metrics_csv(run_experiment(c)));
    }
    if (outputs[0] == outputs[1] && outputs[0] == metrics_csv(run_experiment(base))) {
      ++identical;
    } else {
      failed += " " + to_string(base.kind);
    }
  }
  std::string detail = std::to_string(identical) + "/" + std::to_string(configs.size()) + " kinds bitwise identical";
  if (!failed.empty()) detail += "; differing:" + failed;
  return {identical == static_cast<int>(configs.size()), detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "merged-copy identity", 5, criterion1},
      {2, "unbiasedness", 1, criterion2},
      {3, "ER variance closed form", 1, criterion3},
      {4, "empirical graphon bootstrap KS", 300, criterion4},
      {5, "histogram bootstrap KS", 900, criterion5},
      {6, "histogram MSE rate", 600, criterion6},
      {7, "max deviation boundedness", 600, criterion7},
      {8, "CLT check", 120, criterion8},
      {9, "coverage", 1200, criterion9},
      {10, "combinatorial fixtures", 10, criterion10},
      {11, "determinism", 1e9, criterion11},
  };
  // criterion 1 and 2 share one oracle run; charge it to criterion 1
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed < c.budget_s;
    const bool pass = out.pass && in_budget;
    failures += !pass;
    std::printf("criterion %2d %s: %s (%s; %.1f s%s)\n", c.id, c.name, pass ? "PASS" : "FAIL", out.detail.c_str(),
                elapsed, in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
