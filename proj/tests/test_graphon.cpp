#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "graphboot/graphon.hpp"
#include "test_util.hpp"

using namespace graphboot;

TEST_SUITE("graphon") {

TEST_CASE("link probability examples") {
  CHECK(link_probability(GraphonSpec::constant(), 0.3, 0.1, 0.9) == doctest::Approx(0.3));
  CHECK(link_probability(GraphonSpec::additive(), 0.4, 0.25, 0.25) == doctest::Approx(0.2));
  CHECK_THROWS_AS(link_probability(GraphonSpec::additive(), 0.6, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(link_probability(GraphonSpec::constant(), 0.3, 1.5, 0.5), std::invalid_argument);
}

TEST_CASE("shapes integrate to one and are symmetric") {
  const auto block = GraphonSpec::block({{3.0, 1.0}, {1.0, 0.5}});
  for (const auto& spec : {GraphonSpec::constant(), GraphonSpec::additive(), block}) {
    CHECK(std::abs(spec.integral() - 1.0) < 1e-9);
    Rng rng(4);
    double total = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double u = rng.uniform();
      const double v = rng.uniform();
      CHECK(spec.weight(u, v) == spec.weight(v, u));
      CHECK(spec.weight(u, v) <= spec.sup());
      total += spec.weight(u, v);
    }
    CHECK(total / 20000.0 == doctest::Approx(1.0).epsilon(0.02));
  }
  CHECK(block.weight(0.1, 0.1) == doctest::Approx(3.0 / 1.375));
  CHECK(GraphonSpec::additive().lipschitz_constant() == 1.0);
  CHECK_FALSE(block.lipschitz_constant());
}

TEST_CASE("invalid block matrices") {
  CHECK_THROWS_AS(GraphonSpec::block({{1.0, 2.0}, {0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(GraphonSpec::block({{-1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(GraphonSpec::block({{0.0, 0.0}, {0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(GraphonSpec::block({{1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("sparsity schedules") {
  CHECK(SparsitySchedule::constant(0.2).rho(1000) == 0.2);
  CHECK(SparsitySchedule::power(2.0, 0.5).rho(100) == doctest::Approx(0.2));
  CHECK_THROWS_AS(SparsitySchedule::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SparsitySchedule::power(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_graph(GraphonSpec::additive(), SparsitySchedule::constant(0.8), 10, 0),
                  std::invalid_argument);
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto a = sample_graph(GraphonSpec::additive(), 0.3, 200, 99);
  const auto b = sample_graph(GraphonSpec::additive(), 0.3, 200, 99);
  const auto c = sample_graph(GraphonSpec::additive(), 0.3, 200, 100);
  CHECK(a.graph == b.graph);
  CHECK(a.latent.values == b.latent.values);
  CHECK_FALSE(a.graph == c.graph);
  CHECK(a.latent.values.size() == 200);
  for (double u : a.latent.values) CHECK((u > 0.0 && u < 1.0));
}

TEST_CASE("degenerate and dense limits") {
  const auto full = sample_graph(GraphonSpec::constant(), 1.0, 30, 1);
  CHECK(full.graph.edge_count() == 30 * 29 / 2);
  const auto empty = sample_graph(GraphonSpec::constant(), SparsitySchedule::constant(1e-12), 200, 1);
  CHECK(empty.graph.edge_count() == 0);
  CHECK_THROWS_AS(sample_graph(GraphonSpec::constant(), 0.3, 1, 0), std::invalid_argument);
}

TEST_CASE("observed density of a constant graphon sample") {
  const auto s = sample_graph(GraphonSpec::constant(), 0.3, 1000, 17);
  const double se = std::sqrt(0.3 * 0.7 / (1000.0 * 999.0 / 2.0));
  CHECK(std::abs(s.graph.edge_density() - 0.3) < 3.0 * se);
}

TEST_CASE("true probability examples") {
  const auto k3 = true_motif_probability(GraphonSpec::constant(), 0.5, motifs::triangle());
  CHECK(k3.value == 0.125);
  CHECK(k3.std_error == 0.0);
  CHECK(true_motif_probability(GraphonSpec::constant(), 0.5, motifs::two_star()).value == 0.125);
  CHECK(true_motif_probability(GraphonSpec::constant(), 0.37, motifs::edge()).value == 0.37);
  const auto mc = true_motif_probability(GraphonSpec::additive(), 0.3, motifs::edge(),
                                         {ProbabilityMethod::monte_carlo, 1'000'000, 3});
  CHECK(mc.std_error > 0.0);
  CHECK(std::abs(mc.value - 0.3) < 3.0 * mc.std_error);
  CHECK_THROWS_AS(true_motif_probability(GraphonSpec::additive(), 0.3, motifs::edge()), std::domain_error);
  CHECK_THROWS_AS(
      true_motif_probability(GraphonSpec::constant(), 0.3, motifs::edge(), {ProbabilityMethod::polynomial, 0, 0}),
      std::domain_error);
}

TEST_CASE("additive polynomial integration") {
  const auto spec = GraphonSpec::additive();
  const auto poly = [&](const Motif& m) {
    return true_motif_probability(spec, 0.4, m, {ProbabilityMethod::polynomial, 0, 0}).value;
  };
  CHECK(poly(motifs::edge()) == doctest::Approx(0.4).epsilon(1e-14));
  // E[(u+v)(u+w)] = 13/12, E[(u+v)(v+w)(w+u)] = 5/4
  CHECK(poly(motifs::triangle()) == doctest::Approx(0.064 * 1.25).epsilon(1e-14));
  CHECK(poly(motifs::two_star()) == doctest::Approx(0.16 * 13.0 / 12.0 - 0.064 * 1.25).epsilon(1e-14));
  for (const auto& m : isomorphism_classes(4)) {
    const auto mc = true_motif_probability(spec, 0.4, m, {ProbabilityMethod::monte_carlo, 200'000, 5});
    CHECK(std::abs(poly(m) - mc.value) <= 4.0 * mc.std_error + 1e-12);
  }
}

TEST_CASE("block closed form agrees with Monte Carlo for p <= 4") {
  const auto spec = GraphonSpec::block({{1.6, 0.4, 0.2}, {0.4, 1.2, 0.6}, {0.2, 0.6, 1.0}});
  const double rho = 0.4;
  for (int p = 2; p <= 4; ++p) {
    for (const auto& m : isomorphism_classes(p)) {
      CAPTURE(m.key());
      const auto exact = true_motif_probability(spec, rho, m);
      const auto mc = true_motif_probability(spec, rho, m, {ProbabilityMethod::monte_carlo, 1'000'000, 21});
      CHECK(std::abs(exact.value - mc.value) <= 4.0 * mc.std_error);
      CHECK(exact.value <= std::pow(rho * spec.sup(), m.edge_count()) + 1e-15);
    }
  }
}

TEST_CASE("probabilities of all classes, weighted by N(R), sum to one") {
  for (const auto& spec : {GraphonSpec::constant(), GraphonSpec::additive(), GraphonSpec::block({{2, 1}, {1, 0}})}) {
    double total = 0.0;
    for (const auto& m : isomorphism_classes(4)) {
      total += true_motif_probability(spec, 0.35, m, {exact_method_for(spec), 0, 0}).value * labeled_copy_count(m);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  }
}

}
