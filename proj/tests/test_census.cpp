#include <doctest.h>

#include <bit>
#include <cmath>
#include <stdexcept>

#include "graphboot/census.hpp"
#include "test_util.hpp"

using namespace graphboot;

namespace {

// Independent count: every p-subset, induced mask compared by permutation search.
std::uint64_t brute_count(const Graph& g, const Motif& m) {
  const int p = m.vertex_count();
  const std::size_t n = g.node_count();
  std::vector<std::size_t> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  std::uint64_t count = 0;
  while (true) {
    PairMask mask = 0;
    for (int b = 0; b < p; ++b) {
      for (int a = 0; a < b; ++a) {
        if (g.has_edge(idx[a], idx[b])) mask |= PairMask{1} << (b * (b - 1) / 2 + a);
      }
    }
    if (std::popcount(mask) == m.edge_count() && testutil::brute_isomorphic(p, mask, p, m.mask())) ++count;
    int i = p - 1;
    while (i >= 0 && idx[i] == n - p + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
  return count;
}

}  // namespace

TEST_SUITE("census") {

TEST_CASE("induced copy examples") {
  const Graph k3 = testutil::make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
  const Graph path = testutil::make_graph(3, {{0, 1}, {1, 2}});
  const Graph c4 = testutil::make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  CHECK(count_induced_copies(k3, motifs::edge()) == 3);
  CHECK(count_induced_copies(path, motifs::two_star()) == 1);
  CHECK(count_induced_copies(c4, motifs::triangle()) == 0);
  CHECK_THROWS_AS(count_induced_copies(path, motifs::path(4)), std::invalid_argument);
}

TEST_CASE("density examples") {
  const Graph k3 = testutil::make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
  const Graph path = testutil::make_graph(3, {{0, 1}, {1, 2}});
  auto r = motif_density(k3, motifs::edge());
  CHECK(r.raw_density == 1.0);
  CHECK(r.edge_density == 1.0);
  r = motif_density(path, motifs::edge());
  CHECK(r.raw_density == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  r = motif_density(path, motifs::two_star());
  CHECK(r.raw_density == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  REQUIRE(r.normalized_density);
  CHECK(*r.normalized_density == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(r.ordered_match_count == 6);
}

TEST_CASE("edgeless graph leaves the normalized density undefined") {
  const auto r = motif_density(Graph(6), motifs::empty(3));
  CHECK(r.raw_density == 1.0);
  CHECK_FALSE(r.normalized_density);
  CHECK(motif_density(Graph(6), motifs::edge()).raw_density == 0.0);
}

TEST_CASE("raw densities weighted by N(R) sum to one") {
  for (Seed seed : {1, 2, 3}) {
    const Graph g = testutil::random_graph(14, 0.15 + 0.3 * static_cast<double>(seed - 1), seed);
    for (int p = 2; p <= 6; ++p) {
      const auto classes = isomorphism_classes(p);
      double total = 0.0;
      for (const auto& r : motif_densities(g, classes)) total += r.raw_density * labeled_copy_count(r.motif);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("counts match subset enumeration for every class with p <= 5") {
  const Graph g = testutil::random_graph(11, 0.4, 77);
  for (int p = 2; p <= 5; ++p) {
    for (const auto& m : isomorphism_classes(p)) {
      CAPTURE(m.key());
      const auto r = motif_density(g, m);
      CHECK(r.subset_count == brute_count(g, m));
      CHECK(r.ordered_match_count == r.subset_count * factorial(p));
      CHECK(r.raw_density == doctest::Approx(static_cast<double>(r.subset_count) /
                                             (binomial(11, p) * static_cast<double>(labeled_copy_count(m))))
                                 .epsilon(1e-14));
    }
  }
}

TEST_CASE("counts are invariant under relabeling") {
  const Graph g = testutil::random_graph(30, 0.3, 5);
  const Graph h = testutil::relabel(g, testutil::random_permutation(30, 6));
  for (int p = 3; p <= 5; ++p) {
    for (const auto& m : isomorphism_classes(p)) CHECK(count_induced_copies(g, m) == count_induced_copies(h, m));
  }
}

TEST_CASE("closed forms agree with ESU and are thread independent") {
  const Graph g = testutil::random_graph(40, 0.25, 8);
  const auto triads = triad_census(g);
  const auto quads = four_vertex_census(g);
  const auto esu3 = esu_census(g, 3, 1);
  const auto esu4 = esu_census(g, 4, 1);
  CHECK(esu_census(g, 4, 3) == esu4);
  CHECK(esu_census(g, 5, 1) == esu_census(g, 5, 4));
  for (const auto& [key, count] : esu3) CHECK(triads.at(key) == count);
  for (const auto& [key, count] : esu4) CHECK(quads.at(key) == count);
  std::uint64_t total = 0;
  for (const auto& [key, count] : quads) total += count;
  CHECK(total == static_cast<std::uint64_t>(binomial(40, 4)));
  for (const auto& m : isomorphism_classes(5, true)) CHECK(esu_count(g, m, 2) == count_induced_copies(g, m));
}

TEST_CASE("disconnected motifs beyond four vertices") {
  const Graph g = testutil::random_graph(10, 0.5, 12);
  for (const auto& m : isomorphism_classes(5)) {
    if (m.connected()) continue;
    CHECK(count_induced_copies(g, m) == brute_count(g, m));
  }
}

}
