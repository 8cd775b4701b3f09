#include <doctest.h>

#include <stdexcept>

#include "graphboot/graph.hpp"
#include "test_util.hpp"

using namespace graphboot;

TEST_SUITE("graph") {

TEST_CASE("adjacency is symmetric with an empty diagonal") {
  Graph g(70);
  CHECK(g.add_edge(3, 68));
  CHECK_FALSE(g.add_edge(68, 3));
  CHECK(g.has_edge(3, 68));
  CHECK(g.has_edge(68, 3));
  for (NodeId i = 0; i < 70; ++i) CHECK_FALSE(g.has_edge(i, i));
  CHECK(g.edge_count() == 1);
  CHECK_THROWS_AS(g.add_edge(5, 5), std::invalid_argument);
}

TEST_CASE("from_edges rejects malformed lists") {
  CHECK_THROWS_AS(testutil::make_graph(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(testutil::make_graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(testutil::make_graph(3, {{0, 3}}), std::invalid_argument);
}

TEST_CASE("edge density") {
  CHECK(testutil::make_graph(3, {{0, 1}, {0, 2}, {1, 2}}).edge_density() == 1.0);
  CHECK(testutil::make_graph(3, {{0, 1}, {1, 2}}).edge_density() == doctest::Approx(2.0 / 3.0));
  CHECK(Graph(5).edge_density() == 0.0);
}

TEST_CASE("degrees, codegrees, complement and induced subgraphs") {
  const Graph g = testutil::random_graph(90, 0.3, 11);
  const Graph c = g.complement();
  for (NodeId u = 0; u < 90; ++u) {
    CHECK(g.degree(u) + c.degree(u) == 89);
    for (NodeId v = u + 1; v < 90; v += 7) {
      std::size_t common = 0;
      for (NodeId w = 0; w < 90; ++w) common += g.has_edge(u, w) && g.has_edge(v, w);
      CHECK(g.codegree(u, v) == common);
      CHECK(g.has_edge(u, v) != c.has_edge(u, v));
    }
  }
  const std::vector<NodeId> nodes{4, 9, 17, 60};
  const Graph sub = g.induced(nodes);
  for (NodeId a = 0; a < 4; ++a) {
    for (NodeId b = 0; b < 4; ++b) CHECK(sub.has_edge(a, b) == (a != b && g.has_edge(nodes[a], nodes[b])));
  }
}

TEST_CASE("edges round trip through from_edges") {
  const Graph g = testutil::random_graph(40, 0.2, 3);
  const auto edges = g.edges();
  CHECK(Graph::from_edges(40, edges) == g);
  CHECK(edges.size() == g.edge_count());
}

}
