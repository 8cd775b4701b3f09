#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "graphboot/bootstrap.hpp"
#include "graphboot/census.hpp"
#include "graphboot/combinatorics.hpp"
#include "graphboot/experiment.hpp"
#include "graphboot/graph.hpp"
#include "graphboot/graphon.hpp"
#include "graphboot/histogram.hpp"
#include "graphboot/io.hpp"
#include "graphboot/motif.hpp"

namespace py = pybind11;
using namespace graphboot;

namespace {

GraphonSpec make_spec(const std::string& kind, const std::vector<std::vector<double>>& matrix) {
  switch (parse_graphon_kind(kind)) {
    case GraphonKind::constant:
      return GraphonSpec::constant();
    case GraphonKind::additive:
      return GraphonSpec::additive();
    case GraphonKind::block:
      return GraphonSpec::block(matrix);
  }
  throw std::invalid_argument("unknown graphon kind");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "graphboot native core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<GraphFormatError>(m, "GraphFormatError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init([](std::size_t n, const std::vector<Edge>& edges) { return Graph::from_edges(n, edges); }),
           py::arg("node_count"), py::arg("edges"))
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("has_edge", &Graph::has_edge, py::arg("u"), py::arg("v"))
      .def("edges", &Graph::edges)
      .def("edge_density", &Graph::edge_density)
      .def("to_text", [](const Graph& g) {
        std::ostringstream out;
        write_graph(g, out);
        return out.str();
      })
      .def_static("from_text", [](const std::string& text) {
        std::istringstream in(text);
        return read_graph(in);
      })
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.node_count()) + " edges=" + std::to_string(g.edge_count()) + ">";
      });

  m.def("load_graph", &load_graph, py::arg("path"));
  m.def("save_graph", &save_graph, py::arg("graph"), py::arg("path"));

  py::class_<Motif>(m, "Motif")
      .def(py::init([](const std::string& literal) { return Motif::parse(literal); }), py::arg("literal"))
      .def_property_readonly("vertex_count", &Motif::vertex_count)
      .def_property_readonly("edge_count", &Motif::edge_count)
      .def_property_readonly("key", &Motif::key)
      .def_property_readonly("name", &Motif::name)
      .def_property_readonly("literal", &Motif::literal)
      .def("edges", &Motif::edges)
      .def("__repr__", [](const Motif& mo) { return "<Motif " + mo.literal() + ">"; });

  m.def("labeled_copy_count", &labeled_copy_count, py::arg("motif"));
  m.def("automorphism_count", &automorphism_count, py::arg("motif"));
  m.def("isomorphism_classes", &isomorphism_classes, py::arg("p"), py::arg("connected_only") = false);

  m.def("count_induced_copies", &count_induced_copies, py::arg("graph"), py::arg("motif"));
  m.def("motif_density", [](const Graph& g, const Motif& mo) { return motif_density(g, mo).raw_density; },
        py::arg("graph"), py::arg("motif"));

  m.def(
      "sample_graph",
      [](const std::string& kind, double rho, std::size_t n, Seed seed,
         const std::vector<std::vector<double>>& matrix) {
        auto s = sample_graph(make_spec(kind, matrix), rho, n, seed);
        return py::make_tuple(std::move(s.graph), s.latent.values);
      },
      py::arg("kind"), py::arg("rho"), py::arg("n"), py::arg("seed") = 0,
      py::arg("matrix") = std::vector<std::vector<double>>{});

  m.def(
      "true_motif_probability",
      [](const std::string& kind, double rho, const Motif& mo, const std::vector<std::vector<double>>& matrix) {
        const auto spec = make_spec(kind, matrix);
        return true_motif_probability(spec, rho, mo, {exact_method_for(spec), 0, 0}).value;
      },
      py::arg("kind"), py::arg("rho"), py::arg("motif"), py::arg("matrix") = std::vector<std::vector<double>>{});

  m.def("select_bin_count", &select_bin_count, py::arg("n"), py::arg("edge_density"));
  m.def(
      "fit_histogram",
      [](const Graph& g, std::size_t r, int restarts, int max_sweeps, Seed seed) {
        const auto model = fit_histogram(g, r, {restarts, max_sweeps, 1}, seed);
        py::dict out;
        out["bin_count"] = model.bin_count();
        out["assignment"] = model.assignment();
        out["block_probs"] = model.block_probs();
        out["loss"] = model.loss();
        return out;
      },
      py::arg("graph"), py::arg("bins"), py::arg("restarts") = 8, py::arg("max_sweeps") = 50, py::arg("seed") = 0);

  m.def(
      "variance_sigma2",
      [](const std::string& kind, double rho, const Motif& mo, std::size_t n,
         const std::vector<std::vector<double>>& matrix) {
        return variance_sigma2(LinkProvider::true_graphon(make_spec(kind, matrix), rho), mo, n);
      },
      py::arg("kind"), py::arg("rho"), py::arg("motif"), py::arg("n"),
      py::arg("matrix") = std::vector<std::vector<double>>{});

  m.def(
      "bootstrap_json",
      [](const Graph& g, const std::vector<Motif>& motifs, const std::string& method, std::size_t replicates,
         std::size_t size, const std::vector<double>& levels, Seed seed, int threads) {
        BootstrapPlan plan;
        plan.method = parse_bootstrap_method(method);
        plan.motifs = motifs;
        plan.replicates = replicates;
        plan.m = size;
        plan.levels = levels;
        plan.seed = seed;
        plan.threads = threads;
        BootstrapResult result;
        {
          py::gil_scoped_release release;
          result = run_bootstrap(g, plan);
        }
        return to_json(result).dump();
      },
      py::arg("graph"), py::arg("motifs"), py::arg("method") = "empirical", py::arg("replicates") = 2000,
      py::arg("size") = 0, py::arg("levels") = std::vector<double>{0.9}, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def(
      "run_experiment_text",
      [](const std::string& text, int threads) {
        auto config = parse_config(text);
        if (threads > 0) config.threads = threads;
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(config);
        }
        return py::make_tuple(metrics_csv(report), report_json(report).dump());
      },
      py::arg("config"), py::arg("threads") = 0);

  m.def("canonical_config", [](const std::string& text) { return to_ini(parse_config(text)); }, py::arg("config"));

  m.attr("__version__") = GRAPHBOOT_VERSION;
}
