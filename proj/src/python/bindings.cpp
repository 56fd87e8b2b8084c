#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "netrecon/community.hpp"
#include "netrecon/config.hpp"
#include "netrecon/epidemic.hpp"
#include "netrecon/error.hpp"
#include "netrecon/metrics.hpp"
#include "netrecon/netgen.hpp"
#include "netrecon/pipeline.hpp"
#include "netrecon/reconstruct.hpp"
#include "netrecon/sampler.hpp"

namespace py = pybind11;
using namespace netrecon;

namespace {

std::vector<Edge> to_edges(const std::vector<std::pair<Vertex, Vertex>>& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v});
  return edges;
}

std::vector<std::pair<Vertex, Vertex>> from_edges(const Graph& g) {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

AttributeMap to_attributes(const std::vector<Category>& labels, Category g) {
  AttributeMap a{labels, g};
  a.validate(labels.size());
  return a;
}

}  // namespace

PYBIND11_MODULE(_netrecon, m) {
  m.doc() = "Network reconstruction from path samples with noisy attribute descriptions";

  // Later registrations are tried first, so the base class goes first.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ReconstructionIncomplete>(m, "ReconstructionIncomplete", base.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init<std::size_t>(), py::arg("n") = 0)
      .def_static(
          "from_edges",
          [](std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
            const auto list = to_edges(edges);
            return Graph::from_edges(n, list);
          },
          py::arg("n"), py::arg("edges"))
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def("degree", &Graph::degree)
      .def("has_edge", &Graph::has_edge)
      .def("neighbors",
           [](const Graph& g, Vertex v) {
             const auto s = g.neighbors(v);
             return std::vector<Vertex>(s.begin(), s.end());
           })
      .def("edges", &from_edges)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "Graph(n=" + std::to_string(g.num_vertices()) + ", m=" + std::to_string(g.num_edges()) + ")";
      });

  py::class_<Partition>(m, "Partition")
      .def(py::init<std::vector<std::uint32_t>>(), py::arg("labels"))
      .def_property_readonly("labels",
                             [](const Partition& p) {
                               const auto s = p.labels();
                               return std::vector<std::uint32_t>(s.begin(), s.end());
                             })
      .def_property_readonly("num_communities", &Partition::num_communities)
      .def("__len__", &Partition::size)
      .def("sizes", &Partition::sizes);

  py::class_<LfrParams>(m, "LfrParams")
      .def(py::init<>())
      .def_readwrite("n", &LfrParams::n)
      .def_readwrite("k_avg", &LfrParams::k_avg)
      .def_readwrite("k_max", &LfrParams::k_max)
      .def_readwrite("mu", &LfrParams::mu)
      .def_readwrite("tau1", &LfrParams::tau1)
      .def_readwrite("tau2", &LfrParams::tau2)
      .def_readwrite("c_min", &LfrParams::c_min)
      .def_readwrite("c_max", &LfrParams::c_max)
      .def_readwrite("seed", &LfrParams::seed);

  m.def(
      "generate_lfr_like",
      [](const LfrParams& p) {
        LfrNetwork net = generate_lfr_like(p);
        return py::make_tuple(std::move(net.graph), std::move(net.communities));
      },
      py::arg("params"), "Returns (graph, communities).");
  m.def("realized_mixing", &realized_mixing, py::arg("graph"), py::arg("partition"));

  py::enum_<AttributeShape>(m, "AttributeShape")
      .value("uniform", AttributeShape::uniform)
      .value("normal", AttributeShape::normal);

  py::class_<CategoryDistribution>(m, "CategoryDistribution")
      .def(py::init<std::vector<double>>(), py::arg("probabilities"))
      .def_static("uniform", &CategoryDistribution::uniform, py::arg("g"))
      .def_static("normal", &CategoryDistribution::normal, py::arg("g"))
      .def_property_readonly("g", &CategoryDistribution::g)
      .def("probability", &CategoryDistribution::probability)
      .def("mass", &CategoryDistribution::mass, py::arg("lo"), py::arg("hi"));

  m.def(
      "assign_attributes",
      [](const Graph& g, const CategoryDistribution& dist, std::uint64_t seed) {
        return assign_attributes(g, dist, seed).category;
      },
      py::arg("graph"), py::arg("dist"), py::arg("seed"));
  m.def(
      "make_assortative",
      [](const Graph& g, const std::vector<Category>& labels, Category categories, std::size_t attempts,
         std::uint64_t seed) {
        return make_assortative(g, to_attributes(labels, categories), attempts, seed).category;
      },
      py::arg("graph"), py::arg("labels"), py::arg("g"), py::arg("attempts"), py::arg("seed"));

  py::class_<Description>(m, "Description")
      .def(py::init([](Category lo, Category hi) { return Description{lo, hi}; }), py::arg("lo"), py::arg("hi"))
      .def_readonly("lo", &Description::lo)
      .def_readonly("hi", &Description::hi)
      .def("__repr__", [](const Description& d) {
        return "Description(" + std::to_string(d.lo) + ", " + std::to_string(d.hi) + ")";
      });
  m.def("pr_description", &pr_description, py::arg("description"), py::arg("dist"));

  py::enum_<PathMethod>(m, "PathMethod")
      .value("random", PathMethod::random)
      .value("high_degree", PathMethod::high_degree);

  py::class_<SampleForest>(m, "SampleForest")
      .def_property_readonly("size", &SampleForest::size)
      .def_property_readonly("num_respondents", &SampleForest::num_respondents)
      .def_property_readonly("num_friends", &SampleForest::num_friends)
      .def_readonly("num_trees", &SampleForest::num_trees);

  py::class_<Sample>(m, "Sample")
      .def_readonly("forest", &Sample::forest)
      .def_property_readonly("truth", [](const Sample& s) { return s.truth.vertex_of; });

  m.def(
      "draw_sample",
      [](const Graph& g, const std::vector<Category>& labels, Category categories, PathMethod method,
         std::size_t respondents, std::size_t max_friends, Category width, std::uint64_t seed) {
        return draw_sample(g, to_attributes(labels, categories), SampleSpec{method, max_friends, width}, respondents,
                           seed);
      },
      py::arg("graph"), py::arg("labels"), py::arg("g"), py::arg("method"), py::arg("respondents"),
      py::arg("max_friends") = 5, py::arg("width") = 1, py::arg("seed") = 1);

  m.def(
      "true_network",
      [](const Sample& s) {
        TrueNetwork tn = true_network(s.forest, s.truth);
        return py::make_tuple(std::move(tn.graph), std::move(tn.underlying));
      },
      py::arg("sample"), "Returns (graph, underlying vertex of each vertex).");

  py::class_<Reconstruction>(m, "Reconstruction")
      .def_readonly("graph", &Reconstruction::graph)
      .def_readonly("members", &Reconstruction::members)
      .def_readonly("attempts", &Reconstruction::attempts)
      .def_property_readonly("merges", [](const Reconstruction& r) { return r.log.events.size(); })
      .def_property_readonly("log", [](const Reconstruction& r) {
        py::list events;
        for (const auto& e : r.log.events) events.append(py::make_tuple(e.first, e.second, e.probability));
        return events;
      });

  m.def(
      "reconstruct",
      [](const SampleForest& forest, const CategoryDistribution& dist, std::size_t target_size, std::uint64_t seed,
         std::uint64_t max_attempts) {
        ReconstructionOptions options{target_size, seed, max_attempts};
        py::gil_scoped_release release;
        return reconstruct(forest, dist, options);
      },
      py::arg("forest"), py::arg("dist"), py::arg("target_size"), py::arg("seed") = 1, py::arg("max_attempts") = 0);

  m.def(
      "coalescing_precision",
      [](const Reconstruction& r, const Sample& s) { return coalescing_precision(r.log, s.truth); },
      py::arg("reconstruction"), py::arg("sample"));

  m.def(
      "detect_communities",
      [](const Graph& g, const std::string& method, double resolution, std::uint64_t seed) {
        return detect_communities(g, DetectorConfig{method, resolution, seed});
      },
      py::arg("graph"), py::arg("method") = "greedy-modularity", py::arg("resolution") = 1.0, py::arg("seed") = 1);
  m.def("modularity", &modularity, py::arg("graph"), py::arg("partition"), py::arg("resolution") = 1.0);

  m.def("nmi", &nmi, py::arg("a"), py::arg("b"));
  m.def(
      "spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return spearman(x, y); },
      py::arg("x"), py::arg("y"));
  m.def(
      "vertex_properties",
      [](const Graph& g, const Partition& p) {
        VertexProperties props = vertex_properties(g, p);
        py::dict d;
        d["degree"] = props.degree;
        d["k_out"] = props.k_out;
        d["embeddedness"] = props.embeddedness;
        return d;
      },
      py::arg("graph"), py::arg("partition"));

  py::class_<SirParams>(m, "SirParams")
      .def(py::init<>())
      .def_readwrite("init_frac", &SirParams::init_frac)
      .def_readwrite("beta", &SirParams::beta)
      .def_readwrite("infectious_steps", &SirParams::infectious_steps)
      .def_readwrite("runs", &SirParams::runs)
      .def_readwrite("seed", &SirParams::seed);

  m.def(
      "sir_run",
      [](const Graph& g, const std::vector<Vertex>& immunized, const SirParams& params, std::uint64_t seed) {
        return sir_run(g, immunized, params, seed);
      },
      py::arg("graph"), py::arg("immunized"), py::arg("params"), py::arg("seed"));
  m.def(
      "evaluate_immunization",
      [](const Graph& g, const std::vector<Vertex>& immunized, const SirParams& params, std::size_t threads) {
        EpidemicSummary s;
        {
          py::gil_scoped_release release;
          s = evaluate_immunization(g, immunized, params, threads);
        }
        return py::make_tuple(s.mean, s.stddev, s.runs);
      },
      py::arg("graph"), py::arg("immunized"), py::arg("params"), py::arg("threads") = 1,
      "Returns (mean, stddev, runs).");

  m.def(
      "run_pipeline",
      [](const std::filesystem::path& config, const std::filesystem::path& out, std::size_t jobs) {
        ExperimentConfig cfg = load_config(config);
        cfg.out = out;
        py::gil_scoped_release release;
        run_pipeline(cfg, jobs);
      },
      py::arg("config"), py::arg("out"), py::arg("jobs") = 1);
}
