#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stochmatch/edcs.hpp"
#include "stochmatch/errors.hpp"
#include "stochmatch/experiment.hpp"
#include "stochmatch/fractional.hpp"
#include "stochmatch/graph_io.hpp"
#include "stochmatch/sparsifier.hpp"

namespace py = pybind11;
using namespace stochmatch;

namespace {

using EdgeTuple = std::tuple<VertexId, VertexId, double>;

Graph make_graph(std::size_t n, const std::vector<EdgeTuple>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [u, v, w] : edges) es.push_back({u, v, w});
  return Graph(n, std::move(es));
}

std::vector<EdgeTuple> edge_list(const Graph& g) {
  std::vector<EdgeTuple> out;
  for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.weight);
  return out;
}

EdgeMask to_mask(const Graph& g, const std::vector<EdgeIndex>& edges) {
  return mask_from_indices(g.edge_count(), edges);
}

EstimatorOptions options(const std::string& mode, std::uint64_t samples, std::uint64_t seed,
                         std::size_t workers) {
  EstimatorOptions o;
  o.mode = parse_q_mode(mode);
  o.samples = samples;
  o.seed = RngSeed{seed, 0};
  o.workers = workers;
  return o;
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["ci_halfwidth"] = e.ci_halfwidth;
  d["samples"] = e.samples;
  d["mode"] = to_string(e.mode);
  return d;
}

}  // namespace

PYBIND11_MODULE(_stochmatch, m) {
  m.doc() = "Stochastic matching sparsifiers, EDCS and expected-matching estimators";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

  py::class_<StochasticGraph>(m, "StochasticGraph")
      .def(py::init([](std::size_t n, const std::vector<EdgeTuple>& edges, double p_v, double p_e,
                       bool weighted) { return StochasticGraph(make_graph(n, edges), p_v, p_e, weighted); }),
           py::arg("n"), py::arg("edges"), py::arg("p_v"), py::arg("p_e"), py::arg("weighted") = true)
      .def_property_readonly("n", &StochasticGraph::vertex_count)
      .def_property_readonly("m", &StochasticGraph::edge_count)
      .def_property_readonly("p_v", &StochasticGraph::p_v)
      .def_property_readonly("p_e", &StochasticGraph::p_e)
      .def_property_readonly("weighted", &StochasticGraph::weighted)
      .def_property_readonly("edges", [](const StochasticGraph& g) { return edge_list(g.graph()); })
      .def("__repr__", [](const StochasticGraph& g) {
        return "StochasticGraph(n=" + std::to_string(g.vertex_count()) + ", m=" +
               std::to_string(g.edge_count()) + ", p_v=" + format_real(g.p_v()) +
               ", p_e=" + format_real(g.p_e()) + ")";
      });

  m.def("parse_graph", &parse_graph_string, py::arg("text"));
  m.def("read_graph", &parse_graph_file, py::arg("path"));
  m.def("format_graph", &write_graph_string, py::arg("graph"));

  m.def(
      "max_weight_matching",
      [](const StochasticGraph& g, std::optional<std::vector<EdgeIndex>> active) {
        const auto r = active ? max_weight_matching(g.graph(), to_mask(g.graph(), *active))
                              : max_weight_matching(g.graph());
        return py::make_tuple(r.edges, r.total_weight);
      },
      py::arg("graph"), py::arg("edges") = py::none(),
      "Canonical maximum-weight matching of the base graph: (edge indices, weight).");

  m.def(
      "expected_matching",
      [](const StochasticGraph& g, std::optional<std::vector<EdgeIndex>> restrict_to, const std::string& mode,
         std::uint64_t samples, std::uint64_t seed, std::size_t workers) {
        std::optional<EdgeMask> mask;
        if (restrict_to) mask = to_mask(g.graph(), *restrict_to);
        py::gil_scoped_release release;
        auto e = expected_matching(g, mask, options(mode, samples, seed, workers));
        py::gil_scoped_acquire acquire;
        return estimate_dict(e);
      },
      py::arg("graph"), py::arg("edges") = py::none(), py::arg("mode") = "auto", py::arg("samples") = 100000,
      py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "matching_probabilities",
      [](const StochasticGraph& g, const std::string& mode, std::uint64_t samples, std::uint64_t seed,
         std::size_t workers) { return compute_edge_stats(g, options(mode, samples, seed, workers)).q; },
      py::arg("graph"), py::arg("mode") = "auto", py::arg("samples") = 100000, py::arg("seed") = 0,
      py::arg("workers") = 1);

  m.def(
      "sparsify",
      [](const StochasticGraph& g, double epsilon, std::optional<std::uint64_t> r_cap, std::uint64_t seed,
         std::size_t workers) {
        const auto params = compute_params(epsilon, g.p_v(), g.p_e(), r_cap);
        const auto s = build_sparsifier(g, params, RngSeed{seed, 0}, workers);
        py::dict d;
        d["edges"] = indices_from_mask(s.q_edges);
        d["counts"] = s.appear_count;
        d["R"] = params.R;
        d["R_formula"] = params.R_formula;
        d["tau"] = params.tau;
        d["max_degree"] = s.max_degree(g.graph());
        return d;
      },
      py::arg("graph"), py::arg("epsilon"), py::arg("r_cap") = py::none(), py::arg("seed") = 0,
      py::arg("workers") = 1);

  m.def(
      "edcs",
      [](const StochasticGraph& g, std::uint64_t beta, std::optional<std::uint64_t> beta_minus) {
        EdcsParams p;
        p.beta = beta;
        p.beta_minus = beta_minus.value_or(beta - 1);
        const auto h = build_edcs(g.graph(), p);
        py::dict d;
        d["edges"] = indices_from_mask(h.h_edges);
        d["certified"] = h.certified;
        d["violations"] = verify_edcs(g.graph(), h.h_edges, p).size();
        d["ratio"] = edcs_matching_ratio(g.graph(), h.h_edges);
        return d;
      },
      py::arg("graph"), py::arg("beta"), py::arg("beta_minus") = py::none());

  m.def(
      "approximation_ratio",
      [](const StochasticGraph& g, const std::vector<EdgeIndex>& q, const std::string& mode,
         std::uint64_t samples, std::uint64_t seed, std::size_t workers) {
        const auto mask = to_mask(g.graph(), q);
        const auto r = approximation_ratio(g, mask, options(mode, samples, seed, workers));
        py::dict d;
        d["ratio"] = r.ratio;
        d["ci_halfwidth"] = r.ci_halfwidth;
        d["numerator"] = estimate_dict(r.numerator);
        d["denominator"] = estimate_dict(r.denominator);
        return d;
      },
      py::arg("graph"), py::arg("edges"), py::arg("mode") = "auto", py::arg("samples") = 100000,
      py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto cfg = parse_config(config_json);
        std::vector<ExperimentRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_experiment(cfg);
        }
        return rows_to_csv(rows);
      },
      py::arg("config_json"), "Runs a sweep from a JSON config and returns the CSV text.");
}
