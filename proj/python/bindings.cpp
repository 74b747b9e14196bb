// Python bindings for the graphbell core. The module keeps the surface thin:
// graphs and expressions travel as JSON text (the same format the CLI reads
// and writes), results come back as small dicts or scalars. The pure-python
// package in python/graphbell wraps this with dict-friendly helpers.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphbell/bell.hpp"
#include "graphbell/bounds.hpp"
#include "graphbell/construction.hpp"
#include "graphbell/errors.hpp"
#include "graphbell/graph.hpp"
#include "graphbell/graph_state.hpp"
#include "graphbell/selftest.hpp"

namespace py = pybind11;
using json = nlohmann::ordered_json;
using namespace graphbell;

namespace {

BellExpression expr_from_text(const std::string& text) { return parse_expression(text); }

json bound_to_json(const BoundResult& b) {
    json rows = json::array();
    for (const auto& row : b.strategy.outcomes) rows.push_back(row);
    json j{{"value", b.value},
           {"mode", b.mode},
           {"enumerated", b.enumerated},
           {"strategy", rows}};
    if (b.mode == "heuristic") j["restarts"] = b.restarts;
    return j;
}

json sos_to_json(const SosReport& r) {
    return json{{"max_residual", r.max_residual},
                {"preconditions_ok", r.preconditions_ok},
                {"warnings", r.warnings}};
}

py::object to_py(const json& j) {
    py::module_ pyjson = py::module_::import("json");
    return pyjson.attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bell inequalities for qudit graph states (C++ core)";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ConstraintError>(m, "ConstraintError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
    py::register_exception<InternalCheckError>(m, "InternalCheckError", PyExc_RuntimeError);

    m.def("builtin_graph", [](const std::string& name) { return graph_to_json(builtin_graph(name)); },
          py::arg("name"), "Named graph family as JSON text, see builtin_graph_names()");

    m.def("builtin_graph_names", []() { return builtin_graph_help(); },
          "One help line per built-in graph family");

    m.def("parse_graph",
          [](const std::string& text) {
              const GraphSpec g = parse_graph(text);
              validate_graph(g);
              return graph_to_json(g);
          },
          py::arg("text"), "Parse and validate a graph (JSON or edge list), echo as JSON");

    m.def("build_expression",
          [](const std::string& graph_text, int v1, int v2) {
              const GraphSpec g = parse_graph(graph_text);
              return expression_to_json(build_expression(g, v1 - 1, v2 - 1));
          },
          py::arg("graph_text"), py::arg("v1") = 0, py::arg("v2") = 0,
          "Bell expression for a graph as JSON text; pivots are 1-based, 0 = automatic");

    m.def("quantum_bound",
          [](const std::string& expr_text) { return quantum_bound(expr_from_text(expr_text)); },
          py::arg("expression"), "Algebraic quantum bound of an expression");

    m.def("quantum_value_ideal",
          [](const std::string& expr_text, int threads) {
              const BellExpression expr = expr_from_text(expr_text);
              return quantum_value(expr, ideal_realization(expr), threads);
          },
          py::arg("expression"), py::arg("threads") = 1,
          "Expectation value at the ideal realization");

    m.def("exact_bound",
          [](const std::string& expr_text, std::uint64_t budget, int threads) {
              return to_py(bound_to_json(exact_bound(expr_from_text(expr_text), budget, threads)));
          },
          py::arg("expression"), py::arg("budget") = 1000000000ULL, py::arg("threads") = 1,
          "Exact classical bound by pivot-folded enumeration");

    m.def("heuristic_bound",
          [](const std::string& expr_text, int restarts, std::uint64_t seed, int threads) {
              return to_py(
                  bound_to_json(heuristic_bound(expr_from_text(expr_text), restarts, seed, threads)));
          },
          py::arg("expression"), py::arg("restarts") = 50, py::arg("seed") = 0,
          py::arg("threads") = 1, "Classical lower bound by seeded local search");

    m.def("sos_residual",
          [](const std::string& expr_text, std::int64_t realization_seed, int trials,
             std::uint64_t seed) {
              const BellExpression expr = expr_from_text(expr_text);
              const Realization real =
                  realization_seed < 0
                      ? ideal_realization(expr)
                      : random_realization(expr, static_cast<std::uint64_t>(realization_seed));
              return to_py(sos_to_json(sos_residual(expr, real, trials, seed)));
          },
          py::arg("expression"), py::arg("realization_seed") = -1, py::arg("trials") = 20,
          py::arg("seed") = 0,
          "Squares-identity residual; realization_seed < 0 uses the ideal realization");

    m.def("selftest",
          [](const std::string& expr_text) {
              const SelftestSummary s = run_selftest_suite(expr_from_text(expr_text));
              json checks = json::array();
              for (const auto& c : s.checks) {
                  json j{{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}};
                  if (!c.detail.empty()) j["detail"] = c.detail;
                  checks.push_back(j);
              }
              json masks = json::array();
              for (const auto& e : s.masks)
                  masks.push_back(json{{"mask", e.mask}, {"verdict", e.result.verdict}});
              return to_py(json{{"all_pass", s.all_pass}, {"checks", checks}, {"masks", masks}});
          },
          py::arg("expression"), "d = 3 operator relation battery and transposition analysis");

    m.def("state_amplitudes",
          [](const std::string& graph_text) {
              const GraphSpec g = parse_graph(graph_text);
              validate_graph(g);
              StateVector psi = synthesize_state(g);
              if (psi.dim() > 1000000)
                  throw InputError("TOO_BIG", "state has " + std::to_string(psi.dim()) +
                                                  " amplitudes; dump limit is 10^6");
              return psi.amp;
          },
          py::arg("graph_text"), "Graph state amplitudes in row-major site order");

    m.attr("__version__") = "0.1.0";
}
