// graphbell command line tool. Every subcommand emits one JSON report
// ("schema": "graphbell/1") to stdout or -o FILE; errors go to stderr as
// JSON with a machine-readable code. Exit codes: 0 ok, 2 bad input,
// 3 unsatisfiable constraints, 4 budget exceeded, 5 failed internal or
// numeric check. Identical inputs and seeds give byte-identical reports
// apart from the timings_ms block.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "graphbell/bell.hpp"
#include "graphbell/bounds.hpp"
#include "graphbell/construction.hpp"
#include "graphbell/errors.hpp"
#include "graphbell/graph.hpp"
#include "graphbell/graph_state.hpp"
#include "graphbell/selftest.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace graphbell;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kSchema = "graphbell/1";

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

json graph_echo(const GraphSpec& g) { return json::parse(graph_to_json(g)); }

void emit(const json& report, const std::string& out) {
    const std::string text = report.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw InputError("IO", "cannot write '" + out + "'");
    f << text;
}

void emit_error(const std::string& command, const std::string& code, const std::string& message) {
    json e{{"schema", kSchema},
           {"command", command},
           {"version", kVersion},
           {"error", {{"code", code}, {"message", message}}}};
    std::cerr << e.dump(2) << "\n";
}

// shared input selection: a positional file (graph or expression, sniffed by
// the presence of "terms") or a --builtin name
struct InputOpts {
    std::string file;
    std::string builtin;
    int v1 = 0;  // 1-based pivot override, 0 = automatic
    int v2 = 0;
};

void add_input_flags(CLI::App* cmd, InputOpts& in, bool with_pivots = true) {
    cmd->add_option("file", in.file, "graph or expression file (JSON or edge list)");
    cmd->add_option("--builtin", in.builtin, "built-in graph name, see list-graphs");
    if (with_pivots) {
        cmd->add_option("--v1", in.v1, "pivot vertex (1-based, default: max degree)");
        cmd->add_option("--v2", in.v2, "second pivot (1-based, must neighbor --v1)");
    }
}

struct Loaded {
    bool is_expr = false;
    GraphSpec graph;
    BellExpression expr;
};

Loaded load_input(const InputOpts& in) {
    Loaded out;
    if (!in.builtin.empty() && !in.file.empty())
        throw InputError("BAD_FLAG", "give either a file or --builtin, not both");
    if (!in.builtin.empty()) {
        out.graph = builtin_graph(in.builtin);
        return out;
    }
    if (in.file.empty()) throw InputError("BAD_FLAG", "need a file or --builtin");
    std::ifstream f(in.file);
    if (!f) throw InputError("IO", "cannot open '" + in.file + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{' &&
        text.find("\"terms\"") != std::string::npos) {
        out.expr = parse_expression(text);
        out.is_expr = true;
        return out;
    }
    out.graph = parse_graph(text);
    return out;
}

// expression from whatever was loaded, building when given a graph
BellExpression to_expression(const Loaded& in, const InputOpts& opts,
                             const CoefficientSet* coeffs = nullptr) {
    if (in.is_expr) {
        if (opts.v1 != 0 || opts.v2 != 0)
            throw InputError("BAD_FLAG", "pivot flags apply to graph inputs only");
        return in.expr;
    }
    return build_expression(in.graph, opts.v1 - 1, opts.v2 - 1, coeffs);
}

json expression_summary(const BellExpression& expr) {
    json meta = json::parse(expression_to_json(expr)).at("meta");
    meta.erase("graph");
    meta.erase("relabeled_graph");
    return meta;
}

json strategy_json(const DeterministicStrategy& s) {
    json rows = json::array();
    for (const auto& row : s.outcomes) rows.push_back(row);
    return rows;
}

json bound_json(const BoundResult& b) {
    json j{{"value", b.value},
           {"mode", b.mode},
           {"enumerated", b.enumerated},
           {"is_lower_bound", b.mode == "heuristic"},
           {"strategy", strategy_json(b.strategy)}};
    if (b.mode == "heuristic") j["restarts"] = b.restarts;
    return j;
}

json sos_json(const SosReport& r) {
    return json{{"max_residual", r.max_residual},
                {"preconditions_ok", r.preconditions_ok},
                {"warnings", r.warnings}};
}

json checks_json(const std::vector<CheckResult>& checks) {
    json arr = json::array();
    for (const auto& c : checks) {
        json j{{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        arr.push_back(j);
    }
    return arr;
}

json selftest_json(const SelftestSummary& s) {
    json masks = json::array();
    for (const auto& m : s.masks) {
        json j{{"mask", m.mask}, {"verdict", m.result.verdict}};
        if (!m.result.kind.empty()) {
            j["witness_kind"] = m.result.kind;
            json idx = json::array();
            for (int i : m.result.indices) idx.push_back(i + 1);
            j["witness_words"] = idx;
            j["phase"] = m.result.phase;
        }
        if (m.result.stab_residual >= 0) j["stabilization_residual"] = m.result.stab_residual;
        masks.push_back(j);
    }
    return json{{"all_pass", s.all_pass}, {"checks", checks_json(s.checks)}, {"masks", masks}};
}

// CLI coefficient files are keyed externally: c1 by the exponent k, c2 by the
// original 1-based vertex id. Values are strings ("1/2", "0.3") or integers;
// bare JSON floats are rejected to keep the arithmetic exact.
CoefficientSet translate_coeffs(const std::string& path, const BellExpression& reference) {
    std::ifstream f(path);
    if (!f) throw InputError("IO", "cannot open '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw InputError("PARSE", std::string("bad coefficient JSON: ") + e.what());
    }
    auto value_of = [](const json& v) -> Rational {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
        throw InputError("PARSE", "coefficient values must be strings like \"1/2\" or \"0.3\"");
    };

    CoefficientSet cs = reference.meta.coeffs;
    const auto& perm = reference.meta.perm;  // perm[new] = old
    std::vector<int> new_of(perm.size());
    for (std::size_t nw = 0; nw < perm.size(); ++nw) new_of[perm[nw]] = static_cast<int>(nw);

    if (j.contains("c1"))
        for (const auto& [key, v] : j.at("c1").items()) {
            const int k = std::stoi(key);
            if (k < 1 || k >= reference.d)
                throw InputError("BAD_COEFF_KEY", "c1 exponent " + key + " out of range");
            cs.c1[k] = value_of(v);
        }
    if (j.contains("c2"))
        for (const auto& [key, v] : j.at("c2").items()) {
            const int old = std::stoi(key) - 1;
            if (old < 0 || old >= static_cast<int>(perm.size()))
                throw InputError("BAD_COEFF_KEY", "c2 vertex " + key + " out of range");
            const int nw = new_of[old];
            if (!cs.c2.count(nw))
                throw InputError("BAD_COEFF_KEY",
                                 "vertex " + key + " is not an extra neighbor of the pivot");
            cs.c2[nw] = value_of(v);
        }
    return cs;
}

struct Tolerances {
    double quantum_vs_bound = 1e-9;
    double sos = 1e-8;
    double violation_margin = 1e-9;
};

json tolerances_json(const Tolerances& t) {
    return json{{"quantum_vs_bound", t.quantum_vs_bound},
                {"sos", t.sos},
                {"violation_margin", t.violation_margin}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell inequalities for qudit graph states: build, bound, certify"};
    app.require_subcommand(1);
    std::function<int()> action;
    std::string active_command = "";

    // ---- validate ----
    {
        auto* cmd = app.add_subcommand("validate", "parse a graph and check its invariants");
        auto in = std::make_shared<InputOpts>();
        auto out = std::make_shared<std::string>();
        add_input_flags(cmd, *in, false);
        cmd->add_option("-o,--output", *out, "write the report here instead of stdout");
        cmd->callback([&action, &active_command, in, out]() {
            active_command = "validate";
            action = [in, out]() {
                const Loaded loaded = load_input(*in);
                if (loaded.is_expr) throw InputError("PARSE", "validate expects a graph, not an expression");
                validate_graph(loaded.graph);
                const auto pivots = choose_pivots(loaded.graph);
                json rep{{"schema", kSchema},
                         {"command", "validate"},
                         {"version", kVersion},
                         {"graph", graph_echo(loaded.graph)},
                         {"valid", true},
                         {"auto_pivots", {pivots.first + 1, pivots.second + 1}}};
                emit(rep, *out);
                return 0;
            };
        });
    }

    // ---- build ----
    {
        auto* cmd = app.add_subcommand("build", "construct the Bell expression for a graph");
        auto in = std::make_shared<InputOpts>();
        auto out = std::make_shared<std::string>();
        auto coeffs = std::make_shared<std::string>();
        add_input_flags(cmd, *in);
        cmd->add_option("--coeffs", *coeffs, "JSON file with custom mixing coefficients");
        cmd->add_option("-o,--output", *out, "write the expression here instead of stdout");
        cmd->callback([&action, &active_command, in, out, coeffs]() {
            active_command = "build";
            action = [in, out, coeffs]() {
                const Loaded loaded = load_input(*in);
                if (loaded.is_expr) throw InputError("PARSE", "build expects a graph, not an expression");
                BellExpression expr = build_expression(loaded.graph, in->v1 - 1, in->v2 - 1);
                if (!coeffs->empty()) {
                    const CoefficientSet cs = translate_coeffs(*coeffs, expr);
                    expr = build_expression(loaded.graph, expr.meta.v1, expr.meta.v2, &cs);
                }
                const std::string text = expression_to_json(expr);
                if (out->empty()) {
                    std::cout << text;
                } else {
                    std::ofstream f(*out);
                    if (!f) throw InputError("IO", "cannot write '" + *out + "'");
                    f << text;
                }
                return 0;
            };
        });
    }

    // ---- qbound ----
    {
        auto* cmd = app.add_subcommand("qbound", "algebraic quantum bound and ideal quantum value");
        auto in = std::make_shared<InputOpts>();
        auto out = std::make_shared<std::string>();
        auto threads = std::make_shared<int>(1);
        add_input_flags(cmd, *in);
        cmd->add_option("--threads", *threads, "worker threads");
        cmd->add_option("-o,--output", *out, "write the report here instead of stdout");
        cmd->callback([&action, &active_command, in, out, threads]() {
            active_command = "qbound";
            action = [in, out, threads]() {
                Timer timer;
                const BellExpression expr = to_expression(load_input(*in), *in);
                const double bq = quantum_bound(expr);
                const double qv = quantum_value(expr, ideal_realization(expr), *threads);
                const Tolerances tol;
                const double err = std::abs(qv - bq);
                json rep{{"schema", kSchema},
                         {"command", "qbound"},
                         {"version", kVersion},
                         {"graph", graph_echo(expr.meta.graph)},
                         {"expression", expression_summary(expr)},
                         {"beta_q", bq},
                         {"quantum_value", qv},
                         {"abs_error", err},
                         {"tolerance", tol.quantum_vs_bound},
                         {"pass", err <= tol.quantum_vs_bound},
                         {"threads", *threads},
                         {"timings_ms", {{"total", timer.ms()}}}};
                emit(rep, *out);
                return rep.at("pass").get<bool>() ? 0 : 5;
            };
        });
    }

    // ---- cbound ----
    {
        auto* cmd = app.add_subcommand("cbound", "classical bound by enumeration or search");
        auto in = std::make_shared<InputOpts>();
        auto out = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>("exact");
        auto budget = std::make_shared<std::uint64_t>(1000000000ULL);
        auto restarts = std::make_shared<int>(50);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto threads = std::make_shared<int>(1);
        add_input_flags(cmd, *in);
        cmd->add_option("--mode", *mode, "exact | naive | heuristic")
            ->check(CLI::IsMember({"exact", "naive", "heuristic"}));
        cmd->add_option("--budget", *budget, "max strategies to enumerate");
        cmd->add_option("--restarts", *restarts, "heuristic restarts");
        cmd->add_option("--seed", *seed, "heuristic base seed");
        cmd->add_option("--threads", *threads, "worker threads");
        cmd->add_option("-o,--output", *out, "write the report here instead of stdout");
        cmd->callback([&action, &active_command, in, out, mode, budget, restarts, seed, threads]() {
            active_command = "cbound";
            action = [in, out, mode, budget, restarts, seed, threads]() {
                Timer timer;
                const BellExpression expr = to_expression(load_input(*in), *in);
                BoundResult b;
                if (*mode == "exact")
                    b = exact_bound(expr, *budget, *threads);
                else if (*mode == "naive")
                    b = exact_bound_naive(expr, *budget, *threads);
                else
                    b = heuristic_bound(expr, *restarts, *seed, *threads);
                json rep{{"schema", kSchema},
                         {"command", "cbound"},
                         {"version", kVersion},
                         {"expression", expression_summary(expr)},
                         {"bound", bound_json(b)},
                         {"budget", *budget},
                         {"seed", *seed},
                         {"threads", *threads}};
                if (expr.meta.has_meta && expr.meta.variant == "qubit")
                    rep["classical_formula"] = qubit_classical_bound_formula(expr);
                if (expr.meta.has_meta) rep["graph"] = graph_echo(expr.meta.graph);
                rep["timings_ms"] = {{"total", timer.ms()}};
                emit(rep, *out);
                return 0;
            };
        });
    }

    // ---- sos-check ----
    {
        auto* cmd = app.add_subcommand("sos-check", "verify the sum-of-squares identity");
        auto in = std::make_shared<InputOpts>();
        auto out = std::make_shared<std::string>();
        auto trials = std::make_shared<int>(20);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto nrandom = std::make_shared<int>(0);
        add_input_flags(cmd, *in);
        cmd->add_option("--trials", *trials, "random vectors per realization");
        cmd->add_option("--seed", *seed, "base seed");
        cmd->add_option("--random", *nrandom, "additionally test this many random order-d realizations");
        cmd->add_option("-o,--output", *out, "write the report here instead of stdout");
        cmd->callback([&action, &active_command, in, out, trials, seed, nrandom]() {
            active_command = "sos-check";
            action = [in, out, trials, seed, nrandom]() {
                Timer timer;
                const BellExpression expr = to_expression(load_input(*in), *in);
                const Tolerances tol;
                const SosReport ideal = sos_residual(expr, ideal_realization(expr), *trials, *seed);
                bool pass = ideal.max_residual <= tol.sos && ideal.preconditions_ok;
                json randoms = json::array();
                for (int i = 0; i < *nrandom; ++i) {
                    const std::uint64_t s = *seed + 1 + i;
                    const SosReport r = sos_residual(expr, random_realization(expr, s), *trials, *seed);
                    pass = pass && r.max_residual <= tol.sos && r.preconditions_ok;
                    json jr = sos_json(r);
                    jr["realization_seed"] = s;
                    randoms.push_back(jr);
                }
                json rep{{"schema", kSchema},
                         {"command", "sos-check"},
                         {"version", kVersion},
                         {"graph", graph_echo(expr.meta.graph)},
                         {"expression", expression_summary(expr)},
                         {"ideal", sos_json(ideal)},
                         {"random_realizations", randoms},
                         {"tolerance", tol.sos},
                         {"pass", pass},
                         {"trials", *trials},
                         {"seed", *seed},
                         {"timings_ms", {{"total", timer.ms()}}}};
                emit(rep, *out);
                return pass ? 0 : 5;
            };
        });
    }

    // ---- selftest ----
    {
        auto* cmd = app.add_subcommand("selftest", "d = 3 operator relations and transposition analysis");
        auto in = std::make_shared<InputOpts>();
        auto out = std::make_shared<std::string>();
        add_input_flags(cmd, *in);
        cmd->add_option("-o,--output", *out, "write the report here instead of stdout");
        cmd->callback([&action, &active_command, in, out]() {
            active_command = "selftest";
            action = [in, out]() {
                Timer timer;
                const BellExpression expr = to_expression(load_input(*in), *in);
                const SelftestSummary s = run_selftest_suite(expr);
                json rep{{"schema", kSchema},
                         {"command", "selftest"},
                         {"version", kVersion},
                         {"graph", graph_echo(expr.meta.graph)},
                         {"expression", expression_summary(expr)},
                         {"selftest", selftest_json(s)},
                         {"timings_ms", {{"total", timer.ms()}}}};
                emit(rep, *out);
                return s.all_pass ? 0 : 5;
            };
        });
    }

    // ---- analyze ----
    {
        auto* cmd = app.add_subcommand("analyze", "full report: bounds, SOS, violation, optional selftest");
        auto in = std::make_shared<InputOpts>();
        auto out = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>("exact");
        auto budget = std::make_shared<std::uint64_t>(1000000000ULL);
        auto restarts = std::make_shared<int>(50);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto threads = std::make_shared<int>(1);
        auto trials = std::make_shared<int>(8);
        auto with_selftest = std::make_shared<bool>(false);
        add_input_flags(cmd, *in);
        cmd->add_option("--mode", *mode, "classical bound mode: exact | naive | heuristic")
            ->check(CLI::IsMember({"exact", "naive", "heuristic"}));
        cmd->add_option("--budget", *budget, "max strategies to enumerate");
        cmd->add_option("--restarts", *restarts, "heuristic restarts");
        cmd->add_option("--seed", *seed, "base seed for every stochastic step");
        cmd->add_option("--threads", *threads, "worker threads");
        cmd->add_option("--trials", *trials, "random vectors for the SOS check");
        cmd->add_flag("--selftest", *with_selftest, "include the d = 3 selftest battery");
        cmd->add_option("-o,--output", *out, "write the report here instead of stdout");
        cmd->callback(
            [&action, &active_command, in, out, mode, budget, restarts, seed, threads, trials,
             with_selftest]() {
                active_command = "analyze";
                action = [in, out, mode, budget, restarts, seed, threads, trials, with_selftest]() {
                    Timer timer;
                    const BellExpression expr = to_expression(load_input(*in), *in);
                    const Tolerances tol;
                    const double bq = quantum_bound(expr);
                    const double qv = quantum_value(expr, ideal_realization(expr), *threads);
                    const bool q_ok = std::abs(qv - bq) <= tol.quantum_vs_bound;

                    json sos = nullptr;
                    bool sos_ok = true;
                    if (expr.meta.variant == "qudit") {
                        const SosReport r = sos_residual(expr, ideal_realization(expr), *trials, *seed);
                        sos_ok = r.max_residual <= tol.sos && r.preconditions_ok;
                        sos = sos_json(r);
                    }

                    BoundResult b;
                    try {
                        if (*mode == "exact")
                            b = exact_bound(expr, *budget, *threads);
                        else if (*mode == "naive")
                            b = exact_bound_naive(expr, *budget, *threads);
                        else
                            b = heuristic_bound(expr, *restarts, *seed, *threads);
                    } catch (const BudgetError& e) {
                        throw BudgetError(std::string(e.what()) +
                                          "; rerun with --mode heuristic for a lower bound");
                    }
                    const ViolationReport v = make_violation_report(b, qv);

                    json selftest = nullptr;
                    bool selftest_ok = true;
                    if (*with_selftest) {
                        const SelftestSummary s = run_selftest_suite(expr);
                        selftest_ok = s.all_pass;
                        selftest = selftest_json(s);
                    }

                    const bool all_pass = q_ok && sos_ok && v.violated && selftest_ok;
                    json rep{{"schema", kSchema},
                             {"command", "analyze"},
                             {"version", kVersion},
                             {"graph", graph_echo(expr.meta.graph)},
                             {"expression", expression_summary(expr)},
                             {"beta_q", bq},
                             {"quantum_value", qv},
                             {"sos", sos},
                             {"classical", bound_json(b)},
                             {"violation",
                              {{"classical_bound", v.classical_bound},
                               {"quantum_value", v.quantum_value},
                               {"ratio", v.ratio},
                               {"violated", v.violated},
                               {"no_detected_violation", !v.violated},
                               {"classical_mode", v.classical_mode}}},
                             {"selftest", selftest},
                             {"checks",
                              {{"quantum_matches_bound", q_ok},
                               {"sos_within_tolerance", sos_ok},
                               {"violation_detected", v.violated},
                               {"selftest_all_pass", selftest_ok}}},
                             {"all_pass", all_pass},
                             {"tolerances", tolerances_json(tol)},
                             {"seed", *seed},
                             {"budget", *budget},
                             {"threads", *threads},
                             {"timings_ms", {{"total", timer.ms()}}}};
                    if (expr.meta.variant == "qubit")
                        rep["classical_formula"] = qubit_classical_bound_formula(expr);
                    emit(rep, *out);
                    return all_pass ? 0 : 5;
                };
            });
    }

    // ---- dump-state ----
    {
        auto* cmd = app.add_subcommand("dump-state", "graph state amplitudes as [re, im] pairs");
        auto in = std::make_shared<InputOpts>();
        auto out = std::make_shared<std::string>();
        add_input_flags(cmd, *in, false);
        cmd->add_option("-o,--output", *out, "write the report here instead of stdout");
        cmd->callback([&action, &active_command, in, out]() {
            active_command = "dump-state";
            action = [in, out]() {
                const Loaded loaded = load_input(*in);
                const GraphSpec g = loaded.is_expr ? loaded.expr.meta.graph : loaded.graph;
                validate_graph(g);
                StateVector psi = synthesize_state(g);
                if (psi.dim() > 1000000)
                    throw InputError("TOO_BIG", "state has " + std::to_string(psi.dim()) +
                                                    " amplitudes; dump limit is 10^6");
                json amps = json::array();
                for (const auto& a : psi.amp) amps.push_back({a.real(), a.imag()});
                json rep{{"schema", kSchema},
                         {"command", "dump-state"},
                         {"version", kVersion},
                         {"graph", graph_echo(g)},
                         {"d", g.d},
                         {"sites", g.n},
                         {"stabilization_residual", verify_stabilization(g, psi)},
                         {"amplitudes", amps}};
                emit(rep, *out);
                return 0;
            };
        });
    }

    // ---- list-graphs ----
    {
        auto* cmd = app.add_subcommand("list-graphs", "built-in graph families");
        auto out = std::make_shared<std::string>();
        cmd->add_option("-o,--output", *out, "write the report here instead of stdout");
        cmd->callback([&action, &active_command, out]() {
            active_command = "list-graphs";
            action = [out]() {
                json rep{{"schema", kSchema},
                         {"command", "list-graphs"},
                         {"version", kVersion},
                         {"builtins", builtin_graph_help()}};
                emit(rep, *out);
                return 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        return action();
    } catch (const InputError& e) {
        emit_error(active_command, e.code(), e.what());
        return 2;
    } catch (const ConstraintError& e) {
        emit_error(active_command, "CONSTRAINT", e.what());
        return 3;
    } catch (const BudgetError& e) {
        emit_error(active_command, "BUDGET", e.what());
        return 4;
    } catch (const InternalCheckError& e) {
        emit_error(active_command, "INTERNAL_CHECK", e.what());
        return 5;
    } catch (const std::exception& e) {
        emit_error(active_command, "INTERNAL", e.what());
        return 5;
    }
}
