// End-to-end tests for the graphbell command line tool. The binary under test
// is passed as the last argument (wired up by CMake), every case shells out to
// it and inspects exit code, stdout JSON and stderr JSON.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

using json = nlohmann::ordered_json;

namespace {

std::string g_cli;      // path to the graphbell binary
std::string g_scratch;  // per-process temp dir for redirects and fixture files

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string write_fixture(const std::string& name, const std::string& text) {
    const std::string path = g_scratch + "/" + name;
    std::ofstream f(path);
    f << text;
    return path;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string base = g_scratch + "/run" + std::to_string(counter++);
    const std::string cmd =
        "\"" + g_cli + "\" " + args + " >" + base + ".out 2>" + base + ".err";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    if (WIFEXITED(raw)) r.exit_code = WEXITSTATUS(raw);
    r.out = slurp(base + ".out");
    r.err = slurp(base + ".err");
    return r;
}

// reports must be identical across runs except for wall-clock timings
json without_timings(const std::string& text) {
    json j = json::parse(text);
    j.erase("timings_ms");
    return j;
}

}  // namespace

TEST_CASE("validate reports pivots and echoes the graph") {
    const RunResult r = run_cli("validate --builtin ame43");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("schema") == "graphbell/1");
    CHECK(rep.at("command") == "validate");
    CHECK(rep.at("valid") == true);
    CHECK(rep.at("auto_pivots") == json::array({1, 2}));
    CHECK(rep.at("graph").at("d") == 3);
    CHECK(rep.at("graph").at("n") == 4);

    // -o writes the same report to a file and keeps stdout quiet
    const std::string out = g_scratch + "/validate.json";
    const RunResult r2 = run_cli("validate --builtin ame43 -o " + out);
    REQUIRE(r2.exit_code == 0);
    CHECK(r2.out.empty());
    CHECK(json::parse(slurp(out)) == rep);
}

TEST_CASE("bad inputs exit with code 2 and a machine-readable error") {
    const std::string nonprime = write_fixture("nonprime.txt", "9 2\n1 2 1\n");
    const RunResult r = run_cli("validate " + nonprime);
    CHECK(r.exit_code == 2);
    CHECK(r.out.empty());
    const json err = json::parse(r.err);
    CHECK(err.at("error").at("code") == "NON_PRIME");

    const RunResult missing = run_cli("validate " + g_scratch + "/no_such_file");
    CHECK(missing.exit_code == 2);
    CHECK(json::parse(missing.err).at("error").at("code") == "IO");

    // no file and no --builtin
    const RunResult bare = run_cli("qbound");
    CHECK(bare.exit_code == 2);
    CHECK(json::parse(bare.err).at("error").at("code") == "BAD_FLAG");
}

TEST_CASE("unknown flags and subcommands exit with the usage code") {
    CHECK(run_cli("validate --builtin ame43 --bogus").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);  // a subcommand is required
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("build emits the expression and is byte stable across runs") {
    const RunResult a = run_cli("build --builtin ame43");
    const RunResult b = run_cli("build --builtin ame43");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const json expr = json::parse(a.out);
    CHECK(expr.at("terms").size() == 26);
    CHECK(expr.at("scenario") == json::array({3, 3, 2, 2}));
    const json& meta = expr.at("meta");
    CHECK(meta.at("term_count") == 26);
    CHECK(meta.at("n1") == 2);
    CHECK(meta.at("pivots") == json::array({1, 2}));
    CHECK(meta.at("lambda_convention") == "as_printed");
}

TEST_CASE("expression files round trip through the tool") {
    const std::string path = g_scratch + "/ame43_expr.json";
    REQUIRE(run_cli("build --builtin ame43 -o " + path).exit_code == 0);

    const RunResult q = run_cli("qbound " + path);
    REQUIRE(q.exit_code == 0);
    CHECK(json::parse(q.out).at("beta_q").get<double>() == 8.0);

    // validate wants a graph, and pivot flags only make sense when building
    CHECK(run_cli("validate " + path).exit_code == 2);
    const RunResult piv = run_cli("qbound " + path + " --v1 2");
    CHECK(piv.exit_code == 2);
    CHECK(json::parse(piv.err).at("error").at("code") == "BAD_FLAG");
}

TEST_CASE("custom coefficient files rescale the expression") {
    // ame43 has a single extra pivot neighbor, original vertex 4, so the
    // exactness constraint ties c1[1] + c2[4] = 1
    const std::string good =
        write_fixture("coeffs_good.json", R"({"c1": {"1": "0.3"}, "c2": {"4": "0.7"}})");
    const RunResult r = run_cli("build --builtin ame43 --coeffs " + good);
    REQUIRE(r.exit_code == 0);
    const json expr = json::parse(r.out);
    CHECK(expr.at("terms").size() == 26);
    CHECK(expr != json::parse(run_cli("build --builtin ame43").out));

    // violating the constraint is a constraint failure, not a parse failure
    const std::string bad =
        write_fixture("coeffs_bad.json", R"({"c1": {"1": "1/3"}, "c2": {"4": "1/3"}})");
    const RunResult rb = run_cli("build --builtin ame43 --coeffs " + bad);
    CHECK(rb.exit_code == 3);
    CHECK(json::parse(rb.err).at("error").at("code") == "CONSTRAINT");

    // keys must name an exponent in range and an actual extra neighbor
    const std::string key =
        write_fixture("coeffs_key.json", R"({"c2": {"2": "1/2"}})");
    const RunResult rk = run_cli("build --builtin ame43 --coeffs " + key);
    CHECK(rk.exit_code == 2);
    CHECK(json::parse(rk.err).at("error").at("code") == "BAD_COEFF_KEY");

    // bare floats are rejected to keep the arithmetic exact
    const std::string flt = write_fixture("coeffs_float.json", R"({"c1": {"1": 0.3}})");
    const RunResult rf = run_cli("build --builtin ame43 --coeffs " + flt);
    CHECK(rf.exit_code == 2);
    CHECK(json::parse(rf.err).at("error").at("code") == "PARSE");
}

TEST_CASE("qbound certifies the algebraic bound at the ideal realization") {
    const RunResult r = run_cli("qbound --builtin star:4,3");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("beta_q").get<double>() == 6.0);
    CHECK(std::abs(rep.at("quantum_value").get<double>() - 6.0) < 1e-9);
    CHECK(rep.at("abs_error").get<double>() <= rep.at("tolerance").get<double>());
    CHECK(rep.at("pass") == true);
}

TEST_CASE("cbound enumerates exactly and honors the strategy budget") {
    const RunResult r = run_cli("cbound --builtin pair:3");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    const json& bound = rep.at("bound");
    CHECK(bound.at("mode") == "exact");
    CHECK(bound.at("is_lower_bound") == false);
    CHECK(bound.at("enumerated") == 27);
    CHECK(std::abs(bound.at("value").get<double>() - 6.0 * std::cos(M_PI / 9)) < 1e-9);
    CHECK(bound.at("strategy").size() == 2);  // one outcome row per party

    const RunResult over = run_cli("cbound --builtin ame43 --budget 10");
    CHECK(over.exit_code == 4);
    CHECK(json::parse(over.err).at("error").at("code") == "BUDGET");

    const RunResult heur = run_cli("cbound --builtin pair:3 --mode heuristic --restarts 20 --seed 3");
    REQUIRE(heur.exit_code == 0);
    const json hb = json::parse(heur.out).at("bound");
    CHECK(hb.at("mode") == "heuristic");
    CHECK(hb.at("is_lower_bound") == true);
    CHECK(hb.at("restarts") == 20);
    CHECK(std::abs(hb.at("value").get<double>() - 5.6381557247154506) < 1e-6);
}

TEST_CASE("sos-check passes at the ideal and seeded random realizations") {
    const RunResult r = run_cli("sos-check --builtin pair:3 --random 2 --seed 5");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("pass") == true);
    CHECK(rep.at("ideal").at("max_residual").get<double>() <= 1e-9);
    CHECK(rep.at("ideal").at("preconditions_ok") == true);
    REQUIRE(rep.at("random_realizations").size() == 2);
    for (const auto& rr : rep.at("random_realizations")) {
        CHECK(rr.at("max_residual").get<double>() <= 1e-8);
        CHECK(rr.at("preconditions_ok") == true);
    }
}

TEST_CASE("selftest command reports the full battery") {
    const RunResult r = run_cli("selftest --builtin line:3,3");
    REQUIRE(r.exit_code == 0);
    const json s = json::parse(r.out).at("selftest");
    CHECK(s.at("all_pass") == true);
    CHECK(s.at("checks").size() > 20);
    REQUIRE(s.at("masks").size() == 8);  // 2^3 transposition patterns
    int stabilizable = 0;
    for (const auto& m : s.at("masks")) {
        if (m.at("verdict") == "stabilizable")
            ++stabilizable;
        else
            CHECK(m.at("verdict") == "obstructed");
    }
    CHECK(stabilizable == 2);  // only the uniform patterns survive
}

TEST_CASE("analyze reports are deterministic apart from timings") {
    const RunResult a = run_cli("analyze --builtin pair:3 --seed 7");
    const RunResult b = run_cli("analyze --builtin pair:3 --seed 7");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    const json ja = without_timings(a.out);
    const json jb = without_timings(b.out);
    CHECK(ja.dump() == jb.dump());

    CHECK(ja.at("all_pass") == true);
    CHECK(ja.at("checks").at("quantum_matches_bound") == true);
    CHECK(ja.at("checks").at("sos_within_tolerance") == true);
    CHECK(ja.at("checks").at("violation_detected") == true);
    CHECK(ja.at("violation").at("violated") == true);
    CHECK(ja.at("violation").at("ratio").get<double>() > 1.0);
    CHECK(ja.at("beta_q").get<double>() == 6.0);
    CHECK(ja.at("selftest").is_null());  // not requested

    const RunResult st = run_cli("analyze --builtin pair:3 --seed 7 --selftest");
    REQUIRE(st.exit_code == 0);
    CHECK(without_timings(st.out).at("selftest").at("all_pass") == true);
}

TEST_CASE("analyze suggests the heuristic mode when over budget") {
    const RunResult r = run_cli("analyze --builtin ame43 --budget 10");
    CHECK(r.exit_code == 4);
    const json err = json::parse(r.err);
    CHECK(err.at("error").at("code") == "BUDGET");
    CHECK(err.at("error").at("message").get<std::string>().find("--mode heuristic") !=
          std::string::npos);
}

TEST_CASE("analyze reports the closed-form classical bound for qubit graphs") {
    const RunResult r = run_cli("analyze --builtin line:4,2");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("sos").is_null());  // the squares decomposition is qudit-only
    const double formula = rep.at("classical_formula").get<double>();
    CHECK(std::abs(formula - rep.at("classical").at("value").get<double>()) < 1e-9);
}

TEST_CASE("dump-state prints exact amplitudes") {
    const RunResult r = run_cli("dump-state --builtin pair:2");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("d") == 2);
    CHECK(rep.at("sites") == 2);
    CHECK(rep.at("stabilization_residual").get<double>() < 1e-10);
    const json& amps = rep.at("amplitudes");
    REQUIRE(amps.size() == 4);
    const double expected[4] = {0.5, 0.5, 0.5, -0.5};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(amps[i][0].get<double>() - expected[i]) < 1e-12);
        CHECK(std::abs(amps[i][1].get<double>()) < 1e-12);
    }

    // star graph: the sign pattern marks the two basis states where exactly
    // one controlled phase fires
    const RunResult rs = run_cli("dump-state --builtin star:3,2");
    REQUIRE(rs.exit_code == 0);
    const json srep = json::parse(rs.out);
    const json& samps = srep.at("amplitudes");
    REQUIRE(samps.size() == 8);
    const double mag = 1.0 / std::sqrt(8.0);
    for (int i = 0; i < 8; ++i) {
        const double sign = (i == 5 || i == 6) ? -1.0 : 1.0;
        CHECK(std::abs(samps[i][0].get<double>() - sign * mag) < 1e-12);
    }
}

TEST_CASE("list-graphs names every builtin family") {
    const RunResult r = run_cli("list-graphs");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    std::string all;
    for (const auto& line : rep.at("builtins")) all += line.get<std::string>() + "\n";
    for (const char* name : {"ame43", "pair:", "star:", "line:", "cycle:", "random:"})
        CHECK(all.find(name) != std::string::npos);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli [doctest options] GRAPHBELL_BINARY\n");
        return 64;
    }
    g_cli = argv[argc - 1];

    std::string tmpl = (std::filesystem::temp_directory_path() / "graphbell_cli_XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) {
        std::perror("mkdtemp");
        return 64;
    }
    g_scratch = tmpl;

    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv);  // the trailing binary path is ours
    const int rc = ctx.run();
    std::filesystem::remove_all(g_scratch);
    return rc;
}
