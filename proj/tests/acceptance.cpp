// Acceptance gate. Runs the nine release criteria end to end and prints one
// PASS/FAIL line per criterion; the process exits 0 only when every line is a
// PASS. Tolerances are pinned as constants right here so a change to them
// shows up in review, not buried in a config file.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "graphbell/bounds.hpp"
#include "graphbell/coeffs.hpp"
#include "graphbell/construction.hpp"
#include "graphbell/graph.hpp"
#include "graphbell/matrix.hpp"
#include "graphbell/parallel.hpp"
#include "graphbell/rng.hpp"
#include "graphbell/selftest.hpp"

using namespace graphbell;

namespace {

constexpr double kTolQuantum = 1e-9;     // ideal value vs algebraic bound
constexpr double kTolSos = 1e-8;         // squares identity residual
constexpr double kTolFact = 1e-10;       // resolution identity and convention checks
constexpr double kTolClassicalD7 = 1e-6; // frozen enumeration value, reproducible across implementations
constexpr double kTolHeuristic = 1e-6;   // heuristic vs exact classical bound

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

bool g_all_pass = true;

void report(int criterion, bool ok, const std::string& detail) {
    if (!ok) g_all_pass = false;
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// unitary with spectrum in the d-th roots of unity, same draw the random
// realization uses internally
ComplexMatrix random_order_d_unitary(int d, Rng& rng) {
    while (true) {
        ComplexMatrix q(d, d);
        for (auto& v : q.a) v = Cx(rng.gaussian(), rng.gaussian());
        bool ok = true;
        for (int c = 0; c < d && ok; ++c) {
            for (int p = 0; p < c; ++p) {
                Cx dot = 0;
                for (int r = 0; r < d; ++r) dot += std::conj(q.at(r, p)) * q.at(r, c);
                for (int r = 0; r < d; ++r) q.at(r, c) -= dot * q.at(r, p);
            }
            double nn = 0;
            for (int r = 0; r < d; ++r) nn += std::norm(q.at(r, c));
            nn = std::sqrt(nn);
            if (nn < 1e-8) {
                ok = false;
                break;
            }
            for (int r = 0; r < d; ++r) q.at(r, c) /= nn;
        }
        if (!ok) continue;
        const double tau = 6.283185307179586476925287;
        ComplexMatrix u(d, d);
        for (int i = 0; i < d; ++i) {
            const Cx w = std::polar(1.0, tau * i / d);
            for (int r = 0; r < d; ++r)
                for (int cc = 0; cc < d; ++cc) u.at(r, cc) += q.at(r, i) * w * std::conj(q.at(cc, i));
        }
        return u;
    }
}

bool is_connected(const GraphSpec& g) {
    std::vector<int> seen(g.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int j = 0; j < g.n; ++j)
            if (g.r[v][j] > 0 && !seen[j]) {
                seen[j] = 1;
                ++count;
                stack.push_back(j);
            }
    }
    return count == g.n;
}

// every connected multigraph on n labeled vertices, multiplicities in 1..d-1
std::vector<GraphSpec> all_connected_multigraphs(int n, int d) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    std::vector<GraphSpec> out;
    std::vector<int> mult(pairs.size(), 0);
    while (true) {
        GraphSpec g;
        g.d = d;
        g.n = n;
        g.r.assign(n, std::vector<int>(n, 0));
        for (std::size_t e = 0; e < pairs.size(); ++e)
            g.r[pairs[e].first][pairs[e].second] = g.r[pairs[e].second][pairs[e].first] = mult[e];
        if (is_connected(g)) out.push_back(std::move(g));
        std::size_t pos = 0;
        while (pos < mult.size() && mult[pos] == d - 1) mult[pos++] = 0;
        if (pos == mult.size()) break;
        ++mult[pos];
    }
    return out;
}

std::uint64_t naive_strategy_count(const BellExpression& expr) {
    std::uint64_t count = 1;
    for (int m : expr.scenario)
        for (int s = 0; s < m; ++s) count *= static_cast<std::uint64_t>(expr.d);
    return count;
}

// ---- the nine criteria ----

void criterion_1() {
    Timer t;
    const BellExpression expr = build_expression(builtin_graph("ame43"));
    const double qv = quantum_value(expr, ideal_realization(expr), 1);
    const BoundResult ex = exact_bound(expr, 1000000000ULL, 1);
    const BoundResult nv = exact_bound_naive(expr, 1000000000ULL, 1);
    const bool ok = near(qv, 8.0, kTolQuantum) && near(ex.value, 7.63816, 1e-4) &&
                    near(nv.value, 7.63816, 1e-4) && ex.value == nv.value &&
                    nv.enumerated == 59049 && t.s() < 60.0;
    report(1, ok,
           fmt("ame43 ideal value %.12f, classical bound %.6f over all %llu strategies "
               "single-threaded (%.1f s)",
               qv, ex.value, static_cast<unsigned long long>(nv.enumerated), t.s()));
}

void criterion_2() {
    Timer t;
    bool ok = true;
    double v3 = 0, v5 = 0, v7 = 0;
    for (int d : {3, 5, 7}) {
        const BellExpression expr = build_expression(builtin_graph("pair:" + std::to_string(d)));
        const double qv = quantum_value(expr, ideal_realization(expr), 1);
        ok = ok && near(qv, static_cast<double>(d) * (d - 1), kTolQuantum);
        if (d == 3) {
            v3 = exact_bound(expr, 1000000000ULL, 1).value;
            ok = ok && near(v3, 6.0 * std::cos(M_PI / 9.0), kTolQuantum);
        } else if (d == 5) {
            v5 = exact_bound(expr, 1000000000ULL, 1).value;
            ok = ok && near(v5, 4.0 * (2.0 + std::sqrt(5.0)), kTolQuantum);
        } else {
            // exact enumeration value, frozen; an independent from-scratch
            // implementation of the same expression reproduces it to 1.4e-14,
            // and it is invariant under both lambda conventions
            const BoundResult b = exact_bound(expr, 1000000000ULL, 8);
            v7 = b.value;
            ok = ok && near(v7, 33.353174999083, kTolClassicalD7) && b.enumerated == 823543;
        }
    }
    ok = ok && t.s() < 900.0;
    report(2, ok,
           fmt("pair-graph classical bounds %.9f / %.9f / %.9f for d = 3/5/7, quantum values "
               "d(d-1), 8 threads for d = 7 (%.1f s)",
               v3, v5, v7, t.s()));
}

void criterion_3() {
    std::vector<std::string> names = {"ame43",    "pair:3",   "pair:5",   "pair:7",
                                      "star:4,3", "star:5,3", "star:6,3", "line:3,3",
                                      "line:4,3", "line:5,3", "line:6,3"};
    for (int seed = 1; seed <= 10; ++seed) {
        const int n = 3 + (seed - 1) % 4;
        names.push_back("random:" + std::to_string(n) + ",3," + std::to_string(seed));
    }
    bool ok = true;
    double worst = 0;
    for (const auto& name : names) {
        const BellExpression expr = build_expression(builtin_graph(name));
        const double qv = quantum_value(expr, ideal_realization(expr), 1);
        const double want =
            (expr.d - 1.0) * (expr.meta.graph.n - expr.meta.n1 + expr.d - 1.0);
        worst = std::max(worst, std::abs(qv - want));
        ok = ok && near(qv, want, kTolQuantum) && near(quantum_bound(expr), want, 0.0);
    }
    report(3, ok,
           fmt("ideal value equals (d-1)(N-N1+d-1) on %zu graphs including 10 seeded random "
               "ones (worst |diff| %.2e)",
               names.size(), worst));
}

void criterion_4() {
    Timer t;
    std::vector<GraphSpec> graphs;
    std::size_t expected[5] = {0, 0, 2, 20, 624};
    bool counts_ok = true;
    for (int n = 2; n <= 4; ++n) {
        const auto batch = all_connected_multigraphs(n, 3);
        counts_ok = counts_ok && batch.size() == expected[n];
        graphs.insert(graphs.end(), batch.begin(), batch.end());
    }
    graphs.push_back(builtin_graph("pair:5"));

    const int threads = 8;
    std::vector<double> worst(threads, 0.0);
    std::vector<char> ok(threads, 1);
    parallel_chunks(graphs.size(), threads, [&](int c, std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i) {
            const BellExpression expr = build_expression(graphs[i]);
            const SosReport ideal = sos_residual(expr, ideal_realization(expr), 6, 0);
            worst[c] = std::max(worst[c], ideal.max_residual);
            if (!(ideal.preconditions_ok && ideal.max_residual <= kTolSos)) ok[c] = 0;
            for (std::uint64_t s = 1; s <= 20; ++s) {
                const SosReport r = sos_residual(expr, random_realization(expr, s), 6, s);
                worst[c] = std::max(worst[c], r.max_residual);
                if (!(r.preconditions_ok && r.max_residual <= kTolSos)) ok[c] = 0;
            }
        }
    });
    bool all_ok = counts_ok;
    double w = 0;
    for (int c = 0; c < threads; ++c) {
        all_ok = all_ok && ok[c];
        w = std::max(w, worst[c]);
    }
    report(4, all_ok,
           fmt("squares identity residual <= 1e-8 at ideal plus 20 random realizations for "
               "all %zu connected d=3 multigraphs with N <= 4 and pair:5 (worst %.2e, %.1f s)",
               graphs.size() - 1, w, t.s()));
}

void criterion_5() {
    bool ok = true;
    double worst_res = 0;
    for (int d : {3, 5, 7}) {
        const LambdaTable lt = resolve_convention(d);
        Rng rng(100 + static_cast<std::uint64_t>(d));
        for (int set = 0; set < 50; ++set) {
            std::vector<ComplexMatrix> settings;
            for (int s = 0; s < d; ++s) settings.push_back(random_order_d_unitary(d, rng));
            for (int n = 1; n < d; ++n) {
                ComplexMatrix acc(d, d);
                for (int m = 0; m < d; ++m) {
                    const ComplexMatrix prod = tilde_combination(settings, m, d - n, lt) *
                                               tilde_combination(settings, m, n, lt);
                    for (std::size_t e = 0; e < acc.a.size(); ++e) acc.a[e] += prod.a[e];
                }
                ComplexMatrix want = ComplexMatrix::identity(d);
                for (auto& e : want.a) e *= static_cast<double>(d);
                const double res = max_abs_diff(acc, want);
                worst_res = std::max(worst_res, res);
                ok = ok && res <= kTolFact;
            }
        }
        // generic alpha X + beta Z is never unitary except at d = 2
        ok = ok && fact1_nonunitarity(d, 100, 0).pass;
    }
    ok = ok && fact1_nonunitarity(2, 100, 0).pass;
    report(5, ok,
           fmt("resolution identity holds for 50 random observable sets per d in {3,5,7} "
               "(worst %.2e) and 100/100 X-Z combinations are non-unitary away from d = 2",
               worst_res));
}

void criterion_6() {
    bool ok = true;
    double worst = 0;
    for (int seed = 1; seed <= 5; ++seed) {
        const int n = 3 + (seed - 1) % 4;
        const GraphSpec g = random_connected_simple_graph(n, seed);
        const BellExpression expr = build_expression(g);
        const double qv = quantum_value(expr, ideal_realization(expr), 1);
        const double cb = exact_bound(expr, 1000000000ULL, 2).value;
        const double want_c = n + (std::sqrt(2.0) - 1.0) * expr.meta.n1 - 1.0;
        const double want_q = n + expr.meta.n1 - 1.0;
        worst = std::max({worst, std::abs(cb - want_c), std::abs(qv - want_q)});
        ok = ok && near(cb, want_c, kTolQuantum) && near(qv, want_q, kTolQuantum);
    }
    report(6, ok,
           fmt("5 seeded random simple graphs: classical bound N+(sqrt2-1)N1-1 and ideal "
               "value N+N1-1 (worst |diff| %.2e)",
               worst));
}

void criterion_7() {
    Timer t;
    bool ok = true;
    std::size_t checks = 0;
    for (const char* name : {"ame43", "line:3,3", "star:4,3"}) {
        const BellExpression expr = build_expression(builtin_graph(name));
        const SelftestSummary s = run_selftest_suite(expr);
        ok = ok && s.all_pass;
        checks += s.checks.size();
        const std::size_t n = static_cast<std::size_t>(expr.meta.graph.n);
        std::size_t stabilizable = 0, obstructed = 0;
        for (const auto& m : s.masks)
            (m.result.verdict == "stabilizable" ? stabilizable : obstructed) += 1;
        ok = ok && s.masks.size() == (std::size_t{1} << n) && stabilizable == 2 &&
             obstructed == (std::size_t{1} << n) - 2;
    }
    ok = ok && t.s() < 300.0;
    report(7, ok,
           fmt("selftest battery passes for ame43, line:3,3, star:4,3 with every mixed "
               "transposition pattern obstructed (%zu checks, %.1f s)",
               checks, t.s()));
}

void criterion_8() {
    const std::vector<std::string> names = {
        "pair:2",   "pair:3",   "line:3,2", "line:4,2", "line:5,2", "line:3,3",
        "line:4,3", "line:5,3", "star:4,2", "star:5,2", "star:4,3", "star:5,3",
        "cycle:3,3", "cycle:4,3", "cycle:5,3", "ame43"};
    bool ok = true;
    int compared = 0;
    for (const auto& name : names) {
        const BellExpression expr = build_expression(builtin_graph(name));
        if (naive_strategy_count(expr) > 1000000ULL) continue;
        const double ex = exact_bound(expr, 1000000000ULL, 4).value;
        const double nv = exact_bound_naive(expr, 1000000000ULL, 4).value;
        ok = ok && ex == nv;  // same maximum, bit for bit
        ++compared;
    }
    ok = ok && compared == static_cast<int>(names.size());

    double worst = 0;
    for (const char* name : {"pair:3", "line:3,3", "line:4,3", "star:4,3", "cycle:3,3",
                             "cycle:4,3", "ame43"}) {
        const BellExpression expr = build_expression(builtin_graph(name));
        const double ex = exact_bound(expr, 1000000000ULL, 4).value;
        const double h = heuristic_bound(expr, 50, 0, 4).value;
        worst = std::max(worst, std::abs(h - ex));
        ok = ok && near(h, ex, kTolHeuristic);
    }
    report(8, ok,
           fmt("pivot-folded and naive enumerations agree bit for bit on %d instances; "
               "50-restart heuristic matches exact on every d=3 builtin with N <= 4 "
               "(worst |diff| %.2e)",
               compared, worst));
}

void criterion_9() {
    bool ok = true;
    double worst = 0;
    for (int d : {3, 5, 7, 11}) {
        const ConventionReport rep = probe_conventions(d, kTolFact);
        ok = ok && (rep.as_printed_ok != rep.conjugate_ok);
        const LambdaTable lt = resolve_convention(d, kTolFact);
        const double res = lt.convention == Convention::AsPrinted ? rep.as_printed_residual
                                                                  : rep.conjugate_residual;
        worst = std::max(worst, res);
        ok = ok && res <= kTolFact;
    }
    report(9, ok,
           fmt("exactly one lambda convention passes for d in {3,5,7,11} and its power "
               "identity holds to 1e-10 (worst residual %.2e)",
               worst));
}

}  // namespace

int main() {
    struct Entry {
        int id;
        void (*run)();
    };
    const Entry entries[] = {{1, criterion_1}, {2, criterion_2}, {3, criterion_3},
                             {4, criterion_4}, {5, criterion_5}, {6, criterion_6},
                             {7, criterion_7}, {8, criterion_8}, {9, criterion_9}};
    for (const auto& e : entries) {
        try {
            e.run();
        } catch (const std::exception& ex) {
            report(e.id, false, std::string("exception: ") + ex.what());
        }
    }
    std::printf("%s\n", g_all_pass ? "acceptance: all criteria passed"
                                   : "acceptance: at least one criterion failed");
    return g_all_pass ? 0 : 1;
}
