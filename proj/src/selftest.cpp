#include "graphbell/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "graphbell/errors.hpp"
#include "graphbell/graph_state.hpp"
#include "graphbell/rng.hpp"
#include "graphbell/state.hpp"
#include "graphbell/weyl.hpp"

namespace graphbell {

namespace {

CheckResult make_check(std::string name, double residual, double tol, std::string detail = "") {
    CheckResult c;
    c.name = std::move(name);
    c.residual = residual;
    c.pass = residual <= tol;
    c.detail = std::move(detail);
    return c;
}

void require_d3(int d, const char* who) {
    if (d != 3) throw InputError("BAD_DIMENSION", std::string(who) + " is specific to d = 3");
}

}  // namespace

std::vector<ComplexMatrix> tilde_observables(const std::vector<ComplexMatrix>& settings,
                                             const LambdaTable& lt) {
    std::vector<ComplexMatrix> out;
    for (int k = 0; k < lt.d; ++k) out.push_back(tilde_combination(settings, k, 1, lt));
    return out;
}

std::vector<CheckResult> check_tilde_relations(const std::vector<ComplexMatrix>& settings,
                                               const LambdaTable& lt, double tol) {
    require_d3(lt.d, "check_tilde_relations");
    const auto at = tilde_observables(settings, lt);
    std::vector<CheckResult> out;
    const ComplexMatrix eye = ComplexMatrix::identity(at[0].rows);
    for (int k = 0; k < 3; ++k) {
        out.push_back(make_check("tilde_unitary[" + std::to_string(k) + "]", unitarity_defect(at[k]), tol));
        out.push_back(make_check("tilde_square_is_adjoint[" + std::to_string(k) + "]",
                                 max_abs_diff(at[k] * at[k], adjoint(at[k])), tol));
        out.push_back(make_check("tilde_order_three[" + std::to_string(k) + "]",
                                 max_abs_diff(mpow(at[k], 3), eye), tol));
    }
    const int triples[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
    for (const auto& t : triples) {
        const ComplexMatrix anti = at[t[0]] * at[t[1]] + at[t[1]] * at[t[0]];
        out.push_back(make_check("tilde_anticomm[" + std::to_string(t[0]) + std::to_string(t[1]) + "]",
                                 max_abs_diff(anti, Cx(-1, 0) * adjoint(at[t[2]])), tol));
    }
    return out;
}

std::vector<CheckResult> check_pivot_anticommutation(const std::vector<ComplexMatrix>& a, double tol) {
    if (a.size() < 3) throw InputError("SHAPE", "need the three pivot settings");
    std::vector<CheckResult> out;
    const Cx w = omega(3, 1);
    const int triples[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
    for (const auto& t : triples) {
        const ComplexMatrix anti = a[t[0]] * a[t[1]] + a[t[1]] * a[t[0]];
        out.push_back(make_check("pivot_anticomm[" + std::to_string(t[0]) + std::to_string(t[1]) + "]",
                                 max_abs_diff(anti, (-w) * adjoint(a[t[2]])), tol));
    }
    return out;
}

std::vector<CheckResult> check_second_pivot_anticommutation(const std::vector<ComplexMatrix>& b,
                                                            int r01, double tol) {
    if (b.size() < 3) throw InputError("SHAPE", "need the three second-pivot settings");
    if (r01 < 1 || r01 > 2) throw InputError("BAD_MULTIPLICITY", "pivot edge multiplicity must be 1 or 2");
    // the expression couples the setting-0 observable only through B_0^{r01},
    // so that power is the element closing the triple
    const std::vector<ComplexMatrix> e{mpow(b[0], r01), b[1], b[2]};
    std::vector<CheckResult> out;
    const int triples[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
    for (const auto& t : triples) {
        const ComplexMatrix anti = e[t[0]] * e[t[1]] + e[t[1]] * e[t[0]];
        out.push_back(make_check("second_pivot_anticomm[" + std::to_string(t[0]) + std::to_string(t[1]) + "]",
                                 max_abs_diff(anti, Cx(-1, 0) * adjoint(e[t[2]])), tol));
    }
    return out;
}

std::vector<CheckResult> check_unitary_anticommutators(
    const GraphSpec& g, const std::vector<std::vector<ComplexMatrix>>& obs, double tol) {
    require_d3(g.d, "check_unitary_anticommutators");
    if (static_cast<int>(obs.size()) != g.n)
        throw InputError("SHAPE", "observables do not match the party count");
    std::vector<CheckResult> out;

    std::vector<bool> characterized(g.n, false);
    characterized[0] = characterized[1] = true;
    for (int k = 2; k < g.n; ++k)
        if (g.r[0][k] != 0) {
            characterized[k] = true;
            const ComplexMatrix anti = mpow(obs[k][0], g.r[0][k]) * obs[k][1] +
                                       obs[k][1] * mpow(obs[k][0], g.r[0][k]);
            out.push_back(make_check("neighbor_anticomm_unitary[" + std::to_string(k + 1) + "]",
                                     unitarity_defect(anti), tol,
                                     "exponent " + std::to_string(g.r[0][k])));
        }

    // breadth-first layers over the rest, each vertex anchored at its lowest
    // already-characterized neighbor
    while (true) {
        std::vector<std::pair<int, int>> layer;  // (vertex, anchor)
        for (int k = 2; k < g.n; ++k) {
            if (characterized[k]) continue;
            int anchor = -1;
            for (int j = 0; j < g.n; ++j)
                if (characterized[j] && g.r[j][k] != 0) {
                    anchor = j;
                    break;
                }
            if (anchor >= 0) layer.emplace_back(k, anchor);
        }
        if (layer.empty()) break;
        for (const auto& [k, anchor] : layer) {
            characterized[k] = true;
            const int r = g.r[anchor][k];
            const ComplexMatrix anti = mpow(obs[k][0], r) * obs[k][1] + obs[k][1] * mpow(obs[k][0], r);
            out.push_back(make_check("remote_anticomm_unitary[" + std::to_string(k + 1) + "]",
                                     unitarity_defect(anti), tol,
                                     "anchor " + std::to_string(anchor + 1) + ", exponent " +
                                         std::to_string(r)));
        }
    }
    for (int k = 2; k < g.n; ++k)
        if (!characterized[k])
            throw InternalCheckError("vertex " + std::to_string(k + 1) +
                                     " unreachable in a connected graph");
    return out;
}

std::vector<CheckResult> check_canonical_forms(double tol) {
    std::vector<CheckResult> out;
    const int d = 3;
    const Cx w = omega(d, 1);
    const ComplexMatrix X = pauli_x(d), Z = pauli_z(d);

    ComplexMatrix F(3, 3);
    const Cx w2 = w * w;
    const double s3 = 1.0 / std::sqrt(3.0);
    const Cx ftab[3][3] = {{1, 1, 1}, {1, w, w2}, {1, w2, w}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) F.at(r, c) = s3 * ftab[r][c];

    ComplexMatrix V1 = ComplexMatrix::identity(3);
    V1.at(2, 2) = w;
    ComplexMatrix V2(3, 3);
    V2.at(0, 0) = 1;
    V2.at(1, 2) = 1;
    V2.at(2, 1) = 1;
    ComplexMatrix V3 = ComplexMatrix::identity(3);
    V3.at(1, 1) = w2;
    V3.at(2, 2) = w2;

    out.push_back(make_check("fourier_unitary", unitarity_defect(F), tol));
    out.push_back(make_check("phase_gate_unitary[1]", unitarity_defect(V1), tol));
    out.push_back(make_check("swap_gate_unitary", unitarity_defect(V2), tol));
    out.push_back(make_check("phase_gate_unitary[3]", unitarity_defect(V3), tol));

    auto blk = [&](const ComplexMatrix& left, const ComplexMatrix& p1, const ComplexMatrix& right,
                   const ComplexMatrix& p2) { return kron(left, p1) + kron(right, p2); };

    // reference anticommuting pair on a 2-dim auxiliary, all projector ranks
    for (int rank = 0; rank <= 2; ++rank) {
        ComplexMatrix Q(2, 2), Qp(2, 2);
        for (int i = 0; i < 2; ++i) {
            if (i < rank)
                Q.at(i, i) = 1;
            else
                Qp.at(i, i) = 1;
        }
        const ComplexMatrix R0 = kron(X, ComplexMatrix::identity(2));
        const ComplexMatrix R1 = blk(X * X * Z, Q, Z * Z, Qp);
        const std::string tag = "[rank" + std::to_string(rank) + "]";
        out.push_back(make_check("reference_pair_order" + tag,
                                 std::max(max_abs_diff(mpow(R0, 3), ComplexMatrix::identity(6)),
                                          max_abs_diff(mpow(R1, 3), ComplexMatrix::identity(6))),
                                 tol));
        out.push_back(make_check("reference_pair_unitary" + tag,
                                 std::max(unitarity_defect(R0), unitarity_defect(R1)), tol));
        out.push_back(make_check("reference_pair_anticomm_unitary" + tag,
                                 unitarity_defect(R0 * R1 + R1 * R0), tol));
    }

    // conjugation chain at rank 1
    ComplexMatrix Q(2, 2), Qp(2, 2);
    Q.at(0, 0) = 1;
    Qp.at(1, 1) = 1;
    const ComplexMatrix R0 = kron(X, ComplexMatrix::identity(2));
    const ComplexMatrix R1 = blk(X * X * Z, Q, Z * Z, Qp);
    const ComplexMatrix XZ = X * Z, ZX = Z * X, Z2X = Z * Z * X;
    const ComplexMatrix Fd = adjoint(F);
    const ComplexMatrix V13 = V1 * V3;

    const ComplexMatrix U1 = blk(Fd * V1 * F, Q, conjugate(Fd * conjugate(V1) * V2 * F), Qp);
    out.push_back(make_check("conjugation_unitary[1]", unitarity_defect(U1), tol));
    out.push_back(make_check("pivot_form_x",
                             max_abs_diff(U1 * R0 * adjoint(U1), blk(X, Q, transpose(X), Qp)), tol));
    out.push_back(make_check("pivot_form_xz",
                             max_abs_diff(U1 * R1 * adjoint(U1), blk(XZ, Q, transpose(XZ), Qp)), tol));

    const ComplexMatrix U2 = blk(V3 * F, Q, conjugate(V13) * F, Qp);
    out.push_back(make_check("conjugation_unitary[2]", unitarity_defect(U2), tol));
    out.push_back(make_check("second_form_z",
                             max_abs_diff(U2 * R0 * adjoint(U2), kron(Z, ComplexMatrix::identity(2))),
                             tol));
    // the image lands with the projector roles swapped
    out.push_back(make_check("second_form_zx",
                             max_abs_diff(U2 * R1 * adjoint(U2), blk(transpose(ZX), Q, ZX, Qp)), tol));

    const ComplexMatrix B0 = kron(Z, ComplexMatrix::identity(2));
    const ComplexMatrix B1 = blk(ZX, Q, transpose(ZX), Qp);
    const ComplexMatrix U3 = blk(conjugate(V13), Q, V13, Qp);
    out.push_back(make_check("conjugation_unitary[3]", unitarity_defect(U3), tol));
    out.push_back(make_check("rotated_form_z2x_fixes_z",
                             max_abs_diff(U3 * B0 * adjoint(U3), B0), tol));
    out.push_back(make_check("rotated_form_z2x",
                             max_abs_diff(U3 * B1 * adjoint(U3), blk(Z2X, Q, transpose(Z2X), Qp)), tol));

    const ComplexMatrix U4 = blk(V13, Q, conjugate(V13), Qp);
    out.push_back(make_check("conjugation_unitary[4]", unitarity_defect(U4), tol));
    out.push_back(make_check("rotated_form_x_fixes_z",
                             max_abs_diff(U4 * B0 * adjoint(U4), B0), tol));
    out.push_back(make_check("rotated_form_x",
                             max_abs_diff(U4 * B1 * adjoint(U4), blk(X, Q, transpose(X), Qp)), tol));
    return out;
}

ObstructionResult transposition_obstruction(const GraphSpec& g, const std::vector<int>& mask) {
    if (static_cast<int>(mask.size()) != g.n)
        throw InputError("SHAPE", "mask length must equal the vertex count");
    for (int m : mask)
        if (m != 0 && m != 1) throw InputError("SHAPE", "mask entries must be 0 or 1");

    const auto prods = stabilizer_products(g);
    std::vector<WeylWord> words;
    for (const auto& p : prods) words.push_back(weyl_transpose(p.word, mask));

    ObstructionResult res;
    const bool all_zero = std::all_of(mask.begin(), mask.end(), [](int m) { return m == 0; });
    const bool all_one = std::all_of(mask.begin(), mask.end(), [](int m) { return m == 1; });
    if (all_zero || all_one) {
        // transposing every site sends each stabilizer S to (S^{-1})^*, which
        // fixes the conjugated state; no transposition fixes the state itself
        StateVector psi = synthesize_state(g);
        if (all_one)
            for (auto& v : psi.amp) v = std::conj(v);
        double worst = 0.0;
        for (const auto& wd : words) {
            StateVector phi = psi;
            apply_weyl(phi, wd);
            worst = std::max(worst, max_abs_diff(phi, psi));
        }
        res.stab_residual = worst;
        res.verdict = worst <= 1e-10 ? "stabilizable" : "inconclusive";
        return res;
    }

    // witness search: short products collapsing to a nontrivial phase first
    const int M = static_cast<int>(words.size());
    for (int i = 0; i < M; ++i) {
        const WeylWord& p1 = words[i];
        if (weyl_is_scalar(p1) && p1.phase % g.d != 0) {
            res.verdict = "obstructed";
            res.kind = "product";
            res.indices = {i};
            res.phase = p1.phase;
            return res;
        }
        for (int j = i; j < M; ++j) {
            const WeylWord p2 = weyl_mul(p1, words[j]);
            if (weyl_is_scalar(p2) && p2.phase % g.d != 0) {
                res.verdict = "obstructed";
                res.kind = "product";
                res.indices = {i, j};
                res.phase = p2.phase;
                return res;
            }
            for (int k = j; k < M; ++k) {
                const WeylWord p3 = weyl_mul(p2, words[k]);
                if (weyl_is_scalar(p3) && p3.phase % g.d != 0) {
                    res.verdict = "obstructed";
                    res.kind = "product";
                    res.indices = {i, j, k};
                    res.phase = p3.phase;
                    return res;
                }
            }
        }
    }
    for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j) {
            const int q = commutation_phase(words[i], words[j]);
            if (q != 0) {
                res.verdict = "obstructed";
                res.kind = "pair";
                res.indices = {i, j};
                res.phase = q;
                return res;
            }
        }
    res.verdict = "inconclusive";
    return res;
}

CheckResult fact1_nonunitarity(int d, int trials, std::uint64_t seed) {
    Rng rng(seed);
    const ComplexMatrix X = pauli_x(d), Z = pauli_z(d);
    if (d == 2) {
        // the exception: any real combination is unitary
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            double a = std::abs(rng.gaussian()), b = std::abs(rng.gaussian());
            const double nrm = std::sqrt(a * a + b * b);
            if (nrm < 1e-6) continue;
            a /= nrm;
            b /= nrm;
            worst = std::max(worst, unitarity_defect(Cx(a, 0) * X + Cx(b, 0) * Z));
        }
        CheckResult c;
        c.name = "x_plus_z_exception_d2";
        c.residual = worst;
        c.pass = worst <= 1e-12;
        c.detail = "real combinations stay unitary";
        return c;
    }

    double min_defect = 1e300;
    for (int t = 0; t < trials; ++t) {
        Cx a, b;
        do {
            a = Cx(rng.gaussian(), rng.gaussian());
            b = Cx(rng.gaussian(), rng.gaussian());
        } while (std::abs(a) < 0.01 || std::abs(b) < 0.01);
        const double nrm = std::sqrt(std::norm(a) + std::norm(b));
        a /= nrm;
        b /= nrm;
        min_defect = std::min(min_defect, unitarity_defect(a * X + b * Z));
    }
    CheckResult c;
    c.name = "x_plus_z_never_unitary_d" + std::to_string(d);
    c.residual = min_defect;  // smallest defect seen; must stay clearly nonzero
    c.pass = min_defect > 1e-6;
    c.detail = std::to_string(trials) + " draws";
    return c;
}

SelftestSummary run_selftest_suite(const BellExpression& expr) {
    if (!expr.meta.has_meta)
        throw InputError("NO_META", "expression carries no construction metadata");
    require_d3(expr.d, "run_selftest_suite");
    const GraphSpec& g = expr.meta.relabeled;
    if (g.n > 12)
        throw InputError("TOO_BIG", "mask sweep over 2^" + std::to_string(g.n) +
                                         " transposition patterns; limit is 12 vertices");
    const Realization real = ideal_realization(expr);
    const LambdaTable lt = make_lambda_table(3, expr.meta.convention);

    SelftestSummary sum;
    auto take = [&](std::vector<CheckResult> v) {
        for (auto& c : v) sum.checks.push_back(std::move(c));
    };

    take(check_tilde_relations(real.obs[0], lt));
    std::vector<ComplexMatrix> transposed;
    for (const auto& m : real.obs[0]) transposed.push_back(transpose(m));
    {
        auto v = check_tilde_relations(transposed, lt);
        for (auto& c : v) c.name = "transposed_" + c.name;
        take(std::move(v));
    }
    take(check_pivot_anticommutation(real.obs[0]));
    {
        auto v = check_pivot_anticommutation(transposed);
        for (auto& c : v) c.name = "transposed_" + c.name;
        take(std::move(v));
    }
    take(check_second_pivot_anticommutation(real.obs[1], g.r[0][1]));
    take(check_unitary_anticommutators(g, real.obs));
    take(check_canonical_forms());
    sum.checks.push_back(fact1_nonunitarity(3, 100, 0));
    sum.checks.push_back(fact1_nonunitarity(2, 100, 0));

    for (std::uint64_t bits = 0; bits < (1ULL << g.n); ++bits) {
        MaskEntry e;
        e.mask.resize(g.n);
        for (int s = 0; s < g.n; ++s) e.mask[s] = static_cast<int>((bits >> s) & 1);
        e.result = transposition_obstruction(g, e.mask);
        const bool uniform = bits == 0 || bits + 1 == (1ULL << g.n);
        const bool ok = uniform ? e.result.verdict == "stabilizable"
                                : e.result.verdict == "obstructed";
        if (!ok) sum.all_pass = false;
        sum.masks.push_back(std::move(e));
    }
    for (const auto& c : sum.checks)
        if (!c.pass) sum.all_pass = false;
    return sum;
}

}  // namespace graphbell
