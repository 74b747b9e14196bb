#include "graphbell/construction.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "graphbell/errors.hpp"
#include "graphbell/graph_state.hpp"
#include "graphbell/parallel.hpp"
#include "graphbell/rng.hpp"

namespace graphbell {

namespace {

// modular inverse for prime modulus via Fermat
int mod_inverse(int a, int d) {
    long long acc = 1, base = a % d, e = d - 2;
    while (e > 0) {
        if (e & 1) acc = acc * base % d;
        base = base * base % d;
        e >>= 1;
    }
    return static_cast<int>(acc);
}

std::vector<int> c_sites(const GraphSpec& g) {
    std::vector<int> cs;
    for (int j = 2; j < g.n; ++j)
        if (g.r[0][j] != 0) cs.push_back(j);
    return cs;
}

std::vector<int> d_sites(const GraphSpec& g) {
    std::vector<int> ds;
    for (int j = 2; j < g.n; ++j)
        if (g.r[0][j] == 0) ds.push_back(j);
    return ds;
}

// class index of C site j: k with r_{0j} = k * r_{01} mod d
int class_of(const GraphSpec& g, int j) {
    return static_cast<int>(static_cast<long long>(g.r[0][j]) * mod_inverse(g.r[0][1], g.d) % g.d);
}

struct FactorLess {
    bool operator()(const std::vector<Factor>& a, const std::vector<Factor>& b) const {
        const std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i].party != b[i].party) return a[i].party < b[i].party;
            if (a[i].setting != b[i].setting) return a[i].setting < b[i].setting;
            if (a[i].power != b[i].power) return a[i].power < b[i].power;
        }
        return a.size() < b.size();
    }
};

}  // namespace

std::vector<StabilizerProduct> stabilizer_products(const GraphSpec& g) {
    if (g.n < 2 || g.r[0][1] == 0)
        throw InternalCheckError("stabilizer_products: expected a relabeled graph with adjacent pivots");
    const auto gens = graph_generators(g);
    std::vector<StabilizerProduct> prods;
    for (int k = 0; k < g.d; ++k) {
        StabilizerProduct p;
        p.family = 1;
        p.k = k;
        p.word = weyl_mul(gens[0], weyl_pow(gens[1], k));
        prods.push_back(std::move(p));
    }
    for (int k : c_sites(g)) {
        StabilizerProduct p;
        p.family = 2;
        p.k = k;
        p.word = weyl_mul(gens[0], gens[k]);
        prods.push_back(std::move(p));
    }
    for (int k : d_sites(g)) {
        StabilizerProduct p;
        p.family = 3;
        p.k = k;
        p.word = gens[k];
        prods.push_back(std::move(p));
    }
    return prods;
}

CoefficientSet default_coefficients(const GraphSpec& g) {
    std::vector<int> class_size(g.d, 0);
    const auto cs = c_sites(g);
    for (int j : cs) class_size[class_of(g, j)]++;
    CoefficientSet out;
    out.c1.assign(g.d, Rational(1));
    for (int k = 1; k < g.d; ++k) out.c1[k] = Rational(1, 1 + class_size[k]);
    for (int j : cs) out.c2[j] = Rational(1, 1 + class_size[class_of(g, j)]);
    return out;
}

void validate_coefficients(const GraphSpec& g, const CoefficientSet& cs) {
    const auto c = c_sites(g);
    if (static_cast<int>(cs.c1.size()) != g.d)
        throw ConstraintError("coefficient set has " + std::to_string(cs.c1.size() ? cs.c1.size() - 1 : 0) +
                              " c1 entries, expected " + std::to_string(g.d - 1));
    if (cs.c2.size() != c.size())
        throw ConstraintError("coefficient set keys do not match the pivot's extra neighbors");
    for (int j : c)
        if (!cs.c2.count(j))
            throw ConstraintError("missing c2 coefficient for relabeled party " + std::to_string(j + 1));
    auto in_range = [](const Rational& r) { return r.num > 0 && r.num <= r.den; };
    for (int k = 1; k < g.d; ++k) {
        if (!in_range(cs.c1[k]))
            throw ConstraintError("c1[" + std::to_string(k) + "] = " + cs.c1[k].str() + " outside (0,1]");
        Rational sum = cs.c1[k];
        for (int j : c)
            if (class_of(g, j) == k) sum = sum + cs.c2.at(j);
        if (sum != Rational(1))
            throw ConstraintError("c1[" + std::to_string(k) + "] plus its class sums to " + sum.str() +
                                  ", expected 1");
    }
    for (const auto& [j, v] : cs.c2)
        if (!in_range(v))
            throw ConstraintError("c2[" + std::to_string(j + 1) + "] = " + v.str() + " outside (0,1]");
}

namespace {

// Per-site descriptors of one stabilizer product: the X-carrying site at
// party 0 (exponent m of its Z part), the X-carrying non-pivot site if any,
// and the plain Z powers elsewhere. Families 1 and 2 carry the party-0 X.
struct ProductShape {
    int m = 0;                                  // Z exponent at party 0 (families 1, 2)
    std::vector<Factor> base;                   // factors at parties >= 1, power multiplier per unit n
};

ProductShape product_shape(const GraphSpec& g, const StabilizerProduct& p) {
    ProductShape s;
    const int d = g.d;
    auto push = [&](int party, int setting, int power) {
        const int pw = ((power % d) + d) % d;
        if (pw) s.base.push_back({party, setting, pw});
    };
    if (p.family == 1) {
        const int k = p.k;
        s.m = k * g.r[0][1] % d;
        if (k == 0)
            push(1, 0, g.r[0][1]);
        else
            s.base.push_back({1, k, 1});
        for (int j = 2; j < g.n; ++j) push(j, 0, g.r[0][j] + k * g.r[1][j]);
    } else if (p.family == 2) {
        const int k = p.k;
        s.m = g.r[0][k] % d;
        push(1, 0, g.r[0][1] + g.r[1][k]);
        s.base.push_back({k, 1, 1});
        for (int j = 2; j < g.n; ++j)
            if (j != k) push(j, 0, g.r[0][j] + g.r[k][j]);
    } else {
        const int k = p.k;
        push(1, 0, g.r[1][k]);
        s.base.push_back({k, 1, 1});
        for (int j = 2; j < g.n; ++j)
            if (j != k) push(j, 0, g.r[k][j]);
    }
    std::sort(s.base.begin(), s.base.end(),
              [](const Factor& a, const Factor& b) { return a.party < b.party; });

    // Cross-check the shape against the symbolic word: X exponents must sit
    // exactly where the settings say, Z exponents must match the powers.
    std::vector<int> xs(g.n, 0), zs(g.n, 0);
    if (p.family != 3) {
        xs[0] = 1;
        zs[0] = s.m;
    }
    for (const auto& f : s.base) {
        if (f.setting == 0) {
            zs[f.party] = f.power;
        } else if (f.party == 1) {
            xs[1] = f.setting;          // family 1, setting k means X^k
            zs[1] = g.r[0][1];
        } else {
            xs[f.party] = 1;            // families 2, 3: single X
            zs[f.party] = p.family == 2 ? g.r[0][f.party] : 0;
        }
    }
    // family 1, k = 0 leaves site 1 as a pure Z power recorded in base above;
    // its zs entry was already set by the setting-0 branch.
    if (p.word.xs != xs || p.word.zs != zs)
        throw InternalCheckError("stabilizer product shape disagrees with the symbolic word");
    return s;
}

}  // namespace

BellExpression build_expression(const GraphSpec& g_in, int v1, int v2, const CoefficientSet* coeffs) {
    validate_graph(g_in);
    if (g_in.d == 2) return qubit_inequality(g_in, v1);

    const int d = g_in.d;
    auto pivots = choose_pivots(g_in);
    if (v1 >= 0) {
        if (v1 >= g_in.n) throw InputError("BAD_INDEX", "pivot out of range");
        pivots.first = v1;
        if (v2 >= 0) {
            if (v2 >= g_in.n || v2 == v1) throw InputError("BAD_INDEX", "second pivot out of range");
            pivots.second = v2;
        } else {
            // mirror the automatic rule among v1's neighbors
            int best = -1;
            for (int j : g_in.neighbors(v1))
                if (best < 0 || g_in.r[v1][j] > g_in.r[v1][best]) best = j;
            pivots.second = best;
        }
        if (pivots.second < 0 || g_in.r[pivots.first][pivots.second] == 0)
            throw InputError("PIVOTS_NOT_ADJACENT", "second pivot must neighbor the first");
    }

    BellExpression expr;
    expr.d = d;
    auto& m = expr.meta;
    m.has_meta = true;
    m.graph = g_in;
    m.v1 = pivots.first;
    m.v2 = pivots.second;
    m.relabeled = relabel_for_pivots(g_in, m.v1, m.v2, &m.perm);
    m.n1 = g_in.degree(m.v1);
    m.coeffs = coeffs ? *coeffs : default_coefficients(m.relabeled);
    validate_coefficients(m.relabeled, m.coeffs);

    const GraphSpec& g = m.relabeled;
    const LambdaTable lt = resolve_convention(d);
    m.convention = lt.convention;

    expr.scenario.assign(g.n, 2);
    expr.scenario[0] = d;
    expr.scenario[1] = d;

    const auto prods = stabilizer_products(g);
    std::map<std::vector<Factor>, Cx, FactorLess> acc;
    const double sqd = std::sqrt(static_cast<double>(d));
    for (int n = 1; n < d; ++n) {
        for (const auto& p : prods) {
            double weight = 1.0;
            if (p.family == 1 && p.k != 0) weight = m.coeffs.c1[p.k].value();
            if (p.family == 2) weight = m.coeffs.c2.at(p.k).value();
            const ProductShape shape = product_shape(g, p);
            std::vector<Factor> basen;
            for (const auto& f : shape.base) {
                const int pw = f.power * n % d;
                if (pw) basen.push_back({f.party, f.setting, pw});
            }
            if (p.family == 3) {
                acc[basen] += weight;
                continue;
            }
            const Cx pref = weight * omega(d, -static_cast<long long>(n) * shape.m * (shape.m + 1)) /
                            (sqd * lt(n));
            for (int t = 0; t < d; ++t) {
                std::vector<Factor> key;
                key.reserve(basen.size() + 1);
                key.push_back({0, t, n});
                key.insert(key.end(), basen.begin(), basen.end());
                acc[key] += pref * omega(d, -static_cast<long long>(n) * t * shape.m);
            }
        }
    }

    for (auto& [key, coeff] : acc) {
        if (std::abs(coeff) < 1e-15) continue;
        expr.terms.push_back({coeff, key});
    }

    const int N = g.n, N1 = m.n1;
    m.term_count = static_cast<std::int64_t>(expr.terms.size());
    const std::int64_t expect =
        static_cast<std::int64_t>(d - 1) * (d * (d + N1 - 1) + (N - N1 - 1));
    if (m.term_count != expect)
        throw InternalCheckError("term count " + std::to_string(m.term_count) + " != structural count " +
                                 std::to_string(expect));
    m.term_count_printed_formula =
        static_cast<std::int64_t>(d - 1) * (N + (N1 + d) * (d - 1));
    return expr;
}

double quantum_bound(const BellExpression& expr) {
    if (!expr.meta.has_meta)
        throw InputError("NO_META", "expression carries no construction metadata");
    const int N = expr.parties(), N1 = expr.meta.n1, d = expr.d;
    if (expr.meta.variant == "qubit") return N + N1 - 1;
    return static_cast<double>(d - 1) * (N - N1 + d - 1);
}

double quantum_bound_for_graph(const GraphSpec& g, int v1) {
    validate_graph(g);
    const int p = v1 >= 0 ? v1 : choose_pivots(g).first;
    if (p >= g.n) throw InputError("BAD_INDEX", "pivot out of range");
    const int N1 = g.degree(p);
    if (g.d == 2) return g.n + N1 - 1;
    return static_cast<double>(g.d - 1) * (g.n - N1 + g.d - 1);
}

Realization ideal_realization(const BellExpression& expr) {
    if (!expr.meta.has_meta)
        throw InputError("NO_META", "expression carries no construction metadata");
    const GraphSpec& g = expr.meta.relabeled;
    const int d = g.d;
    Realization real;
    real.d = d;
    real.state = synthesize_state(g);
    real.obs.resize(g.n);

    const ComplexMatrix X = pauli_x(d), Z = pauli_z(d);
    if (expr.meta.variant == "qubit") {
        const double s = 1.0 / std::sqrt(2.0);
        real.obs[0] = {s * (X + Z), s * (X - Z)};
        for (int j = 1; j < g.n; ++j) real.obs[j] = {X, Z};
        return real;
    }

    const LambdaTable lt = make_lambda_table(d, expr.meta.convention);
    real.obs[0].reserve(d);
    for (int t = 0; t < d; ++t) {
        ComplexMatrix acc(d, d);
        for (int k = 0; k < d; ++k)
            acc = acc + omega(d, static_cast<long long>(t) * k + static_cast<long long>(k) * (k + 1)) *
                            (X * mpow(Z, k));
        real.obs[0].push_back(lt(1) / std::sqrt(static_cast<double>(d)) * acc);
    }
    real.obs[1].push_back(Z);
    for (int k = 1; k < d; ++k) real.obs[1].push_back(mpow(Z, g.r[0][1]) * mpow(X, k));
    for (int j = 2; j < g.n; ++j) {
        if (g.r[0][j] != 0)
            real.obs[j] = {Z, mpow(Z, g.r[0][j]) * X};
        else
            real.obs[j] = {Z, X};
    }
    return real;
}

Realization random_realization(const BellExpression& expr, std::uint64_t seed) {
    if (!expr.meta.has_meta)
        throw InputError("NO_META", "expression carries no construction metadata");
    const GraphSpec& g = expr.meta.relabeled;
    const int d = g.d;
    Rng rng(seed);

    // unitary with spectrum in the d-th roots of unity: Q diag(w^k) Q^dag,
    // Q from Gram-Schmidt on a Gaussian draw
    auto draw = [&]() {
        while (true) {
            ComplexMatrix q(d, d);
            for (auto& v : q.a) v = Cx(rng.gaussian(), rng.gaussian());
            bool ok = true;
            for (int c = 0; c < d && ok; ++c) {
                for (int p = 0; p < c; ++p) {
                    Cx dot = 0;
                    for (int rrow = 0; rrow < d; ++rrow)
                        dot += std::conj(q.at(rrow, p)) * q.at(rrow, c);
                    for (int rrow = 0; rrow < d; ++rrow) q.at(rrow, c) -= dot * q.at(rrow, p);
                }
                double nn = 0;
                for (int rrow = 0; rrow < d; ++rrow) nn += std::norm(q.at(rrow, c));
                nn = std::sqrt(nn);
                if (nn < 1e-8) {
                    ok = false;  // degenerate draw, retry
                    break;
                }
                for (int rrow = 0; rrow < d; ++rrow) q.at(rrow, c) /= nn;
            }
            if (!ok) continue;
            ComplexMatrix diag(d, d);
            for (int k = 0; k < d; ++k)
                diag.at(k, k) = omega(d, static_cast<long long>(rng.uniform_mod(d)));
            return q * diag * adjoint(q);
        }
    };

    Realization real;
    real.d = d;
    real.state = synthesize_state(g);
    real.obs.resize(g.n);
    for (int j = 0; j < g.n; ++j) {
        const int settings = expr.scenario[j];
        for (int s = 0; s < settings; ++s) real.obs[j].push_back(draw());
    }
    return real;
}

double quantum_value(const BellExpression& expr, const Realization& real, int threads) {
    const int parties = expr.parties();
    if (static_cast<int>(real.obs.size()) != parties || real.state.sites != parties)
        throw InputError("SHAPE", "realization does not match the expression's party count");
    for (int p = 0; p < parties; ++p)
        if (static_cast<int>(real.obs[p].size()) < expr.scenario[p])
            throw InputError("SHAPE", "realization is missing settings at party " + std::to_string(p + 1));

    const std::uint64_t nt = expr.terms.size();
    std::vector<Cx> per_term(nt);
    parallel_chunks(nt, threads, [&](int, std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i) {
            const auto& t = expr.terms[i];
            StateVector phi = real.state;
            for (const auto& f : t.factors)
                apply_local(phi, f.party, mpow(real.obs[f.party][f.setting], f.power));
            per_term[i] = t.coeff * inner(real.state, phi);
        }
    });
    Cx total = 0;
    for (const auto& v : per_term) total += v;  // fixed order, thread-count independent
    if (std::abs(total.imag()) > 1e-9)
        throw InternalCheckError("Bell value has imaginary part " + std::to_string(total.imag()));
    return total.real();
}

ComplexMatrix tilde_combination(const std::vector<ComplexMatrix>& settings, int m, int n,
                                const LambdaTable& lt) {
    const int d = lt.d;
    ComplexMatrix acc(settings[0].rows, settings[0].cols);
    for (int t = 0; t < d; ++t)
        acc = acc + omega(d, -static_cast<long long>(n) * t * m) * mpow(settings[t], n);
    const Cx pref =
        omega(d, -static_cast<long long>(n) * m * (m + 1)) / (std::sqrt(static_cast<double>(d)) * lt(n));
    return pref * acc;
}

SosReport sos_residual(const BellExpression& expr, const Realization& real, int trials,
                       std::uint64_t seed) {
    if (!expr.meta.has_meta)
        throw InputError("NO_META", "expression carries no construction metadata");
    if (expr.meta.variant != "qudit")
        throw InputError("VARIANT", "sum-of-squares check applies to the odd-prime construction");
    const GraphSpec& g = expr.meta.relabeled;
    const int d = g.d;
    if (static_cast<int>(real.obs.size()) != g.n)
        throw InputError("SHAPE", "realization does not match the expression's party count");
    for (int p = 0; p < g.n; ++p)
        if (static_cast<int>(real.obs[p].size()) < expr.scenario[p])
            throw InputError("SHAPE", "realization is missing settings at party " + std::to_string(p + 1));
    SosReport rep;

    for (int p = 0; p < g.n; ++p) {
        for (int s = 0; s < expr.scenario[p]; ++s) {
            const auto& M = real.obs[p][s];
            const double ud = unitarity_defect(M);
            const double od = max_abs_diff(mpow(M, d), ComplexMatrix::identity(d));
            if (ud > 1e-10 || od > 1e-10) {
                rep.preconditions_ok = false;
                rep.warnings.push_back("party " + std::to_string(p + 1) + " setting " + std::to_string(s) +
                                       (ud > 1e-10 ? " is not unitary" : " does not have order d"));
            }
        }
    }

    const LambdaTable lt = make_lambda_table(d, expr.meta.convention);
    const auto prods = stabilizer_products(g);

    // per-piece weight and per-site matrices of the tilde-decorated product
    struct Piece {
        double weight;
        std::vector<std::pair<int, ComplexMatrix>> factors;
    };
    std::vector<Piece> pieces;
    for (int n = 1; n < d; ++n) {
        for (const auto& p : prods) {
            Piece pc;
            pc.weight = 1.0;
            if (p.family == 1 && p.k != 0) pc.weight = expr.meta.coeffs.c1[p.k].value();
            if (p.family == 2) pc.weight = expr.meta.coeffs.c2.at(p.k).value();
            const ProductShape shape = product_shape(g, p);
            if (p.family != 3)
                pc.factors.emplace_back(0, tilde_combination(real.obs[0], shape.m, n, lt));
            for (const auto& f : shape.base) {
                const int pw = f.power * n % d;
                if (pw) pc.factors.emplace_back(f.party, mpow(real.obs[f.party][f.setting], pw));
            }
            pieces.push_back(std::move(pc));
        }
    }

    const double bq = quantum_bound(expr);
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const StateVector phi = random_state(d, g.n, rng);
        StateVector res = phi;
        for (auto& v : res.amp) v *= bq;

        for (const auto& t : expr.terms) {
            StateVector tv = phi;
            for (const auto& f : t.factors)
                apply_local(tv, f.party, mpow(real.obs[f.party][f.setting], f.power));
            for (std::int64_t i = 0; i < res.dim(); ++i) res.amp[i] -= t.coeff * tv.amp[i];
        }

        for (const auto& pc : pieces) {
            StateVector y = phi;
            apply_factors(y, pc.factors);
            for (std::int64_t i = 0; i < y.dim(); ++i) y.amp[i] = phi.amp[i] - y.amp[i];
            StateVector z = y;
            for (const auto& [site, M] : pc.factors) apply_local(z, site, adjoint(M));
            for (std::int64_t i = 0; i < res.dim(); ++i)
                res.amp[i] -= 0.5 * pc.weight * (y.amp[i] - z.amp[i]);
        }
        rep.max_residual = std::max(rep.max_residual, norm(res));
    }
    return rep;
}

BellExpression qubit_inequality(const GraphSpec& g_in, int v1) {
    validate_graph(g_in);
    if (g_in.d != 2) throw InputError("BAD_DIMENSION", "the two-setting variant needs d = 2");

    int p1 = v1 >= 0 ? v1 : choose_pivots(g_in).first;
    if (p1 >= g_in.n) throw InputError("BAD_INDEX", "pivot out of range");
    const auto nb1 = g_in.neighbors(p1);
    if (nb1.empty()) throw InputError("DISCONNECTED", "pivot has no neighbors");

    BellExpression expr;
    expr.d = 2;
    auto& m = expr.meta;
    m.has_meta = true;
    m.variant = "qubit";
    m.graph = g_in;
    m.v1 = p1;
    m.v2 = -1;
    m.relabeled = relabel_for_pivots(g_in, p1, nb1.front(), &m.perm);
    m.n1 = static_cast<int>(nb1.size());

    const GraphSpec& g = m.relabeled;
    expr.scenario.assign(g.n, 2);

    const double s = 1.0 / std::sqrt(2.0);
    const auto nb = g.neighbors(0);
    auto z_factors = [&](const std::vector<int>& sites, int skip) {
        std::vector<Factor> out;
        for (int j : sites)
            if (j != skip) out.push_back({j, 1, 1});
        return out;
    };

    const int N1 = static_cast<int>(nb.size());
    std::vector<Factor> base = z_factors(nb, -1);
    for (int x : {0, 1}) {
        std::vector<Factor> fs;
        fs.push_back({0, x, 1});
        fs.insert(fs.end(), base.begin(), base.end());
        expr.terms.push_back({Cx(N1 * s, 0), fs});
    }
    for (int i : nb) {
        std::vector<Factor> rest;
        rest.push_back({i, 0, 1});
        for (int j : g.neighbors(i))
            if (j != 0) rest.push_back({j, 1, 1});
        std::sort(rest.begin(), rest.end(),
                  [](const Factor& a, const Factor& b) { return a.party < b.party; });
        for (int x : {0, 1}) {
            std::vector<Factor> fs;
            fs.push_back({0, x, 1});
            fs.insert(fs.end(), rest.begin(), rest.end());
            expr.terms.push_back({Cx(x == 0 ? s : -s, 0), fs});
        }
    }
    for (int i = 1; i < g.n; ++i) {
        if (g.r[0][i] != 0) continue;
        std::vector<Factor> fs;
        fs.push_back({i, 0, 1});
        for (int j : g.neighbors(i)) fs.push_back({j, 1, 1});
        std::sort(fs.begin(), fs.end(),
                  [](const Factor& a, const Factor& b) { return a.party < b.party; });
        expr.terms.push_back({Cx(1, 0), fs});
    }

    std::sort(expr.terms.begin(), expr.terms.end(),
              [](const BellTerm& a, const BellTerm& b) { return FactorLess{}(a.factors, b.factors); });
    m.term_count = static_cast<std::int64_t>(expr.terms.size());
    m.term_count_printed_formula = m.term_count;
    return expr;
}

double qubit_classical_bound_formula(const BellExpression& expr) {
    if (!expr.meta.has_meta || expr.meta.variant != "qubit")
        throw InputError("VARIANT", "formula applies to the two-setting variant");
    const int N = expr.parties(), N1 = expr.meta.n1;
    return N + (std::sqrt(2.0) - 1.0) * N1 - 1.0;
}

}  // namespace graphbell
