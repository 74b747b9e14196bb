// Symbolic Weyl word algebra against dense matrix oracles, plus the
// matrix-free state application paths.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "graphbell/eig.hpp"
#include "graphbell/matrix.hpp"
#include "graphbell/parallel.hpp"
#include "graphbell/rng.hpp"
#include "graphbell/state.hpp"
#include "graphbell/weyl.hpp"

using namespace graphbell;

namespace {

WeylWord random_word(int d, int sites, Rng& rng, bool zero_phase = false) {
    WeylWord w = weyl_identity(d, sites);
    w.phase = zero_phase ? 0 : rng.uniform_mod(d);
    for (int s = 0; s < sites; ++s) {
        w.xs[s] = rng.uniform_mod(d);
        w.zs[s] = rng.uniform_mod(d);
    }
    return w;
}

// Partial transpose of a dense d^N matrix on the masked sites, computed by
// raw index shuffling. Independent of the symbolic transpose rule.
ComplexMatrix dense_partial_transpose(const ComplexMatrix& m, int d, const std::vector<int>& mask) {
    const int n = static_cast<int>(mask.size());
    ComplexMatrix out(m.rows, m.cols);
    std::vector<int> ri(n), ci(n);
    for (int r = 0; r < m.rows; ++r) {
        int t = r;
        for (int s = n - 1; s >= 0; --s) { ri[s] = t % d; t /= d; }
        for (int c = 0; c < m.cols; ++c) {
            t = c;
            for (int s = n - 1; s >= 0; --s) { ci[s] = t % d; t /= d; }
            int rr = 0, cc = 0;
            for (int s = 0; s < n; ++s) {
                rr = rr * d + (mask[s] ? ci[s] : ri[s]);
                cc = cc * d + (mask[s] ? ri[s] : ci[s]);
            }
            out.at(rr, cc) = m.at(r, c);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("single-site X and Z have the defining matrix elements") {
    for (int d : {2, 3, 5, 7}) {
        const ComplexMatrix x = pauli_x(d), z = pauli_z(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                CHECK(std::abs(x.at(i, j) - (i == (j + 1) % d ? Cx(1) : Cx(0))) < 1e-15);
                CHECK(std::abs(z.at(i, j) - (i == j ? omega(d, i) : Cx(0))) < 1e-15);
            }
        // XZ = omega^{-1} ZX
        CHECK(max_abs_diff(x * z, omega(d, -1) * (z * x)) < 1e-14);
    }
}

TEST_CASE("weyl_mul agrees with dense matrix products") {
    // 100 random pairs per (d, N) in {2,3,5} x {1..4}; the biggest dense
    // dimension is 5^4 = 625, so the check is parallelized over pairs.
    for (int d : {2, 3, 5}) {
        for (int sites = 1; sites <= 4; ++sites) {
            std::vector<double> err(100, 0.0);
            parallel_chunks(100, 8, [&](int, std::uint64_t lo, std::uint64_t hi) {
                for (std::uint64_t t = lo; t < hi; ++t) {
                    Rng rng(1000 * d + 10 * sites + t);
                    const WeylWord a = random_word(d, sites, rng);
                    const WeylWord b = random_word(d, sites, rng);
                    err[t] = max_abs_diff(weyl_to_matrix(weyl_mul(a, b)),
                                          weyl_to_matrix(a) * weyl_to_matrix(b));
                }
            });
            for (double e : err) CHECK(e < 1e-12);
        }
    }
}

TEST_CASE("weyl_mul is associative") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = std::vector<int>{2, 3, 5, 7}[rng.uniform_mod(4)];
        const int sites = 1 + rng.uniform_mod(5);
        const WeylWord a = random_word(d, sites, rng);
        const WeylWord b = random_word(d, sites, rng);
        const WeylWord c = random_word(d, sites, rng);
        CHECK(weyl_equal(weyl_mul(weyl_mul(a, b), c), weyl_mul(a, weyl_mul(b, c))));
    }
}

TEST_CASE("weyl_pow matches repeated multiplication and the dense oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = std::vector<int>{2, 3, 5}[rng.uniform_mod(3)];
        const int sites = 1 + rng.uniform_mod(3);
        const WeylWord w = random_word(d, sites, rng);
        WeylWord acc = weyl_identity(d, sites);
        for (int n = 0; n <= 2 * d; ++n) {
            CHECK(weyl_equal(weyl_pow(w, n), acc));
            acc = weyl_mul(acc, w);
        }
        CHECK(max_abs_diff(weyl_to_matrix(weyl_pow(w, 3)), mpow(weyl_to_matrix(w), 3)) < 1e-12);
    }
}

TEST_CASE("phase-free words have order d for odd prime d") {
    Rng rng(13);
    for (int d : {3, 5, 7}) {
        for (int trial = 0; trial < 50; ++trial) {
            const WeylWord w = random_word(d, 1 + rng.uniform_mod(6), rng, /*zero_phase=*/true);
            CHECK(weyl_equal(weyl_pow(w, d), weyl_identity(d, w.sites())));
        }
    }
    // d = 2 is the exception: (X^a Z^b)^2 = (-1)^{a.b} with a.b = sum_i a_i b_i.
    Rng rng2(17);
    for (int trial = 0; trial < 50; ++trial) {
        const WeylWord w = random_word(2, 1 + rng2.uniform_mod(6), rng2, /*zero_phase=*/true);
        int dot = 0;
        for (int s = 0; s < w.sites(); ++s) dot += w.xs[s] * w.zs[s];
        const WeylWord sq = weyl_pow(w, 2);
        CHECK(weyl_is_scalar(sq));
        CHECK(sq.phase == dot % 2);
    }
}

TEST_CASE("weyl_transpose agrees with dense partial transposition") {
    Rng rng(19);
    for (int d : {2, 3}) {
        for (int sites = 1; sites <= 3; ++sites) {
            for (int trial = 0; trial < 40; ++trial) {
                const WeylWord w = random_word(d, sites, rng);
                std::vector<int> mask(sites);
                for (int s = 0; s < sites; ++s) mask[s] = static_cast<int>(rng.uniform_mod(2));
                CHECK(max_abs_diff(weyl_to_matrix(weyl_transpose(w, mask)),
                                   dense_partial_transpose(weyl_to_matrix(w), d, mask)) < 1e-12);
            }
        }
    }
}

TEST_CASE("transposing twice is the identity") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = std::vector<int>{2, 3, 5}[rng.uniform_mod(3)];
        const WeylWord w = random_word(d, 1 + rng.uniform_mod(5), rng);
        std::vector<int> mask(w.sites());
        for (auto& m : mask) m = static_cast<int>(rng.uniform_mod(2));
        CHECK(weyl_equal(weyl_transpose(weyl_transpose(w, mask), mask), w));
    }
}

TEST_CASE("commutation_phase is antisymmetric and matches a b = omega^q b a") {
    Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = std::vector<int>{2, 3, 5}[rng.uniform_mod(3)];
        const int sites = 1 + rng.uniform_mod(4);
        const WeylWord a = random_word(d, sites, rng);
        const WeylWord b = random_word(d, sites, rng);
        const int q = commutation_phase(a, b);
        CHECK((q + commutation_phase(b, a)) % d == 0);
        CHECK(weyl_equal(weyl_mul(a, b), [&] {
            WeylWord ba = weyl_mul(b, a);
            ba.phase = (ba.phase + q) % d;
            return ba;
        }()));
    }
    // textbook case: single-site X vs Z
    const WeylWord x = weyl_single(3, 1, 0, 1, 0), z = weyl_single(3, 1, 0, 0, 1);
    CHECK(commutation_phase(x, z) == 2);  // XZ = omega^{-1} ZX
    CHECK(commutation_phase(z, x) == 1);
}

TEST_CASE("apply_local matches dense Kronecker application") {
    Rng rng(31);
    for (int d : {2, 3, 5}) {
        for (int sites = 1; sites <= 4; ++sites) {
            std::int64_t dim = 1;
            for (int s = 0; s < sites; ++s) dim *= d;
            if (dim > 256) continue;
            for (int trial = 0; trial < 10; ++trial) {
                StateVector psi = random_state(d, sites, rng);
                const int site = static_cast<int>(rng.uniform_mod(sites));
                ComplexMatrix m(d, d);
                for (auto& e : m.a) e = Cx(rng.gaussian(), rng.gaussian());

                ComplexMatrix full = ComplexMatrix::identity(1);
                for (int s = 0; s < sites; ++s)
                    full = kron(full, s == site ? m : ComplexMatrix::identity(d));
                std::vector<Cx> want(dim, Cx(0));
                for (int r = 0; r < dim; ++r)
                    for (int c = 0; c < dim; ++c) want[r] += full.at(r, c) * psi.amp[c];

                apply_local(psi, site, m);
                double err = 0;
                for (int r = 0; r < dim; ++r) err = std::max(err, std::abs(psi.amp[r] - want[r]));
                CHECK(err < 1e-12);
            }
        }
    }
}

TEST_CASE("apply_weyl matches dense word application") {
    Rng rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = std::vector<int>{2, 3, 5}[rng.uniform_mod(3)];
        const int sites = 1 + rng.uniform_mod(3);
        const WeylWord w = random_word(d, sites, rng);
        StateVector psi = random_state(d, sites, rng);

        const ComplexMatrix m = weyl_to_matrix(w);
        std::vector<Cx> want(psi.dim(), Cx(0));
        for (int r = 0; r < psi.dim(); ++r)
            for (int c = 0; c < psi.dim(); ++c) want[r] += m.at(r, c) * psi.amp[c];

        apply_weyl(psi, w);
        double err = 0;
        for (int r = 0; r < psi.dim(); ++r) err = std::max(err, std::abs(psi.amp[r] - want[r]));
        CHECK(err < 1e-12);
    }
}

TEST_CASE("weyl_to_matrix refuses dimensions beyond the dense cap") {
    const WeylWord w = weyl_identity(3, 9);  // 3^9 = 19683 > 4096
    CHECK_THROWS(weyl_to_matrix(w));
}

TEST_CASE("reduced_density traces out the right sites") {
    // product state |0> x |+>: reducing to site 0 gives |0><0|, site 1 gives
    // the maximally coherent |+><+|.
    StateVector psi = zero_basis_state(3, 2);
    ComplexMatrix had(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) had.at(i, j) = omega(3, i * j) / std::sqrt(3.0);
    apply_local(psi, 1, had);
    const ComplexMatrix rho0 = reduced_density(psi, {0});
    const ComplexMatrix rho1 = reduced_density(psi, {1});
    ComplexMatrix want0(3, 3);
    want0.at(0, 0) = 1.0;
    ComplexMatrix want1(3, 3);
    for (auto& e : want1.a) e = 1.0 / 3.0;
    CHECK(max_abs_diff(rho0, want0) < 1e-12);
    CHECK(max_abs_diff(rho1, want1) < 1e-12);
}

TEST_CASE("hermitian_max_eigenvalue on small fixtures") {
    // diag(1,2,3) -> 3
    const auto diag_op = [](const std::vector<Cx>& x, std::vector<Cx>& y) {
        for (size_t i = 0; i < x.size(); ++i) y[i] = static_cast<double>(i + 1) * x[i];
    };
    const EigResult r = hermitian_max_eigenvalue(diag_op, 3);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 3.0) < 1e-8);

    // non-Hermitian operators are rejected up front
    const auto shift_op = [](const std::vector<Cx>& x, std::vector<Cx>& y) {
        for (size_t i = 0; i + 1 < x.size(); ++i) y[i] = x[i + 1];
        y[x.size() - 1] = 0.0;
    };
    CHECK_THROWS_AS(hermitian_max_eigenvalue(shift_op, 8), std::invalid_argument);
}

TEST_CASE("rng streams are reproducible and box-muller is deterministic") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.raw() == b.raw());
        CHECK(a.uniform_mod(7) == b.uniform_mod(7));
        CHECK(a.gaussian() == b.gaussian());
    }
    Rng c(43);
    bool differs = false;
    Rng a2(42);
    for (int i = 0; i < 10; ++i) differs |= (a2.raw() != c.raw());
    CHECK(differs);
}
