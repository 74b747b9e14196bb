// Graph state synthesis against its defining stabilizer property, a dense
// projector-product oracle, and known marginal structure.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "graphbell/graph.hpp"
#include "graphbell/graph_state.hpp"
#include "graphbell/matrix.hpp"
#include "graphbell/state.hpp"
#include "graphbell/weyl.hpp"

using namespace graphbell;

namespace {

// P = prod_i (1/d) sum_k G_i^k projects onto the joint +1 eigenspace; for a
// connected graph that space is one-dimensional, so P must equal |G><G|.
ComplexMatrix projector_product(const GraphSpec& g) {
    std::int64_t dim = 1;
    for (int s = 0; s < g.n; ++s) dim *= g.d;
    ComplexMatrix p = ComplexMatrix::identity(static_cast<int>(dim));
    for (const WeylWord& gen : graph_generators(g)) {
        ComplexMatrix avg(static_cast<int>(dim), static_cast<int>(dim));
        for (int k = 0; k < g.d; ++k) {
            const ComplexMatrix gk = weyl_to_matrix(weyl_pow(gen, k));
            for (size_t e = 0; e < avg.a.size(); ++e) avg.a[e] += gk.a[e] / static_cast<double>(g.d);
        }
        p = p * avg;
    }
    return p;
}

}  // namespace

TEST_CASE("generators have the X_i prod Z_j^{r_ij} structure") {
    const auto gens = graph_generators(builtin_graph("ame43"));
    REQUIRE(gens.size() == 4);
    // vertex 1: X on site 0, Z on its ring neighbors 2 and 4
    CHECK(gens[0].xs == std::vector<int>{1, 0, 0, 0});
    CHECK(gens[0].zs == std::vector<int>{0, 1, 0, 1});
    CHECK(gens[0].phase == 0);
    // vertex 3 touches the double edge: Z^2 on site 4
    CHECK(gens[2].xs == std::vector<int>{0, 0, 1, 0});
    CHECK(gens[2].zs == std::vector<int>{0, 1, 0, 2});
    // pair(5): X x Z and Z x X
    const auto pg = graph_generators(builtin_graph("pair:5"));
    CHECK(pg[0].xs == std::vector<int>{1, 0});
    CHECK(pg[0].zs == std::vector<int>{0, 1});
    CHECK(pg[1].xs == std::vector<int>{0, 1});
    CHECK(pg[1].zs == std::vector<int>{1, 0});
}

TEST_CASE("generators commute and have order d") {
    for (const char* name : {"ame43", "pair:5", "star:5,3", "cycle:5,3", "random:5,3,2"}) {
        const GraphSpec g = builtin_graph(name);
        const auto gens = graph_generators(g);
        for (size_t i = 0; i < gens.size(); ++i) {
            CHECK(weyl_equal(weyl_pow(gens[i], g.d), weyl_identity(g.d, g.n)));
            for (size_t j = i + 1; j < gens.size(); ++j)
                CHECK(commutation_phase(gens[i], gens[j]) == 0);
        }
    }
}

TEST_CASE("synthesized state is stabilized by every generator") {
    for (const char* name :
         {"ame43", "pair:2", "pair:3", "pair:7", "star:4,3", "line:5,3", "cycle:4,2", "random:6,3,1",
          "random:5,2,8", "random:4,5,3"}) {
        const GraphSpec g = builtin_graph(name);
        const StateVector psi = synthesize_state(g);
        CHECK(std::abs(norm(psi) - 1.0) < 1e-12);
        CHECK(verify_stabilization(g, psi) < 1e-10);
    }
}

TEST_CASE("the all-zeros product state is not a graph state") {
    const GraphSpec g = builtin_graph("star:4,3");
    CHECK(verify_stabilization(g, zero_basis_state(3, 4)) > 0.5);
}

TEST_CASE("explicit amplitudes for the 3-vertex qubit star") {
    // CZ structure gives amplitudes 2^{-3/2} (-1)^{k1(k2+k3)}, which is the
    // GHZ-like (|0,+,+> + |1,-,->)/sqrt(2)
    const StateVector psi = synthesize_state(builtin_graph("star:3,2"));
    const double a = 1.0 / std::sqrt(8.0);
    const std::vector<double> sign{1, 1, 1, 1, 1, -1, -1, 1};
    REQUIRE(psi.dim() == 8);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(psi.amp[k] - sign[k] * a) < 1e-12);
}

TEST_CASE("pair(3) amplitudes carry the CZ phase omega^{k1 k2}") {
    const StateVector psi = synthesize_state(builtin_graph("pair:3"));
    for (int k1 = 0; k1 < 3; ++k1)
        for (int k2 = 0; k2 < 3; ++k2)
            CHECK(std::abs(psi.amp[3 * k1 + k2] - omega(3, k1 * k2) / 3.0) < 1e-12);
}

TEST_CASE("synthesis agrees with the stabilizer projector product") {
    for (const char* name : {"ame43", "pair:3", "star:4,3", "line:3,3", "cycle:4,2"}) {
        const GraphSpec g = builtin_graph(name);
        const StateVector psi = synthesize_state(g);
        const ComplexMatrix p = projector_product(g);
        ComplexMatrix outer(static_cast<int>(psi.dim()), static_cast<int>(psi.dim()));
        for (int r = 0; r < psi.dim(); ++r)
            for (int c = 0; c < psi.dim(); ++c) outer.at(r, c) = psi.amp[r] * std::conj(psi.amp[c]);
        CHECK(max_abs_diff(p, outer) < 1e-10);
    }
}

TEST_CASE("every two-site marginal of the ame43 state is maximally mixed") {
    const StateVector psi = synthesize_state(builtin_graph("ame43"));
    ComplexMatrix mixed(9, 9);
    for (int i = 0; i < 9; ++i) mixed.at(i, i) = 1.0 / 9.0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            CHECK(max_abs_diff(reduced_density(psi, {a, b}), mixed) < 1e-12);
}

TEST_CASE("one-site marginals of the qutrit star are maximally mixed") {
    // locally GHZ-equivalent, so every single site is maximally mixed
    const StateVector psi = synthesize_state(builtin_graph("star:4,3"));
    ComplexMatrix mixed(3, 3);
    for (int i = 0; i < 3; ++i) mixed.at(i, i) = 1.0 / 3.0;
    for (int s = 0; s < 4; ++s) CHECK(max_abs_diff(reduced_density(psi, {s}), mixed) < 1e-12);
}

TEST_CASE("stabilization survives applying any generator power") {
    const GraphSpec g = builtin_graph("ame43");
    StateVector psi = synthesize_state(g);
    const auto gens = graph_generators(g);
    apply_weyl(psi, weyl_pow(gens[1], 2));
    apply_weyl(psi, gens[3]);
    CHECK(verify_stabilization(g, psi) < 1e-10);
}
