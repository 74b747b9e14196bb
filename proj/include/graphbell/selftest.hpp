#pragma once
// Device-independent certification checks for the d = 3 construction: the
// operator relations that ideal (and any bound-saturating) observables must
// satisfy, the canonical forms any order-3 solution of those relations can
// be rotated into, and the transposition analysis showing which partial
// transposes of the stabilizer products cannot share a +1 eigenvector.

#include <cstdint>
#include <string>
#include <vector>

#include "graphbell/bell.hpp"
#include "graphbell/coeffs.hpp"
#include "graphbell/construction.hpp"
#include "graphbell/graph.hpp"
#include "graphbell/matrix.hpp"

namespace graphbell {

struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::string detail;
};

// Tilde transform of the d settings at the pivot party:
//   At_k = (omega^{-k(k+1)} / (sqrt d lambda_1)) sum_t omega^{-tk} A_t.
std::vector<ComplexMatrix> tilde_observables(const std::vector<ComplexMatrix>& settings,
                                             const LambdaTable& lt);

// d = 3 relations on the tilde family: each At_k unitary, At^2 = At^dag,
// At^3 = 1, and {At_i, At_j} = -At_k^dag for distinct i, j, k.
std::vector<CheckResult> check_tilde_relations(const std::vector<ComplexMatrix>& settings,
                                               const LambdaTable& lt, double tol = 1e-10);

// d = 3 relations on the raw settings: {A_i, A_j} = -omega A_k^dag at the
// pivot, and at the second pivot the triple {B_0^{r01}, B_1, B_2} satisfies
// {e_i, e_j} = -e_k^dag. The Bell expression only ever couples powers
// B_0^{n r01}, so for a pivot edge of multiplicity r01 the closing element
// is that power; r01 = 1 gives the plain relation.
std::vector<CheckResult> check_pivot_anticommutation(const std::vector<ComplexMatrix>& a,
                                                     double tol = 1e-10);
std::vector<CheckResult> check_second_pivot_anticommutation(const std::vector<ComplexMatrix>& b,
                                                            int r01 = 1, double tol = 1e-10);

// d = 3, remaining parties: {C_0^{r_0k}, C_1} and {D_0^{r}, D_1} must be
// unitary, where r for a D party comes from an edge to an already
// characterized vertex (breadth-first from {0, 1} and the C set, lowest
// anchor first).
std::vector<CheckResult> check_unitary_anticommutators(
    const GraphSpec& relabeled, const std::vector<std::vector<ComplexMatrix>>& obs,
    double tol = 1e-10);

// Frozen d = 3 canonical-form verification: the reference anticommuting pair
// on a 2-dimensional auxiliary (projector ranks 0, 1, 2), and the four
// conjugations that bring it, then the second-party pair, to the standard
// X / XZ / Z / ZX / Z^2 X forms up to partial transposition.
std::vector<CheckResult> check_canonical_forms(double tol = 1e-10);

// Partial-transposition analysis of the stabilizer products. For a site mask
// (1 = transpose that site) the products either still admit a common +1
// eigenvector (all-zero mask: the graph state; all-one: its conjugate) or
// are obstructed by an explicit witness: a product of at most three words
// equal to a nontrivial phase times the identity, or a non-commuting pair.
struct ObstructionResult {
    std::string verdict;       // "stabilizable" | "obstructed" | "inconclusive"
    std::string kind;          // witness kind: "product" | "pair" | ""
    std::vector<int> indices;  // word indices into stabilizer_products order
    int phase = 0;             // identity phase exponent, or commutation phase
    double stab_residual = -1.0;  // stabilization residual when applicable
};

ObstructionResult transposition_obstruction(const GraphSpec& relabeled,
                                            const std::vector<int>& mask);

// alpha X + beta Z with |alpha|^2+|beta|^2 = 1 and both parts bounded away
// from zero is never unitary for d >= 3 (checked on `trials` random draws);
// for d = 2 a real pair alpha X + beta Z is always unitary (the exception).
CheckResult fact1_nonunitarity(int d, int trials = 100, std::uint64_t seed = 0);

struct MaskEntry {
    std::vector<int> mask;
    ObstructionResult result;
};

struct SelftestSummary {
    std::vector<CheckResult> checks;
    std::vector<MaskEntry> masks;
    bool all_pass = true;
};

// Runs the whole battery against the expression's ideal realization
// (d = 3 only): tilde relations for the pivot settings and their
// transposes, the anticommutation relations, the unitary anticommutators,
// the canonical forms, the mask sweep over all 2^N transposition patterns,
// and the non-unitarity fact.
SelftestSummary run_selftest_suite(const BellExpression& expr);

}  // namespace graphbell
