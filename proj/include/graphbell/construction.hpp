#pragma once
// Builds the Bell expression attached to a graph state and everything needed
// to certify it: the algebraic quantum bound, the ideal realization that
// saturates it, and the sum-of-squares decomposition check.
//
// Pipeline for odd prime d: pick pivots (v1, v2 adjacent), relabel so v1 = 0
// and v2 = 1, form the stabilizer products
//   family 1: G_0 G_1^k          (k = 0..d-1)
//   family 2: G_0 G_k            (k a neighbor of 0 other than 1)
//   family 3: G_k                (k a non-neighbor of 0)
// and expand each product's n-th power into correlators. The X-type factor at
// party 0 is replaced by the tilde combination of the d settings there;
// parties with only Z powers map to setting 0, the X-bearing site of families
// 1..3 maps to settings k / 1 / 1.
//
// For d = 2 the expression is the stabilizer inequality with two settings per
// party (see qubit_inequality); build_expression dispatches on d.

#include <cstdint>
#include <string>
#include <vector>

#include "graphbell/bell.hpp"
#include "graphbell/coeffs.hpp"
#include "graphbell/graph.hpp"
#include "graphbell/matrix.hpp"
#include "graphbell/state.hpp"
#include "graphbell/weyl.hpp"

namespace graphbell {

// One stabilizer product, both as a symbolic word (for cross-checks and the
// transposition analysis) and as family bookkeeping.
struct StabilizerProduct {
    int family = 0;  // 1, 2, 3
    int k = 0;       // exponent (family 1) or site index (families 2, 3)
    WeylWord word;
};

// Expects the relabeled graph (pivots at 0 and 1). Requires n >= 2.
std::vector<StabilizerProduct> stabilizer_products(const GraphSpec& relabeled);

// Even split: c_{1,k} = 1/(1+|S_k|), c_{2,j} = 1/(1+|S_{k(j)}|) where
// S_k = { j in C : r_{0j} = k r_{01} mod d }.
CoefficientSet default_coefficients(const GraphSpec& relabeled);

// Exact feasibility: all weights in (0,1], keys match the C set, and
// c_{1,k} + sum_{j in S_k} c_{2,j} = 1 for every k. Throws ConstraintError.
void validate_coefficients(const GraphSpec& relabeled, const CoefficientSet& cs);

// Full build from a user-labeled graph. Chooses pivots automatically unless
// v1/v2 are given (0-based original labels, v2 must neighbor v1; ignored for
// d = 2 where only v1 matters). Custom coefficients are keyed by relabeled
// party index and validated; pass nullptr for the even split.
BellExpression build_expression(const GraphSpec& g, int v1 = -1, int v2 = -1,
                                const CoefficientSet* coeffs = nullptr);

// (d-1)(N - N1 + d - 1) for odd d, N + N1 - 1 for d = 2, where N1 is the
// pivot's degree.
double quantum_bound(const BellExpression& expr);
double quantum_bound_for_graph(const GraphSpec& g, int v1 = -1);

// Observables and state reaching the quantum bound. Party order matches the
// expression (relabeled). For odd d party 0 gets the d Fourier-type settings,
// party 1 gets Z and Z^{r01} X^k, C parties Z and Z^{r0j} X, D parties Z and
// X. For d = 2 the pivot gets (X+Z)/sqrt2, (X-Z)/sqrt2 and the rest X, Z.
struct Realization {
    int d = 0;
    StateVector state;
    std::vector<std::vector<ComplexMatrix>> obs;  // [party][setting], d x d
};

Realization ideal_realization(const BellExpression& expr);

// Seeded random realization with unitary order-d observables (QR of a
// Gaussian matrix, spectrum snapped to powers of omega) on the graph state.
Realization random_realization(const BellExpression& expr, std::uint64_t seed);

// <psi| B |psi> evaluated term by term (matrix-free per site). Throws
// InternalCheckError if the imaginary part exceeds 1e-9. `threads` splits the
// term list; the reduction order is fixed, so results do not depend on it.
double quantum_value(const BellExpression& expr, const Realization& real, int threads = 1);

// The tilde combination at a single party:
//   (omega^{-n m(m+1)} / (sqrt d lambda_n)) sum_t omega^{-n t m} (A_t)^n.
ComplexMatrix tilde_combination(const std::vector<ComplexMatrix>& settings, int m, int n,
                                const LambdaTable& lt);

struct SosReport {
    double max_residual = 0.0;   // worst |(beta_Q - B - SOS)|phi>|_2 over trials
    bool preconditions_ok = true;
    std::vector<std::string> warnings;  // non-unitary / wrong-order observables
};

// Checks beta_Q * 1 - B = (1/2) sum w (1 - Gt)^dag (1 - Gt) on random vectors.
// Holds for any realization whose observables are unitary of order d; if a
// precondition fails the residual is still reported, with a warning.
SosReport sos_residual(const BellExpression& expr, const Realization& real, int trials = 20,
                       std::uint64_t seed = 0);

// Stabilizer inequality for d = 2 (simple connected graph), pivot = max
// degree vertex when v1 < 0. Classical bound N + (sqrt2 - 1) N1 - 1.
BellExpression qubit_inequality(const GraphSpec& g, int v1 = -1);
double qubit_classical_bound_formula(const BellExpression& expr);

}  // namespace graphbell
