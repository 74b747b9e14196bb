#pragma once
// Bell expression data model and its JSON form.
//
// A BellExpression is a linear combination of correlator terms. Each term is
// a complex coefficient times a product of per-party factors (party, setting,
// power); party indices refer to the relabeled graph (pivot vertex first),
// settings are 0-based, powers live in 1..d-1. Evaluating a term against a
// deterministic strategy a(party, setting) in Z_d gives
//   Re[ coeff * omega^(sum_i power_i * a(party_i, setting_i)) ],
// and against a quantum realization the expectation of the matrix product.
//
// JSON layout (parties 1-based on disk, 0-based in memory):
//   { "d": 3, "scenario": [3,3,2,2],
//     "terms": [ { "coeff": [re, im], "factors": [[party, setting, power], ...] }, ... ],
//     "meta": { ... } }

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "graphbell/coeffs.hpp"
#include "graphbell/graph.hpp"
#include "graphbell/rational.hpp"

namespace graphbell {

using Cx = std::complex<double>;

struct Factor {
    int party = 0;    // 0-based, relabeled order
    int setting = 0;  // 0-based
    int power = 1;    // 1..d-1
};

struct BellTerm {
    Cx coeff;
    std::vector<Factor> factors;  // sorted by party, at most one factor per party
};

// Mixing weights for the stabilizer products. c1[k] weights the pivot-pair
// family member with exponent k (k = 1..d-1; c1[0] is unused), c2 weights the
// per-neighbor family and is keyed by relabeled party index. Both live in
// (0, 1] and satisfy c1[k] + sum_{j in S_k} c2[j] = 1 exactly, where S_k is
// the set of pivot neighbors j with r_{0j} = k * r_{01} mod d.
struct CoefficientSet {
    std::vector<Rational> c1;
    std::map<int, Rational> c2;
};

struct ExpressionMeta {
    GraphSpec graph;            // as supplied by the caller
    GraphSpec relabeled;        // pivot at 0, second pivot at 1
    std::vector<int> perm;      // perm[new] = old
    int v1 = 0, v2 = -1;        // pivots in original labels (v2 = -1 for the d=2 variant)
    int n1 = 0;                 // degree of the pivot (distinct neighbors)
    CoefficientSet coeffs;      // empty for the d=2 variant
    Convention convention = Convention::AsPrinted;
    std::int64_t term_count = 0;
    std::int64_t term_count_printed_formula = 0;  // reported for comparison only
    std::string variant = "qudit";                // "qudit" or "qubit"
    bool has_meta = false;      // false when parsed from a file without meta
};

struct BellExpression {
    int d = 0;
    std::vector<int> scenario;  // settings per party
    std::vector<BellTerm> terms;
    ExpressionMeta meta;

    int parties() const { return static_cast<int>(scenario.size()); }
};

std::string expression_to_json(const BellExpression& expr);
BellExpression parse_expression(const std::string& text);
BellExpression load_expression_file(const std::string& path);

}  // namespace graphbell
