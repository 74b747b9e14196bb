#pragma once
// Classical (deterministic local hidden variable) optimization of a Bell
// expression. A strategy assigns each (party, setting) an outcome in Z_d;
// the value is sum over terms of Re[coeff * omega^(sum power * outcome)].
//
// exact_bound enumerates strategies but folds the maximization over one
// pivot party (the one with the most settings) into a per-assignment inner
// maximization, cutting the search space by d^{settings(pivot)}. The naive
// full enumeration is kept as a cross-check.
//
// Determinism contract: the search-internal sums only rank strategies. Every
// candidate within a small cushion of the running maximum is re-evaluated with
// classical_value, and the reported winner is the candidate with the largest
// replayed value (ties broken by lexicographically smallest outcome table).
// Near-optimal strategies can differ in their replayed doubles by a few ulps
// depending on summation order, so ranking by replay is what makes the folded
// and naive searches agree bit for bit, for any thread count.

#include <cstdint>
#include <string>
#include <vector>

#include "graphbell/bell.hpp"

namespace graphbell {

struct DeterministicStrategy {
    std::vector<std::vector<int>> outcomes;  // [party][setting] -> 0..d-1
};

double classical_value(const BellExpression& expr, const DeterministicStrategy& s);

struct BoundResult {
    double value = 0.0;
    DeterministicStrategy strategy;
    std::uint64_t enumerated = 0;  // strategies actually visited
    std::string mode;              // "exact" | "exact_naive" | "heuristic"
    int restarts = 0;              // heuristic only
};

// Throws BudgetError when the enumeration (post-pivot for exact_bound, full
// for the naive variant) would exceed `budget` strategies.
BoundResult exact_bound(const BellExpression& expr, std::uint64_t budget = 1000000000ULL,
                        int threads = 1);
BoundResult exact_bound_naive(const BellExpression& expr, std::uint64_t budget = 1000000000ULL,
                              int threads = 1);

// Seeded coordinate ascent: each restart draws a random strategy (restart i
// uses seed + i) and sweeps single-slot improvements to a local maximum.
// Returns the best local maximum; ties keep the earliest restart.
BoundResult heuristic_bound(const BellExpression& expr, int restarts = 50, std::uint64_t seed = 0,
                            int threads = 1);

struct ViolationReport {
    double classical_bound = 0.0;
    double quantum_value = 0.0;
    double ratio = 0.0;
    bool violated = false;  // quantum exceeds classical beyond 1e-9
    std::string classical_mode;
};

ViolationReport make_violation_report(const BoundResult& classical, double quantum);

}  // namespace graphbell
