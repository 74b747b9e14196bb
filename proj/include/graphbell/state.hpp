#pragma once
// N-qudit state vectors with matrix-free application of local operators.
// Site 0 owns the most significant digit of the basis index, i.e.
// |k_0 k_1 ... k_{N-1}>  <->  index  sum_s k_s * d^{N-1-s}.

#include <complex>
#include <cstdint>
#include <vector>

#include "graphbell/matrix.hpp"
#include "graphbell/rng.hpp"
#include "graphbell/weyl.hpp"

namespace graphbell {

struct StateVector {
    int d = 0;
    int sites = 0;
    std::vector<Cx> amp;

    std::int64_t dim() const { return static_cast<std::int64_t>(amp.size()); }
};

StateVector zero_basis_state(int d, int sites);  // |0...0>

// In-place |psi> <- (1 x ... x m x ... x 1)|psi> with m at `site`.
// Cost O(d^{N+1}); m must be d x d.
void apply_local(StateVector& psi, int site, const ComplexMatrix& m);

// Applies every (site, matrix) factor in turn. Sites may repeat.
void apply_factors(StateVector& psi, const std::vector<std::pair<int, ComplexMatrix>>& factors);

// |psi> <- w|psi> using the exact word structure (permutation + phases).
void apply_weyl(StateVector& psi, const WeylWord& w);

Cx inner(const StateVector& a, const StateVector& b);  // <a|b>
double norm(const StateVector& a);
void normalize(StateVector& a);
double max_abs_diff(const StateVector& a, const StateVector& b);

// Haar-ish random unit vector (gaussian components, normalized).
StateVector random_state(int d, int sites, Rng& rng);

// Density matrix of the sites in `keep` (ascending order), tracing out the rest.
ComplexMatrix reduced_density(const StateVector& psi, const std::vector<int>& keep);

}  // namespace graphbell
