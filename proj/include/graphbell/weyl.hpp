#pragma once
// Exact symbolic algebra for N-site Weyl-Heisenberg words over prime d:
//
//   w = omega^phase  (X^xs[0] Z^zs[0]) x ... x (X^xs[N-1] Z^zs[N-1])
//
// with omega = exp(2 pi i / d) and the single-site conventions
//   X|i> = |i+1 mod d>,   Z|i> = omega^i |i>,   so  X Z = omega^{-1} Z X.
// All exponents live in Z_d; products, powers and partial transposes are
// computed exactly in integer arithmetic. No floating point enters until
// weyl_to_matrix.

#include <vector>

#include "graphbell/matrix.hpp"

namespace graphbell {

// Generalized Pauli pair for one site.
ComplexMatrix pauli_x(int d);
ComplexMatrix pauli_z(int d);

struct WeylWord {
    int d = 0;
    int phase = 0;        // exponent of omega, reduced to 0..d-1
    std::vector<int> xs;  // X exponent per site, 0..d-1
    std::vector<int> zs;  // Z exponent per site, 0..d-1

    int sites() const { return static_cast<int>(xs.size()); }
};

WeylWord weyl_identity(int d, int sites);

// Word with X^x Z^z at one site (identity elsewhere) and phase exponent ph.
WeylWord weyl_single(int d, int sites, int site, int x, int z, int ph = 0);

// Product a*b. Normal ordering moves every Z of `a` past every X of `b`,
// which contributes omega^{ sum_i b.xs[i]*a.zs[i] }.
WeylWord weyl_mul(const WeylWord& a, const WeylWord& b);

// n-th power, n >= 0. (X^a Z^b)^n = omega^{ab n(n-1)/2} X^{na} Z^{nb} per site.
WeylWord weyl_pow(const WeylWord& w, int n);

// Partial transpose on the sites where mask[i] != 0. Per transposed site:
// X^a Z^b -> omega^{-ab} X^{-a} Z^b (since X^T = X^{d-1}, Z^T = Z).
WeylWord weyl_transpose(const WeylWord& w, const std::vector<int>& mask);

// q in  a b = omega^q b a,  namely sum_i (b.xs[i]*a.zs[i] - a.xs[i]*b.zs[i]) mod d.
int commutation_phase(const WeylWord& a, const WeylWord& b);

bool weyl_equal(const WeylWord& a, const WeylWord& b);

// True when all X and Z exponents vanish, i.e. w = omega^phase * identity.
bool weyl_is_scalar(const WeylWord& w);

// Dense d^N x d^N realization. Guarded against blowups: throws beyond 4096 dims.
ComplexMatrix weyl_to_matrix(const WeylWord& w);

}  // namespace graphbell
