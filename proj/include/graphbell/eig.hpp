#pragma once
// Largest eigenvalue of a Hermitian operator given only matrix-vector
// products. Lanczos with full reorthogonalization, deterministic seeded
// start vector, and a Sturm-sequence bisection on the tridiagonal matrix.

#include <cstdint>
#include <functional>

#include "graphbell/matrix.hpp"

namespace graphbell {

// y = A x. Callers guarantee |x| = |y| = dim; y starts zeroed.
using LinearOp = std::function<void(const std::vector<Cx>&, std::vector<Cx>&)>;

struct EigResult {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    double hermiticity_residual = 0.0;  // from the randomized pre-check
};

// Rejects non-Hermitian input (checked on a few random vector pairs, tolerance
// herm_tol) by throwing std::invalid_argument. Otherwise iterates until the
// eigenvalue estimate moves by less than tol (relative to max(1,|est|)) or the
// iteration cap is reached; `converged` reports which.
EigResult hermitian_max_eigenvalue(const LinearOp& apply, std::int64_t dim,
                                   double tol = 1e-8, int max_iter = 500,
                                   std::uint64_t seed = 0, double herm_tol = 1e-8);

}  // namespace graphbell
