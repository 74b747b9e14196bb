#pragma once
// Normalization constants for the tilde-observable transform over odd prime d:
//
//   lambda_n = [eps_d (n|d)]^{-1} * exp(-2 pi i g(n,d) / (48 d))
//
// with eps_d = 1 for d = 1 mod 4, i for d = 3 mod 4, (n|d) the Legendre
// symbol, and g(n,d) an integer fixed by four branches below. These make
//   Obar_x^{(n)} = (lambda_n / sqrt d) sum_k w^{nxk} w^{nk(k+1)} (XZ^k)^n
// a unitary of order d with Obar^{(n)} = (Obar^{(1)})^n.
//
// The printed source for lambda has a sign ambiguity, so resolve_convention
// settles between the formula as printed and its complex conjugate by
// checking those three operator properties numerically; exactly one
// candidate passes.

#include <complex>
#include <string>
#include <vector>

#include "graphbell/matrix.hpp"

namespace graphbell {

// Legendre symbol (n|d) in {-1,0,1} for odd prime d, via Euler's criterion.
int legendre(long long n, int d);

// Integer g(n,d). Branches: for odd n, by n mod 4; for even n, by the parity
// of (n+d+1)/2. The latter reading is forced by lambda_{d-n} = conj(lambda_n)
// and by the operator checks in resolve_convention.
long long g_coeff(int n, int d);

enum class Convention { AsPrinted, Conjugate };

Cx lambda_value(int n, int d, Convention c);

struct ConventionReport {
    bool as_printed_ok = false;
    bool conjugate_ok = false;
    double as_printed_residual = 0.0;
    double conjugate_residual = 0.0;
};

struct LambdaTable {
    int d = 0;
    Convention convention = Convention::AsPrinted;
    std::vector<Cx> lam;  // lam[n] for n = 1..d-1; lam[0] unused

    Cx operator()(int n) const { return lam[((n % d) + d) % d]; }
};

// Worst deviation over x, n of: unitarity of Obar_x^{(1)}, (Obar_x^{(1)})^d = 1,
// and Obar_x^{(n)} = (Obar_x^{(1)})^n, under the given convention.
double convention_residual(int d, Convention c);

ConventionReport probe_conventions(int d, double tol = 1e-10);

// Returns the table for the unique passing convention.
// Throws std::runtime_error if none or both pass.
LambdaTable resolve_convention(int d, double tol = 1e-10);

// Table for a fixed convention, no probing. Used when replaying an
// expression whose convention was already resolved and recorded.
LambdaTable make_lambda_table(int d, Convention c);

const char* convention_name(Convention c);

}  // namespace graphbell
