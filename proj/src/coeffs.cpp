#include "graphbell/coeffs.hpp"

#include <cmath>
#include <stdexcept>

#include "graphbell/weyl.hpp"

namespace graphbell {

int legendre(long long n, int d) {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("legendre: d must be an odd prime");
    long long r = n % d;
    if (r < 0) r += d;
    if (r == 0) return 0;
    // Euler's criterion: n^((d-1)/2) mod d is 1 for residues, d-1 otherwise
    long long acc = 1, base = r, e = (d - 1) / 2;
    while (e > 0) {
        if (e & 1) acc = acc * base % d;
        base = base * base % d;
        e >>= 1;
    }
    return acc == 1 ? 1 : -1;
}

long long g_coeff(int n, int d) {
    if (n <= 0 || n >= d) throw std::invalid_argument("g_coeff: need 0 < n < d");
    const long long nn = n, dd = d;
    if (n % 2 == 0) {
        // branch picked by the parity of (n+d+1)/2; see header note
        if (((n + d + 1) / 2) % 2 == 0) return nn * (nn * nn - dd * (dd + 6) + 3);
        return nn * (nn * nn - dd * (dd - 6) + 3);
    }
    if (n % 4 == 1) return nn * (nn * nn + 3) + 2 * dd * dd * (-5 * nn + 3);
    return nn * (nn * nn + 3) + 2 * dd * dd * (nn + 3);
}

Cx lambda_value(int n, int d, Convention c) {
    const Cx eps = (d % 4 == 1) ? Cx{1, 0} : Cx{0, 1};
    const int leg = legendre(n, d);
    // omega^{-g/48} means exp(-2 pi i g / (48 d)); reduce g mod 48d first
    long long g = g_coeff(n, d) % (48LL * d);
    if (g < 0) g += 48LL * d;
    const double ang = -2.0 * M_PI * static_cast<double>(g) / (48.0 * d);
    const Cx val = Cx{std::cos(ang), std::sin(ang)} / (eps * static_cast<double>(leg));
    return c == Convention::AsPrinted ? val : std::conj(val);
}

namespace {

ComplexMatrix obar(int x, int n, int d, Convention c) {
    const ComplexMatrix X = pauli_x(d), Z = pauli_z(d);
    ComplexMatrix acc(d, d);
    for (int k = 0; k < d; ++k) {
        const Cx coef = omega(d, static_cast<long long>(n) * x * k) *
                        omega(d, static_cast<long long>(n) * k * (k + 1));
        acc = acc + coef * mpow(X * mpow(Z, k), n);
    }
    return lambda_value(n, d, c) / std::sqrt(static_cast<double>(d)) * acc;
}

}  // namespace

double convention_residual(int d, Convention c) {
    double worst = 0.0;
    for (int x = 0; x < d; ++x) {
        const ComplexMatrix O1 = obar(x, 1, d, c);
        worst = std::max(worst, unitarity_defect(O1));
        worst = std::max(worst, max_abs_diff(mpow(O1, d), ComplexMatrix::identity(d)));
        for (int n = 2; n < d; ++n)
            worst = std::max(worst, max_abs_diff(obar(x, n, d, c), mpow(O1, n)));
    }
    return worst;
}

ConventionReport probe_conventions(int d, double tol) {
    ConventionReport rep;
    rep.as_printed_residual = convention_residual(d, Convention::AsPrinted);
    rep.conjugate_residual = convention_residual(d, Convention::Conjugate);
    rep.as_printed_ok = rep.as_printed_residual <= tol;
    rep.conjugate_ok = rep.conjugate_residual <= tol;
    return rep;
}

LambdaTable resolve_convention(int d, double tol) {
    const ConventionReport rep = probe_conventions(d, tol);
    if (rep.as_printed_ok == rep.conjugate_ok)
        throw std::runtime_error(
            rep.as_printed_ok ? "resolve_convention: both candidates pass, cannot disambiguate"
                              : "resolve_convention: neither candidate satisfies the operator checks");
    LambdaTable t;
    t.d = d;
    t.convention = rep.as_printed_ok ? Convention::AsPrinted : Convention::Conjugate;
    t.lam.resize(d);
    for (int n = 1; n < d; ++n) t.lam[n] = lambda_value(n, d, t.convention);
    return t;
}

LambdaTable make_lambda_table(int d, Convention c) {
    LambdaTable t;
    t.d = d;
    t.convention = c;
    t.lam.resize(d);
    for (int n = 1; n < d; ++n) t.lam[n] = lambda_value(n, d, c);
    return t;
}

const char* convention_name(Convention c) {
    return c == Convention::AsPrinted ? "as_printed" : "conjugate";
}

}  // namespace graphbell
