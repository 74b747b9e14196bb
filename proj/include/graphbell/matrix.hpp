#pragma once
// Small dense complex matrix type used throughout. Row-major storage.
// Dimensions here stay tiny (local observables are d x d with d <= 11,
// dense cross-checks are capped at 4096), so everything is plain loops;
// no BLAS dependency.

#include <complex>
#include <stdexcept>
#include <vector>

namespace graphbell {

using Cx = std::complex<double>;

struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Cx> a;  // row-major, a[r*cols + c]

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Cx& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Cx& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    bool square() const { return rows == cols; }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
    static ComplexMatrix zero(int r, int c) { return ComplexMatrix(r, c); }
};

ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix operator*(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix operator*(Cx s, const ComplexMatrix& x);
ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix transpose(const ComplexMatrix& m);
ComplexMatrix conjugate(const ComplexMatrix& m);
ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y);

// m^n for square m, n >= 0, by repeated squaring.
ComplexMatrix mpow(const ComplexMatrix& m, int n);

// Largest |entry| of (x - y). Both shapes must match.
double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y);
double max_abs(const ComplexMatrix& m);

// Largest |entry| of (m^dagger m - 1). Infinity-style check, not operator norm;
// fine for the tolerances used here.
double unitarity_defect(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);

// omega = exp(2 pi i / d), raised to p (p may be negative).
Cx omega(int d, long long p = 1);

}  // namespace graphbell
