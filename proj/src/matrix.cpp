#include "graphbell/matrix.hpp"

#include <cmath>

namespace graphbell {

static void check_same_shape(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw std::invalid_argument("matrix shape mismatch");
}

ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y) {
    check_same_shape(x, y);
    ComplexMatrix out = x;
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y) {
    check_same_shape(x, y);
    ComplexMatrix out = x;
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] -= y.a[i];
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix product shape mismatch");
    ComplexMatrix out(x.rows, y.cols);
    for (int r = 0; r < x.rows; ++r) {
        for (int k = 0; k < x.cols; ++k) {
            const Cx xv = x.at(r, k);
            if (xv == Cx{}) continue;
            for (int c = 0; c < y.cols; ++c) out.at(r, c) += xv * y.at(k, c);
        }
    }
    return out;
}

ComplexMatrix operator*(Cx s, const ComplexMatrix& x) {
    ComplexMatrix out = x;
    for (auto& v : out.a) v *= s;
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) out.at(c, r) = std::conj(m.at(r, c));
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) out.at(c, r) = m.at(r, c);
    return out;
}

ComplexMatrix conjugate(const ComplexMatrix& m) {
    ComplexMatrix out = m;
    for (auto& v : out.a) v = std::conj(v);
    return out;
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix out(x.rows * y.rows, x.cols * y.cols);
    for (int rx = 0; rx < x.rows; ++rx)
        for (int cx = 0; cx < x.cols; ++cx) {
            const Cx v = x.at(rx, cx);
            if (v == Cx{}) continue;
            for (int ry = 0; ry < y.rows; ++ry)
                for (int cy = 0; cy < y.cols; ++cy)
                    out.at(rx * y.rows + ry, cx * y.cols + cy) = v * y.at(ry, cy);
        }
    return out;
}

ComplexMatrix mpow(const ComplexMatrix& m, int n) {
    if (!m.square()) throw std::invalid_argument("mpow needs a square matrix");
    if (n < 0) throw std::invalid_argument("mpow needs n >= 0");
    ComplexMatrix acc = ComplexMatrix::identity(m.rows);
    ComplexMatrix base = m;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return acc;
}

double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y) {
    check_same_shape(x, y);
    double worst = 0.0;
    for (size_t i = 0; i < x.a.size(); ++i) worst = std::max(worst, std::abs(x.a[i] - y.a[i]));
    return worst;
}

double max_abs(const ComplexMatrix& m) {
    double worst = 0.0;
    for (const auto& v : m.a) worst = std::max(worst, std::abs(v));
    return worst;
}

double unitarity_defect(const ComplexMatrix& m) {
    return max_abs_diff(adjoint(m) * m, ComplexMatrix::identity(m.cols));
}

double hermiticity_defect(const ComplexMatrix& m) {
    return max_abs_diff(m, adjoint(m));
}

Cx omega(int d, long long p) {
    // reduce first so huge exponents stay accurate
    long long r = p % d;
    if (r < 0) r += d;
    const double ang = 2.0 * M_PI * static_cast<double>(r) / static_cast<double>(d);
    return Cx{std::cos(ang), std::sin(ang)};
}

}  // namespace graphbell
