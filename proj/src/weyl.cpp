#include "graphbell/weyl.hpp"

#include <stdexcept>

namespace graphbell {

namespace {
int mod(long long v, int d) {
    int r = static_cast<int>(v % d);
    return r < 0 ? r + d : r;
}
void check_compatible(const WeylWord& a, const WeylWord& b) {
    if (a.d != b.d || a.xs.size() != b.xs.size())
        throw std::invalid_argument("weyl words live on different systems");
}
}  // namespace

ComplexMatrix pauli_x(int d) {
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i) m.at((i + 1) % d, i) = 1.0;
    return m;
}

ComplexMatrix pauli_z(int d) {
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i) m.at(i, i) = omega(d, i);
    return m;
}

WeylWord weyl_identity(int d, int sites) {
    WeylWord w;
    w.d = d;
    w.phase = 0;
    w.xs.assign(sites, 0);
    w.zs.assign(sites, 0);
    return w;
}

WeylWord weyl_single(int d, int sites, int site, int x, int z, int ph) {
    if (site < 0 || site >= sites) throw std::invalid_argument("weyl_single: site out of range");
    WeylWord w = weyl_identity(d, sites);
    w.xs[site] = mod(x, d);
    w.zs[site] = mod(z, d);
    w.phase = mod(ph, d);
    return w;
}

WeylWord weyl_mul(const WeylWord& a, const WeylWord& b) {
    check_compatible(a, b);
    const int d = a.d;
    WeylWord out = weyl_identity(d, a.sites());
    long long ph = a.phase + b.phase;
    for (int i = 0; i < a.sites(); ++i) {
        ph += static_cast<long long>(b.xs[i]) * a.zs[i];
        out.xs[i] = mod(a.xs[i] + b.xs[i], d);
        out.zs[i] = mod(a.zs[i] + b.zs[i], d);
    }
    out.phase = mod(ph, d);
    return out;
}

WeylWord weyl_pow(const WeylWord& w, int n) {
    if (n < 0) throw std::invalid_argument("weyl_pow: n must be >= 0");
    const int d = w.d;
    WeylWord out = weyl_identity(d, w.sites());
    long long ph = static_cast<long long>(n) * w.phase;
    const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
    for (int i = 0; i < w.sites(); ++i) {
        ph += pairs * w.xs[i] % d * w.zs[i];
        out.xs[i] = mod(static_cast<long long>(n) * w.xs[i], d);
        out.zs[i] = mod(static_cast<long long>(n) * w.zs[i], d);
    }
    out.phase = mod(ph, d);
    return out;
}

WeylWord weyl_transpose(const WeylWord& w, const std::vector<int>& mask) {
    if (static_cast<int>(mask.size()) != w.sites())
        throw std::invalid_argument("weyl_transpose: mask size mismatch");
    WeylWord out = w;
    long long ph = w.phase;
    for (int i = 0; i < w.sites(); ++i) {
        if (!mask[i]) continue;
        ph -= static_cast<long long>(w.xs[i]) * w.zs[i];
        out.xs[i] = mod(-w.xs[i], w.d);
    }
    out.phase = mod(ph, w.d);
    return out;
}

int commutation_phase(const WeylWord& a, const WeylWord& b) {
    check_compatible(a, b);
    long long q = 0;
    for (int i = 0; i < a.sites(); ++i)
        q += static_cast<long long>(b.xs[i]) * a.zs[i] - static_cast<long long>(a.xs[i]) * b.zs[i];
    return mod(q, a.d);
}

bool weyl_equal(const WeylWord& a, const WeylWord& b) {
    return a.d == b.d && a.phase == b.phase && a.xs == b.xs && a.zs == b.zs;
}

bool weyl_is_scalar(const WeylWord& w) {
    for (int i = 0; i < w.sites(); ++i)
        if (w.xs[i] || w.zs[i]) return false;
    return true;
}

ComplexMatrix weyl_to_matrix(const WeylWord& w) {
    double dim = 1;
    for (int i = 0; i < w.sites(); ++i) dim *= w.d;
    if (dim > 4096) throw std::invalid_argument("weyl_to_matrix: dense realization capped at 4096 dims");
    ComplexMatrix acc(1, 1);
    acc.at(0, 0) = omega(w.d, w.phase);
    for (int i = 0; i < w.sites(); ++i)
        acc = kron(acc, mpow(pauli_x(w.d), w.xs[i]) * mpow(pauli_z(w.d), w.zs[i]));
    return acc;
}

}  // namespace graphbell
