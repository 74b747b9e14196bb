#include "graphbell/state.hpp"

#include <cmath>
#include <stdexcept>

namespace graphbell {

namespace {
std::int64_t ipow(int b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}
}  // namespace

StateVector zero_basis_state(int d, int sites) {
    StateVector s;
    s.d = d;
    s.sites = sites;
    s.amp.assign(static_cast<size_t>(ipow(d, sites)), Cx{});
    s.amp[0] = 1.0;
    return s;
}

void apply_local(StateVector& psi, int site, const ComplexMatrix& m) {
    const int d = psi.d;
    if (m.rows != d || m.cols != d) throw std::invalid_argument("apply_local: matrix must be d x d");
    if (site < 0 || site >= psi.sites) throw std::invalid_argument("apply_local: site out of range");
    // index = hi * (d * lo_dim) + k * lo_dim + lo, with k the digit at `site`
    const std::int64_t lo_dim = ipow(d, psi.sites - 1 - site);
    const std::int64_t hi_dim = psi.dim() / (lo_dim * d);
    std::vector<Cx> col(d);
    for (std::int64_t hi = 0; hi < hi_dim; ++hi) {
        const std::int64_t base = hi * lo_dim * d;
        for (std::int64_t lo = 0; lo < lo_dim; ++lo) {
            for (int k = 0; k < d; ++k) col[k] = psi.amp[base + k * lo_dim + lo];
            for (int r = 0; r < d; ++r) {
                Cx acc{};
                for (int k = 0; k < d; ++k) acc += m.at(r, k) * col[k];
                psi.amp[base + r * lo_dim + lo] = acc;
            }
        }
    }
}

void apply_factors(StateVector& psi, const std::vector<std::pair<int, ComplexMatrix>>& factors) {
    for (const auto& [site, m] : factors) apply_local(psi, site, m);
}

void apply_weyl(StateVector& psi, const WeylWord& w) {
    if (w.d != psi.d || w.sites() != psi.sites)
        throw std::invalid_argument("apply_weyl: system mismatch");
    const int d = psi.d;
    const std::int64_t n = psi.dim();
    std::vector<Cx> out(static_cast<size_t>(n));
    std::vector<int> digits(psi.sites);
    for (std::int64_t idx = 0; idx < n; ++idx) {
        std::int64_t t = idx;
        for (int s = psi.sites - 1; s >= 0; --s) {
            digits[s] = static_cast<int>(t % d);
            t /= d;
        }
        // X^x Z^z |k> = omega^{zk} |k+x>, applied per site
        long long ph = w.phase;
        std::int64_t target = 0;
        for (int s = 0; s < psi.sites; ++s) {
            ph += static_cast<long long>(w.zs[s]) * digits[s];
            target = target * d + (digits[s] + w.xs[s]) % d;
        }
        out[static_cast<size_t>(target)] = omega(d, ph) * psi.amp[static_cast<size_t>(idx)];
    }
    psi.amp.swap(out);
}

Cx inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
    Cx acc{};
    for (size_t i = 0; i < a.amp.size(); ++i) acc += std::conj(a.amp[i]) * b.amp[i];
    return acc;
}

double norm(const StateVector& a) {
    double acc = 0;
    for (const auto& v : a.amp) acc += std::norm(v);
    return std::sqrt(acc);
}

void normalize(StateVector& a) {
    const double n = norm(a);
    if (n == 0) throw std::invalid_argument("normalize: zero vector");
    for (auto& v : a.amp) v /= n;
}

double max_abs_diff(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double worst = 0;
    for (size_t i = 0; i < a.amp.size(); ++i) worst = std::max(worst, std::abs(a.amp[i] - b.amp[i]));
    return worst;
}

StateVector random_state(int d, int sites, Rng& rng) {
    StateVector s = zero_basis_state(d, sites);
    for (auto& v : s.amp) v = Cx{rng.gaussian(), rng.gaussian()};
    normalize(s);
    return s;
}

ComplexMatrix reduced_density(const StateVector& psi, const std::vector<int>& keep) {
    const int d = psi.d;
    const int nk = static_cast<int>(keep.size());
    const std::int64_t kd = ipow(d, nk);
    ComplexMatrix rho(static_cast<int>(kd), static_cast<int>(kd));
    std::vector<int> digits(psi.sites);
    std::vector<char> kept(psi.sites, 0);
    for (int s : keep) kept[s] = 1;
    // group amplitudes by the traced-out digits
    const std::int64_t n = psi.dim();
    std::vector<std::int64_t> kidx(static_cast<size_t>(n)), eidx(static_cast<size_t>(n));
    for (std::int64_t idx = 0; idx < n; ++idx) {
        std::int64_t t = idx;
        for (int s = psi.sites - 1; s >= 0; --s) {
            digits[s] = static_cast<int>(t % d);
            t /= d;
        }
        std::int64_t ki = 0, ei = 0;
        for (int s = 0; s < psi.sites; ++s) {
            if (kept[s]) ki = ki * d + digits[s];
            else ei = ei * d + digits[s];
        }
        kidx[idx] = ki;
        eidx[idx] = ei;
    }
    const std::int64_t ed = n / kd;
    std::vector<std::vector<Cx>> by_env(static_cast<size_t>(ed), std::vector<Cx>(static_cast<size_t>(kd)));
    for (std::int64_t idx = 0; idx < n; ++idx) by_env[eidx[idx]][kidx[idx]] = psi.amp[idx];
    for (std::int64_t e = 0; e < ed; ++e)
        for (std::int64_t r = 0; r < kd; ++r) {
            if (by_env[e][r] == Cx{}) continue;
            for (std::int64_t c = 0; c < kd; ++c)
                rho.at(static_cast<int>(r), static_cast<int>(c)) += by_env[e][r] * std::conj(by_env[e][c]);
        }
    return rho;
}

}  // namespace graphbell
