#include "graphbell/eig.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "graphbell/rng.hpp"

namespace graphbell {

namespace {

using Vec = std::vector<Cx>;

Cx dot(const Vec& a, const Vec& b) {
    Cx acc{};
    for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double vnorm(const Vec& a) {
    double acc = 0;
    for (const auto& v : a) acc += std::norm(v);
    return std::sqrt(acc);
}

Vec random_vec(std::int64_t dim, Rng& rng) {
    Vec v(static_cast<size_t>(dim));
    for (auto& x : v) x = Cx{rng.gaussian(), rng.gaussian()};
    const double n = vnorm(v);
    for (auto& x : v) x /= n;
    return v;
}

// count of eigenvalues of the tridiagonal (alpha, beta) strictly below x
int sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta, double x) {
    int count = 0;
    double q = 1.0;
    const size_t m = alpha.size();
    for (size_t i = 0; i < m; ++i) {
        const double b2 = i == 0 ? 0.0 : beta[i - 1] * beta[i - 1];
        q = alpha[i] - x - (q == 0.0 ? b2 / 1e-300 : b2 / q);
        if (q < 0) ++count;
    }
    return count;
}

double tridiag_max_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta) {
    // Gershgorin bracket, then bisect for the largest eigenvalue
    double lo = alpha[0], hi = alpha[0];
    const size_t m = alpha.size();
    for (size_t i = 0; i < m; ++i) {
        const double bl = i == 0 ? 0.0 : std::abs(beta[i - 1]);
        const double br = i + 1 < m ? std::abs(beta[i]) : 0.0;
        lo = std::min(lo, alpha[i] - bl - br);
        hi = std::max(hi, alpha[i] + bl + br);
    }
    const int want = static_cast<int>(m) - 1;  // index of the largest eigenvalue
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(alpha, beta, mid) <= want) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

EigResult hermitian_max_eigenvalue(const LinearOp& apply, std::int64_t dim, double tol,
                                   int max_iter, std::uint64_t seed, double herm_tol) {
    if (dim <= 0) throw std::invalid_argument("hermitian_max_eigenvalue: empty operator");
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);

    // Hermiticity pre-check: <u|Av> must equal <Au|v> on random pairs.
    double herm_res = 0.0;
    for (int t = 0; t < 3; ++t) {
        Vec u = random_vec(dim, rng), v = random_vec(dim, rng);
        Vec au(static_cast<size_t>(dim)), av(static_cast<size_t>(dim));
        apply(v, av);
        apply(u, au);
        const Cx lhs = dot(u, av), rhs = dot(au, v);
        herm_res = std::max(herm_res, std::abs(lhs - rhs));
    }
    if (herm_res > herm_tol)
        throw std::invalid_argument("hermitian_max_eigenvalue: operator is not Hermitian");

    EigResult res;
    res.hermiticity_residual = herm_res;

    const int m_cap = static_cast<int>(std::min<std::int64_t>(dim, max_iter));
    std::vector<Vec> basis;
    std::vector<double> alpha, beta;
    Vec q = random_vec(dim, rng);
    Vec w(static_cast<size_t>(dim));
    double prev = 0.0;
    bool have_prev = false;

    for (int j = 0; j < m_cap; ++j) {
        basis.push_back(q);
        std::fill(w.begin(), w.end(), Cx{});
        apply(q, w);
        const double a = dot(q, w).real();
        alpha.push_back(a);
        // w <- w - a q - b_{j-1} q_{j-1}, then full reorthogonalization
        for (size_t i = 0; i < w.size(); ++i) w[i] -= a * q[i];
        if (j > 0)
            for (size_t i = 0; i < w.size(); ++i) w[i] -= beta[j - 1] * basis[j - 1][i];
        for (const auto& b : basis) {
            const Cx c = dot(b, w);
            for (size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
        }
        const double bnorm = vnorm(w);
        const double est = tridiag_max_eigenvalue(alpha, beta);
        res.iterations = j + 1;
        if (have_prev && std::abs(est - prev) <= tol * std::max(1.0, std::abs(est))) {
            res.value = est;
            res.converged = true;
            return res;
        }
        prev = est;
        have_prev = true;
        if (bnorm < 1e-13) {  // invariant subspace exhausted: estimate is exact
            res.value = est;
            res.converged = true;
            return res;
        }
        beta.push_back(bnorm);
        for (size_t i = 0; i < w.size(); ++i) w[i] /= bnorm;
        q = w;
    }
    res.value = prev;
    res.converged = false;
    return res;
}

}  // namespace graphbell
