#include "graphbell/graph_state.hpp"

#include <cmath>

namespace graphbell {

std::vector<WeylWord> graph_generators(const GraphSpec& g) {
    std::vector<WeylWord> out;
    out.reserve(g.n);
    for (int i = 0; i < g.n; ++i) {
        WeylWord w = weyl_identity(g.d, g.n);
        w.xs[i] = 1;
        for (int j = 0; j < g.n; ++j)
            if (j != i) w.zs[j] = g.r[i][j];
        out.push_back(w);
    }
    return out;
}

StateVector synthesize_state(const GraphSpec& g) {
    const int d = g.d;
    StateVector psi = zero_basis_state(d, g.n);
    const double a0 = 1.0 / std::sqrt(static_cast<double>(psi.dim()));
    // uniform superposition, then the diagonal CZ^{r_ij} circuit as one pass
    std::vector<int> digits(g.n);
    for (std::int64_t idx = 0; idx < psi.dim(); ++idx) {
        std::int64_t t = idx;
        for (int s = g.n - 1; s >= 0; --s) {
            digits[s] = static_cast<int>(t % d);
            t /= d;
        }
        long long ph = 0;
        for (int i = 0; i < g.n; ++i)
            for (int j = i + 1; j < g.n; ++j) ph += static_cast<long long>(g.r[i][j]) * digits[i] * digits[j];
        psi.amp[static_cast<size_t>(idx)] = a0 * omega(d, ph);
    }
    return psi;
}

double verify_stabilization(const GraphSpec& g, const StateVector& psi) {
    double worst = 0.0;
    for (const auto& w : graph_generators(g)) {
        StateVector moved = psi;
        apply_weyl(moved, w);
        worst = std::max(worst, max_abs_diff(moved, psi));
    }
    return worst;
}

}  // namespace graphbell
