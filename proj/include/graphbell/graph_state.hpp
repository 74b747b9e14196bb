#pragma once
// Qudit graph states. Generator i is
//   G_i = X_i  prod_{j in N(i)}  Z_j^{r_ij},
// and the state is the unique common +1 eigenvector, synthesized by applying
// CZ^{r_ij} (CZ|k,l> = omega^{kl}|k,l>) to |+>^N.

#include <vector>

#include "graphbell/graph.hpp"
#include "graphbell/state.hpp"
#include "graphbell/weyl.hpp"

namespace graphbell {

std::vector<WeylWord> graph_generators(const GraphSpec& g);

// Amplitudes d^{-N/2} omega^{ sum_{i<j} r_ij k_i k_j }; the |0...0> amplitude
// comes out real positive by construction.
StateVector synthesize_state(const GraphSpec& g);

// max_i | G_i|psi> - |psi> |_inf
double verify_stabilization(const GraphSpec& g, const StateVector& psi);

}  // namespace graphbell
