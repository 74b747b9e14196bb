#pragma once
// Connected multigraphs with prime local dimension d. Edges carry a
// multiplicity r in 1..d-1 (an edge drawn r times). Vertices are 0-based
// internally; every external surface (files, reports, CLI) is 1-based.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace graphbell {

struct GraphSpec {
    int d = 0;
    int n = 0;
    // symmetric multiplicity matrix, r[i][j] in 0..d-1, zero diagonal
    std::vector<std::vector<int>> r;

    int mult(int i, int j) const { return r[i][j]; }
    std::vector<int> neighbors(int i) const;
    int degree(int i) const;  // number of distinct neighbors
};

bool is_prime(int d);

// Throws InputError (NON_PRIME, BAD_VERTEX_COUNT, BAD_INDEX, LOOP_EDGE,
// DUPLICATE_EDGE, BAD_MULTIPLICITY, DISCONNECTED) when the spec is invalid.
void validate_graph(const GraphSpec& g);

// Accepts either format, sniffing the first non-space byte ('{' = JSON):
//   JSON:      {"d":3, "n":4, "edges":[[i,j,r], ...]}   (1-based i,j)
//   edge list: first line "d N", then "i j r" lines; '#' starts a comment,
//              r defaults to 1 when omitted.
GraphSpec parse_graph(const std::string& text);
GraphSpec load_graph_file(const std::string& path);

// Canonical JSON echo: edges sorted ascending, 1-based.
std::string graph_to_json(const GraphSpec& g);

// Built-in families; `spec` is "name" or "name:arg1,arg2,...":
//   ame43 | pair:d | star:N,d | line:N,d | cycle:N,d | random:N,d,seed
GraphSpec builtin_graph(const std::string& spec);
std::vector<std::string> builtin_graph_help();

// Seeded connected multigraph: each unordered pair draws a multiplicity in
// 0..d-1 uniformly; redraws the whole graph until connected.
GraphSpec random_connected_graph(int n, int d, std::uint64_t seed);

// Seeded connected simple graph (multiplicities all 1), used for d = 2.
GraphSpec random_connected_simple_graph(int n, std::uint64_t seed);

// (v1, v2): a maximum-degree vertex (ties -> lowest index) and one of its
// neighbors (largest multiplicity first, ties -> lowest index). 0-based.
std::pair<int, int> choose_pivots(const GraphSpec& g);

// Relabels so that v1 -> 0, v2 -> 1, then v1's other neighbors ascending,
// then the rest ascending. perm_out[new] = old when non-null.
GraphSpec relabel_for_pivots(const GraphSpec& g, int v1, int v2,
                             std::vector<int>* perm_out = nullptr);

}  // namespace graphbell
