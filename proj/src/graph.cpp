#include "graphbell/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "graphbell/errors.hpp"
#include "graphbell/rng.hpp"

namespace graphbell {

using json = nlohmann::ordered_json;

std::vector<int> GraphSpec::neighbors(int i) const {
    std::vector<int> out;
    for (int j = 0; j < n; ++j)
        if (j != i && r[i][j] > 0) out.push_back(j);
    return out;
}

int GraphSpec::degree(int i) const { return static_cast<int>(neighbors(i).size()); }

bool is_prime(int d) {
    if (d < 2) return false;
    for (int p = 2; p * p <= d; ++p)
        if (d % p == 0) return false;
    return true;
}

namespace {

GraphSpec empty_graph(int d, int n) {
    GraphSpec g;
    g.d = d;
    g.n = n;
    g.r.assign(n, std::vector<int>(n, 0));
    return g;
}

void add_edge_checked(GraphSpec& g, int i, int j, int r) {
    // i, j arrive 1-based from files
    if (i < 1 || i > g.n || j < 1 || j > g.n)
        throw InputError("BAD_INDEX", "edge endpoint out of range: (" + std::to_string(i) + "," +
                                          std::to_string(j) + ")");
    if (i == j) throw InputError("LOOP_EDGE", "loop edge at vertex " + std::to_string(i));
    if (r < 1 || r > g.d - 1)
        throw InputError("BAD_MULTIPLICITY", "edge multiplicity must be in 1.." +
                                                 std::to_string(g.d - 1) + ", got " + std::to_string(r));
    if (g.r[i - 1][j - 1] != 0)
        throw InputError("DUPLICATE_EDGE",
                         "edge (" + std::to_string(i) + "," + std::to_string(j) + ") listed twice");
    g.r[i - 1][j - 1] = g.r[j - 1][i - 1] = r;
}

bool connected(const GraphSpec& g) {
    if (g.n == 0) return false;
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < g.n; ++v)
            if (g.r[u][v] > 0 && !seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace

void validate_graph(const GraphSpec& g) {
    if (!is_prime(g.d)) throw InputError("NON_PRIME", "local dimension must be prime, got " + std::to_string(g.d));
    if (g.n < 2) throw InputError("BAD_VERTEX_COUNT", "need at least 2 vertices, got " + std::to_string(g.n));
    for (int i = 0; i < g.n; ++i) {
        if (g.r[i][i] != 0) throw InputError("LOOP_EDGE", "loop edge at vertex " + std::to_string(i + 1));
        for (int j = 0; j < g.n; ++j) {
            if (g.r[i][j] != g.r[j][i])
                throw InputError("BAD_MULTIPLICITY", "multiplicity matrix is not symmetric");
            if (g.r[i][j] < 0 || g.r[i][j] > g.d - 1)
                throw InputError("BAD_MULTIPLICITY", "edge multiplicity must be in 0.." + std::to_string(g.d - 1));
        }
    }
    if (!connected(g)) throw InputError("DISCONNECTED", "graph is not connected");
}

namespace {

GraphSpec parse_json_graph(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("PARSE", std::string("graph JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("d") || !j.contains("n") || !j.contains("edges"))
        throw InputError("PARSE", "graph JSON needs keys d, n, edges");
    if (!j["d"].is_number_integer() || !j["n"].is_number_integer() || !j["edges"].is_array())
        throw InputError("PARSE", "graph JSON has wrongly typed d/n/edges");
    const int d = j["d"].get<int>(), n = j["n"].get<int>();
    if (!is_prime(d)) throw InputError("NON_PRIME", "local dimension must be prime, got " + std::to_string(d));
    if (n < 2) throw InputError("BAD_VERTEX_COUNT", "need at least 2 vertices");
    GraphSpec g = empty_graph(d, n);
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
            !e[2].is_number_integer())
            throw InputError("PARSE", "each edge must be [i, j, multiplicity]");
        add_edge_checked(g, e[0].get<int>(), e[1].get<int>(), e[2].get<int>());
    }
    validate_graph(g);
    return g;
}

GraphSpec parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int d = 0, n = 0;
    bool have_header = false;
    GraphSpec g;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (!have_header) {
            if (!(ls >> d >> n)) {
                std::string tok;
                std::istringstream probe(line);
                if (probe >> tok) throw InputError("PARSE", "line 1 must be: d N");
                continue;  // blank or comment-only line before the header
            }
            if (!is_prime(d)) throw InputError("NON_PRIME", "local dimension must be prime, got " + std::to_string(d));
            if (n < 2) throw InputError("BAD_VERTEX_COUNT", "need at least 2 vertices");
            g = empty_graph(d, n);
            have_header = true;
            continue;
        }
        int i, j, r;
        if (!(ls >> i >> j)) continue;  // blank line
        if (!(ls >> r)) r = 1;
        std::string extra;
        if (ls >> extra)
            throw InputError("PARSE", "line " + std::to_string(lineno) + ": expected 'i j [r]'");
        add_edge_checked(g, i, j, r);
    }
    if (!have_header) throw InputError("PARSE", "empty graph file");
    validate_graph(g);
    return g;
}

}  // namespace

GraphSpec parse_graph(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? parse_json_graph(text) : parse_edge_list(text);
    }
    throw InputError("PARSE", "empty graph file");
}

GraphSpec load_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("PARSE", "cannot open graph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

std::string graph_to_json(const GraphSpec& g) {
    json j;
    j["d"] = g.d;
    j["n"] = g.n;
    json edges = json::array();
    for (int i = 0; i < g.n; ++i)
        for (int k = i + 1; k < g.n; ++k)
            if (g.r[i][k] > 0) edges.push_back(json::array({i + 1, k + 1, g.r[i][k]}));
    j["edges"] = edges;
    return j.dump();
}

namespace {

std::vector<long long> parse_args(const std::string& spec, size_t colon) {
    std::vector<long long> args;
    if (colon == std::string::npos) return args;
    std::string rest = spec.substr(colon + 1);
    std::replace(rest.begin(), rest.end(), ',', ' ');
    std::istringstream in(rest);
    long long v;
    while (in >> v) args.push_back(v);
    if (!in.eof()) throw InputError("PARSE", "bad builtin graph arguments in '" + spec + "'");
    return args;
}

}  // namespace

GraphSpec builtin_graph(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const auto args = parse_args(spec, colon);
    auto want = [&](size_t k, const char* usage) {
        if (args.size() != k) throw InputError("PARSE", std::string("usage: ") + usage);
    };
    if (name == "ame43") {
        want(0, "ame43");
        GraphSpec g = empty_graph(3, 4);
        add_edge_checked(g, 1, 2, 1);
        add_edge_checked(g, 2, 3, 1);
        add_edge_checked(g, 3, 4, 2);
        add_edge_checked(g, 4, 1, 1);
        return g;
    }
    if (name == "pair") {
        want(1, "pair:d");
        const int d = static_cast<int>(args[0]);
        if (!is_prime(d)) throw InputError("NON_PRIME", "local dimension must be prime, got " + std::to_string(d));
        GraphSpec g = empty_graph(d, 2);
        add_edge_checked(g, 1, 2, 1);
        validate_graph(g);
        return g;
    }
    if (name == "star" || name == "line" || name == "cycle") {
        want(2, (name + ":N,d").c_str());
        const int n = static_cast<int>(args[0]), d = static_cast<int>(args[1]);
        if (n < 2) throw InputError("BAD_VERTEX_COUNT", "need at least 2 vertices");
        if (!is_prime(d)) throw InputError("NON_PRIME", "local dimension must be prime, got " + std::to_string(d));
        GraphSpec g = empty_graph(d, n);
        if (name == "star") {
            for (int leaf = 2; leaf <= n; ++leaf) add_edge_checked(g, 1, leaf, 1);
        } else {
            for (int i = 1; i < n; ++i) add_edge_checked(g, i, i + 1, 1);
            if (name == "cycle") {
                if (n == 2) throw InputError("DUPLICATE_EDGE", "cycle needs N >= 3");
                add_edge_checked(g, n, 1, 1);
            }
        }
        validate_graph(g);
        return g;
    }
    if (name == "random") {
        want(3, "random:N,d,seed");
        return random_connected_graph(static_cast<int>(args[0]), static_cast<int>(args[1]),
                                      static_cast<std::uint64_t>(args[2]));
    }
    throw InputError("PARSE", "unknown builtin graph '" + name + "'");
}

std::vector<std::string> builtin_graph_help() {
    return {
        "ame43            4-qutrit graph whose state is absolutely maximally entangled",
        "pair:d           two vertices joined by a single edge",
        "star:N,d         vertex 1 joined to all others",
        "line:N,d         path 1-2-...-N",
        "cycle:N,d        ring 1-2-...-N-1",
        "random:N,d,seed  seeded connected multigraph, edge probability min(1, 2/N)",
    };
}

GraphSpec random_connected_graph(int n, int d, std::uint64_t seed) {
    if (!is_prime(d)) throw InputError("NON_PRIME", "local dimension must be prime, got " + std::to_string(d));
    if (n < 2) throw InputError("BAD_VERTEX_COUNT", "need at least 2 vertices");
    Rng rng(seed);
    const double p = std::min(1.0, 2.0 / n);  // Erdos-Renyi edge probability
    for (int attempt = 0; attempt < 10000; ++attempt) {
        GraphSpec g = empty_graph(d, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (rng.uniform01() >= p) continue;
                g.r[i][j] = g.r[j][i] = d == 2 ? 1 : 1 + rng.uniform_mod(d - 1);
            }
        if (connected(g)) return g;
    }
    throw InternalCheckError("random_connected_graph: no connected draw in 10000 attempts");
}

GraphSpec random_connected_simple_graph(int n, std::uint64_t seed) {
    return random_connected_graph(n, 2, seed);
}

std::pair<int, int> choose_pivots(const GraphSpec& g) {
    int v1 = 0;
    for (int i = 1; i < g.n; ++i)
        if (g.degree(i) > g.degree(v1)) v1 = i;  // ties keep the lowest index
    int v2 = -1;
    for (int j = 0; j < g.n; ++j) {
        if (g.r[v1][j] == 0) continue;
        if (v2 < 0 || g.degree(j) > g.degree(v2)) v2 = j;  // ties keep the lowest index
    }
    if (v2 < 0) throw InputError("DISCONNECTED", "pivot vertex has no neighbor");
    return {v1, v2};
}

GraphSpec relabel_for_pivots(const GraphSpec& g, int v1, int v2, std::vector<int>* perm_out) {
    if (v1 < 0 || v1 >= g.n || v2 < 0 || v2 >= g.n || v1 == v2)
        throw InputError("BAD_INDEX", "pivot vertices out of range");
    if (g.r[v1][v2] == 0) throw InputError("BAD_INDEX", "pivot vertices must be adjacent");
    std::vector<int> order{v1, v2};
    for (int j = 0; j < g.n; ++j)
        if (j != v1 && j != v2 && g.r[v1][j] > 0) order.push_back(j);
    for (int j = 0; j < g.n; ++j)
        if (j != v1 && j != v2 && g.r[v1][j] == 0) order.push_back(j);
    GraphSpec out = empty_graph(g.d, g.n);
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) out.r[a][b] = g.r[order[a]][order[b]];
    if (perm_out) *perm_out = order;
    return out;
}

}  // namespace graphbell
