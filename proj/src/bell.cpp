#include "graphbell/bell.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "graphbell/errors.hpp"

namespace graphbell {

using json = nlohmann::ordered_json;

namespace {

json graph_json(const GraphSpec& g) {
    json edges = json::array();
    for (int i = 0; i < g.n; i++)
        for (int j = i + 1; j < g.n; j++)
            if (g.r[i][j] != 0) edges.push_back({i + 1, j + 1, g.r[i][j]});
    return json{{"d", g.d}, {"n", g.n}, {"edges", edges}};
}

GraphSpec graph_from_json(const json& j) {
    // Reuse the text parser so file and embedded graphs share validation.
    return parse_graph(j.dump());
}

json coeffs_json(const CoefficientSet& cs) {
    json c1 = json::array();
    for (std::size_t k = 1; k < cs.c1.size(); k++) c1.push_back(cs.c1[k].str());
    json c2 = json::object();
    for (const auto& [site, val] : cs.c2) c2[std::to_string(site + 1)] = val.str();
    return json{{"c1", c1}, {"c2", c2}};
}

CoefficientSet coeffs_from_json(const json& j) {
    CoefficientSet cs;
    cs.c1.push_back(Rational(1));  // unused k = 0 slot
    for (const auto& s : j.at("c1")) cs.c1.push_back(parse_rational(s.get<std::string>()));
    for (const auto& [key, val] : j.at("c2").items())
        cs.c2[std::stoi(key) - 1] = parse_rational(val.get<std::string>());
    return cs;
}

}  // namespace

std::string expression_to_json(const BellExpression& expr) {
    json terms = json::array();
    for (const auto& t : expr.terms) {
        json factors = json::array();
        for (const auto& f : t.factors) factors.push_back({f.party + 1, f.setting, f.power});
        terms.push_back(json{{"coeff", {t.coeff.real(), t.coeff.imag()}}, {"factors", factors}});
    }
    json out{{"d", expr.d}, {"scenario", expr.scenario}, {"terms", terms}};
    if (expr.meta.has_meta) {
        const auto& m = expr.meta;
        json meta{{"variant", m.variant},
                  {"graph", graph_json(m.graph)},
                  {"relabeled_graph", graph_json(m.relabeled)},
                  {"pivots", m.v2 >= 0 ? json{m.v1 + 1, m.v2 + 1} : json{m.v1 + 1}},
                  {"perm", json::array()},
                  {"n1", m.n1},
                  {"term_count", m.term_count},
                  {"term_count_printed_formula", m.term_count_printed_formula}};
        for (int old : m.perm) meta["perm"].push_back(old + 1);
        if (m.variant == "qudit") {
            meta["coefficients"] = coeffs_json(m.coeffs);
            meta["lambda_convention"] = convention_name(m.convention);
        }
        out["meta"] = meta;
    }
    return out.dump(2) + "\n";
}

BellExpression parse_expression(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError("PARSE", std::string("bad expression JSON: ") + e.what());
    }
    BellExpression expr;
    try {
        expr.d = j.at("d").get<int>();
        expr.scenario = j.at("scenario").get<std::vector<int>>();
        for (const auto& jt : j.at("terms")) {
            BellTerm t;
            auto c = jt.at("coeff");
            t.coeff = Cx(c.at(0).get<double>(), c.at(1).get<double>());
            for (const auto& jf : jt.at("factors")) {
                Factor f;
                f.party = jf.at(0).get<int>() - 1;
                f.setting = jf.at(1).get<int>();
                f.power = jf.at(2).get<int>();
                t.factors.push_back(f);
            }
            t.factors.shrink_to_fit();
            expr.terms.push_back(std::move(t));
        }
        if (j.contains("meta")) {
            const auto& jm = j.at("meta");
            auto& m = expr.meta;
            m.has_meta = true;
            m.variant = jm.at("variant").get<std::string>();
            m.graph = graph_from_json(jm.at("graph"));
            m.relabeled = graph_from_json(jm.at("relabeled_graph"));
            auto pv = jm.at("pivots");
            m.v1 = pv.at(0).get<int>() - 1;
            m.v2 = pv.size() > 1 ? pv.at(1).get<int>() - 1 : -1;
            for (const auto& p : jm.at("perm")) m.perm.push_back(p.get<int>() - 1);
            m.n1 = jm.at("n1").get<int>();
            m.term_count = jm.at("term_count").get<std::int64_t>();
            m.term_count_printed_formula = jm.at("term_count_printed_formula").get<std::int64_t>();
            if (m.variant == "qudit") {
                m.coeffs = coeffs_from_json(jm.at("coefficients"));
                std::string conv = jm.at("lambda_convention").get<std::string>();
                if (conv == convention_name(Convention::AsPrinted)) {
                    m.convention = Convention::AsPrinted;
                } else if (conv == convention_name(Convention::Conjugate)) {
                    m.convention = Convention::Conjugate;
                } else {
                    throw InputError("PARSE", "unknown lambda_convention '" + conv + "'");
                }
            }
        }
    } catch (const json::exception& e) {
        throw InputError("PARSE", std::string("bad expression JSON: ") + e.what());
    }

    // Structural sanity, independent of where the file came from.
    if (expr.d < 2) throw InputError("PARSE", "expression has d < 2");
    int parties = expr.parties();
    if (parties == 0) throw InputError("PARSE", "expression has no parties");
    for (int s : expr.scenario)
        if (s < 1) throw InputError("PARSE", "scenario entry < 1");
    for (const auto& t : expr.terms) {
        int prev = -1;
        for (const auto& f : t.factors) {
            if (f.party < 0 || f.party >= parties) throw InputError("PARSE", "factor party out of range");
            if (f.party <= prev) throw InputError("PARSE", "factors not strictly sorted by party");
            prev = f.party;
            if (f.setting < 0 || f.setting >= expr.scenario[f.party])
                throw InputError("PARSE", "factor setting out of range");
            if (f.power < 1 || f.power >= expr.d) throw InputError("PARSE", "factor power out of range");
        }
    }
    return expr;
}

BellExpression load_expression_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("IO", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_expression(ss.str());
}

}  // namespace graphbell
