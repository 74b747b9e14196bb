#include "graphbell/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphbell/errors.hpp"
#include "graphbell/matrix.hpp"
#include "graphbell/parallel.hpp"
#include "graphbell/rng.hpp"

namespace graphbell {

namespace {

struct Kahan {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

void check_strategy_shape(const BellExpression& expr, const DeterministicStrategy& s) {
    if (static_cast<int>(s.outcomes.size()) != expr.parties())
        throw InputError("SHAPE", "strategy does not match the expression's party count");
    for (int p = 0; p < expr.parties(); ++p) {
        if (static_cast<int>(s.outcomes[p].size()) < expr.scenario[p])
            throw InputError("SHAPE", "strategy is missing settings at party " + std::to_string(p + 1));
        for (int o : s.outcomes[p])
            if (o < 0 || o >= expr.d) throw InputError("SHAPE", "strategy outcome out of range");
    }
}

// slot list in code order: party ascending, setting ascending
std::vector<std::pair<int, int>> slot_list(const BellExpression& expr, int skip_party) {
    std::vector<std::pair<int, int>> slots;
    for (int p = 0; p < expr.parties(); ++p) {
        if (p == skip_party) continue;
        for (int s = 0; s < expr.scenario[p]; ++s) slots.emplace_back(p, s);
    }
    return slots;
}

// d^slots, refusing counts beyond the budget
std::uint64_t strategy_count(int d, std::size_t slots, std::uint64_t budget, const char* what) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < slots; ++i) {
        if (count > budget / d)
            throw BudgetError(std::string(what) + " needs " + std::to_string(d) + "^" +
                              std::to_string(slots) + " strategies, over the budget of " +
                              std::to_string(budget));
        count *= d;
    }
    if (count > budget)
        throw BudgetError(std::string(what) + " needs " + std::to_string(count) +
                          " strategies, over the budget of " + std::to_string(budget));
    return count;
}

std::vector<int> decode(std::uint64_t code, int d, std::size_t slots) {
    std::vector<int> digits(slots);
    for (std::size_t i = 0; i < slots; ++i) {
        digits[i] = static_cast<int>(code % d);
        code /= d;
    }
    return digits;
}

bool increment(std::vector<int>& digits, int d) {
    for (auto& v : digits) {
        if (++v < d) return true;
        v = 0;
    }
    return false;
}

// a degenerate maximum is often reached by several strategies whose replayed
// doubles differ in the last bits because the terms sum in a different order.
// Candidates within this cushion of the running search maximum are replayed
// and the winner is the best (replayed value, lexicographically smallest
// outcome table) pair. Search noise sits near 1e-13, well inside the cushion,
// and real gaps between distinct strategy values are far above it.
constexpr double tie_cushion = 1e-9;

struct Winner {
    double internal = -std::numeric_limits<double>::infinity();  // best search-internal sum
    double replay = -std::numeric_limits<double>::infinity();    // best replayed candidate
    DeterministicStrategy strategy;

    void offer(const BellExpression& expr, const DeterministicStrategy& s) {
        const double v = classical_value(expr, s);
        if (v > replay || (v == replay && s.outcomes < strategy.outcomes)) {
            replay = v;
            strategy = s;
        }
    }
    void absorb(const Winner& o) {
        internal = std::max(internal, o.internal);
        if (o.strategy.outcomes.empty()) return;  // chunk had no strategies to visit
        if (o.replay > replay || (o.replay == replay && o.strategy.outcomes < strategy.outcomes)) {
            replay = o.replay;
            strategy = o.strategy;
        }
    }
};

}  // namespace

double classical_value(const BellExpression& expr, const DeterministicStrategy& s) {
    check_strategy_shape(expr, s);
    const int d = expr.d;
    std::vector<Cx> wtab(d);
    for (int q = 0; q < d; ++q) wtab[q] = omega(d, q);

    // Kahan only pays off once cancellation across many terms can bite
    const bool careful = expr.terms.size() > 1000;
    Kahan ksum;
    double plain = 0.0;
    for (const auto& t : expr.terms) {
        long long q = 0;
        for (const auto& f : t.factors) q += static_cast<long long>(f.power) * s.outcomes[f.party][f.setting];
        const double v = (t.coeff * wtab[q % d]).real();
        if (careful)
            ksum.add(v);
        else
            plain += v;
    }
    return careful ? ksum.sum : plain;
}

BoundResult exact_bound(const BellExpression& expr, std::uint64_t budget, int threads) {
    const int d = expr.d;
    int pivot = 0;
    for (int p = 1; p < expr.parties(); ++p)
        if (expr.scenario[p] > expr.scenario[pivot]) pivot = p;
    const int px = expr.scenario[pivot];

    const auto slots = slot_list(expr, pivot);
    std::vector<std::vector<int>> slot_of(expr.parties());
    for (int p = 0; p < expr.parties(); ++p) slot_of[p].assign(expr.scenario[p], -1);
    for (std::size_t i = 0; i < slots.size(); ++i) slot_of[slots[i].first][slots[i].second] = static_cast<int>(i);

    struct PreTerm {
        Cx coeff;
        std::vector<std::pair<int, int>> rest;  // (slot, power)
        int pivot_setting = -1;
        int pivot_power = 0;
    };
    std::vector<PreTerm> pre;
    pre.reserve(expr.terms.size());
    for (const auto& t : expr.terms) {
        PreTerm pt;
        pt.coeff = t.coeff;
        for (const auto& f : t.factors) {
            if (f.party == pivot) {
                pt.pivot_setting = f.setting;
                pt.pivot_power = f.power;
            } else {
                pt.rest.emplace_back(slot_of[f.party][f.setting], f.power);
            }
        }
        pre.push_back(std::move(pt));
    }

    const std::uint64_t count = strategy_count(d, slots.size(), budget, "exact enumeration");
    std::vector<Cx> wtab(d);
    for (int q = 0; q < d; ++q) wtab[q] = omega(d, q);

    if (threads < 1) threads = 1;
    std::vector<Winner> parts(threads);
    parallel_chunks(count, threads, [&](int chunk, std::uint64_t begin, std::uint64_t end) {
        Winner& win = parts[chunk];
        std::vector<int> digits = decode(begin, d, slots.size());
        std::vector<std::vector<Cx>> acc(px, std::vector<Cx>(d));
        std::vector<std::vector<double>> fold(px, std::vector<double>(d));
        std::vector<std::vector<int>> ties(px);
        std::vector<std::size_t> pick(px);
        DeterministicStrategy cand;
        cand.outcomes.resize(expr.parties());
        for (int p = 0; p < expr.parties(); ++p) cand.outcomes[p].assign(expr.scenario[p], 0);
        for (std::uint64_t code = begin; code < end; ++code) {
            for (auto& row : acc) std::fill(row.begin(), row.end(), Cx{});
            double v = 0.0;
            for (const auto& t : pre) {
                long long q = 0;
                for (const auto& [slot, pw] : t.rest) q += static_cast<long long>(pw) * digits[slot];
                const Cx c = t.coeff * wtab[q % d];
                if (t.pivot_setting < 0)
                    v += c.real();
                else
                    acc[t.pivot_setting][t.pivot_power] += c;
            }
            for (int x = 0; x < px; ++x) {
                double bv = -std::numeric_limits<double>::infinity();
                for (int a = 0; a < d; ++a) {
                    double sv = 0.0;
                    for (int n = 1; n < d; ++n) sv += (acc[x][n] * wtab[n * a % d]).real();
                    fold[x][a] = sv;
                    if (sv > bv) bv = sv;
                }
                v += bv;
            }
            if (v > win.internal) win.internal = v;
            if (v >= win.internal - tie_cushion) {
                // possible winner once replayed; the naive search sees every
                // pivot completion, so replay all near-best completions here too
                for (std::size_t i = 0; i < slots.size(); ++i)
                    cand.outcomes[slots[i].first][slots[i].second] = digits[i];
                for (int x = 0; x < px; ++x) {
                    ties[x].clear();
                    const double mx = *std::max_element(fold[x].begin(), fold[x].end());
                    for (int a = 0; a < d; ++a)
                        if (fold[x][a] >= mx - tie_cushion) ties[x].push_back(a);
                }
                std::fill(pick.begin(), pick.end(), 0);
                while (true) {
                    for (int x = 0; x < px; ++x) cand.outcomes[pivot][x] = ties[x][pick[x]];
                    win.offer(expr, cand);
                    int x = 0;
                    while (x < px && ++pick[x] == ties[x].size()) {
                        pick[x] = 0;
                        ++x;
                    }
                    if (x == px) break;
                }
            }
            increment(digits, d);
        }
    });

    Winner overall;
    for (const auto& w : parts) overall.absorb(w);

    // the folded running maximum and the replayed winner approximate the same
    // real value; a gap beyond float noise means the fold itself is broken
    if (std::abs(overall.replay - overall.internal) > 1e-9 * std::max(1.0, std::abs(overall.internal)))
        throw InternalCheckError("pivot-folded bound " + std::to_string(overall.internal) +
                                 " disagrees with the replayed winner value " +
                                 std::to_string(overall.replay));

    BoundResult out;
    out.mode = "exact";
    out.enumerated = count;
    out.value = overall.replay;
    out.strategy = std::move(overall.strategy);
    return out;
}

BoundResult exact_bound_naive(const BellExpression& expr, std::uint64_t budget, int threads) {
    const int d = expr.d;
    const auto slots = slot_list(expr, -1);
    std::vector<std::vector<int>> slot_of(expr.parties());
    for (int p = 0; p < expr.parties(); ++p) slot_of[p].assign(expr.scenario[p], -1);
    for (std::size_t i = 0; i < slots.size(); ++i) slot_of[slots[i].first][slots[i].second] = static_cast<int>(i);

    struct PreTerm {
        Cx coeff;
        std::vector<std::pair<int, int>> rest;
    };
    std::vector<PreTerm> pre;
    pre.reserve(expr.terms.size());
    for (const auto& t : expr.terms) {
        PreTerm pt;
        pt.coeff = t.coeff;
        for (const auto& f : t.factors) pt.rest.emplace_back(slot_of[f.party][f.setting], f.power);
        pre.push_back(std::move(pt));
    }

    const std::uint64_t count = strategy_count(d, slots.size(), budget, "naive enumeration");
    std::vector<Cx> wtab(d);
    for (int q = 0; q < d; ++q) wtab[q] = omega(d, q);

    if (threads < 1) threads = 1;
    std::vector<Winner> parts(threads);
    parallel_chunks(count, threads, [&](int chunk, std::uint64_t begin, std::uint64_t end) {
        Winner& win = parts[chunk];
        std::vector<int> digits = decode(begin, d, slots.size());
        DeterministicStrategy cand;
        cand.outcomes.resize(expr.parties());
        for (int p = 0; p < expr.parties(); ++p) cand.outcomes[p].assign(expr.scenario[p], 0);
        for (std::uint64_t code = begin; code < end; ++code) {
            double v = 0.0;
            for (const auto& t : pre) {
                long long q = 0;
                for (const auto& [slot, pw] : t.rest) q += static_cast<long long>(pw) * digits[slot];
                v += (t.coeff * wtab[q % d]).real();
            }
            if (v > win.internal) win.internal = v;
            if (v >= win.internal - tie_cushion) {
                for (std::size_t i = 0; i < slots.size(); ++i)
                    cand.outcomes[slots[i].first][slots[i].second] = digits[i];
                win.offer(expr, cand);
            }
            increment(digits, d);
        }
    });

    Winner overall;
    for (const auto& w : parts) overall.absorb(w);

    BoundResult out;
    out.mode = "exact_naive";
    out.enumerated = count;
    out.value = overall.replay;
    out.strategy = std::move(overall.strategy);
    return out;
}

BoundResult heuristic_bound(const BellExpression& expr, int restarts, std::uint64_t seed, int threads) {
    if (restarts < 1) throw InputError("BAD_FLAG", "restarts must be at least 1");
    const int d = expr.d;
    const auto slots = slot_list(expr, -1);
    std::vector<std::vector<int>> slot_of(expr.parties());
    for (int p = 0; p < expr.parties(); ++p) slot_of[p].assign(expr.scenario[p], -1);
    for (std::size_t i = 0; i < slots.size(); ++i) slot_of[slots[i].first][slots[i].second] = static_cast<int>(i);

    // per-slot list of (term, power in that term) for the delta evaluation
    struct PreTerm {
        Cx coeff;
        std::vector<std::pair<int, int>> rest;
    };
    std::vector<PreTerm> pre;
    for (const auto& t : expr.terms) {
        PreTerm pt;
        pt.coeff = t.coeff;
        for (const auto& f : t.factors) pt.rest.emplace_back(slot_of[f.party][f.setting], f.power);
        pre.push_back(std::move(pt));
    }
    std::vector<std::vector<std::pair<int, int>>> touching(slots.size());  // slot -> (term, power)
    for (std::size_t ti = 0; ti < pre.size(); ++ti)
        for (const auto& [slot, pw] : pre[ti].rest) touching[slot].emplace_back(static_cast<int>(ti), pw);

    std::vector<Cx> wtab(d);
    for (int q = 0; q < d; ++q) wtab[q] = omega(d, q);

    struct Local {
        double value = -std::numeric_limits<double>::infinity();
        std::vector<int> digits;
    };
    std::vector<Local> results(restarts);

    if (threads < 1) threads = 1;
    parallel_chunks(static_cast<std::uint64_t>(restarts), threads,
                    [&](int, std::uint64_t rb, std::uint64_t re) {
        for (std::uint64_t ri = rb; ri < re; ++ri) {
            Rng rng(seed + ri);
            std::vector<int> digits(slots.size());
            for (auto& v : digits) v = static_cast<int>(rng.uniform_mod(d));

            bool changed = true;
            int sweeps = 0;
            while (changed && sweeps < 10000) {
                changed = false;
                ++sweeps;
                for (std::size_t si = 0; si < slots.size(); ++si) {
                    // value of the touched terms for each candidate outcome
                    std::vector<double> cand(d, 0.0);
                    for (const auto& [ti, pw] : touching[si]) {
                        long long q = 0;
                        for (const auto& [slot, p2] : pre[ti].rest)
                            if (slot != static_cast<int>(si)) q += static_cast<long long>(p2) * digits[slot];
                        const Cx c = pre[ti].coeff * wtab[q % d];
                        for (int a = 0; a < d; ++a) cand[a] += (c * wtab[pw * a % d]).real();
                    }
                    int cur = digits[si];
                    int best = cur;
                    for (int a = 0; a < d; ++a)
                        if (cand[a] > cand[best] + 1e-15) best = a;
                    if (best != cur) {
                        digits[si] = best;
                        changed = true;
                    }
                }
            }
            DeterministicStrategy s;
            s.outcomes.resize(expr.parties());
            for (int p = 0; p < expr.parties(); ++p) s.outcomes[p].assign(expr.scenario[p], 0);
            for (std::size_t i = 0; i < slots.size(); ++i)
                s.outcomes[slots[i].first][slots[i].second] = digits[i];
            results[ri].value = classical_value(expr, s);
            results[ri].digits = digits;
        }
    });

    int winner = 0;
    for (int ri = 1; ri < restarts; ++ri)
        if (results[ri].value > results[winner].value) winner = ri;

    BoundResult out;
    out.mode = "heuristic";
    out.restarts = restarts;
    out.enumerated = static_cast<std::uint64_t>(restarts);
    out.strategy.outcomes.resize(expr.parties());
    for (int p = 0; p < expr.parties(); ++p) out.strategy.outcomes[p].assign(expr.scenario[p], 0);
    for (std::size_t i = 0; i < slots.size(); ++i)
        out.strategy.outcomes[slots[i].first][slots[i].second] = results[winner].digits[i];
    out.value = classical_value(expr, out.strategy);
    return out;
}

ViolationReport make_violation_report(const BoundResult& classical, double quantum) {
    ViolationReport rep;
    rep.classical_bound = classical.value;
    rep.quantum_value = quantum;
    rep.classical_mode = classical.mode;
    rep.ratio = classical.value != 0.0 ? quantum / classical.value
                                       : std::numeric_limits<double>::infinity();
    rep.violated = quantum > classical.value + 1e-9;
    return rep;
}

}  // namespace graphbell
