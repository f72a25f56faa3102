#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "clearing/errors.hpp"
#include "clearing/market.hpp"
#include "clearing/matching.hpp"
#include "clearing/rational.hpp"
#include "clearing/skew.hpp"

namespace clearing {

// One price-reduction round of the descending auction.
struct TraceRound {
    int round_index = 0;
    PriceVector prices_before;
    PriceVector prices_after;
    std::vector<int> skewed_set;   // goods whose price was cut, sorted
    std::vector<int> neighbor_set; // buyers adjacent to the set, sorted
    Rational reduction;            // amount cut from every good in the set, > 0
    Rational graph_skewness;       // potential of the graph this round acted on
};

struct AuctionOutcome {
    PriceVector final_prices;
    Matching matching; // perfect matching supported by final_prices
    std::vector<TraceRound> trace;
    int rounds = 0;
};

namespace detail {

// Smallest cut to the prices of the goods in S (flags in_s) that hands at
// least one currently unneighbored buyer a weakly best deal inside S. Each
// such buyer's benchmark is her best payoff outside S, floored at the opt-out
// payoff 0; the cut is the minimum gap between that benchmark and her payoff
// on a good in S.
inline Rational reduction_value(const ValuationMatrix& V, const PriceVector& P, const std::vector<char>& in_s,
                                const std::vector<char>& in_n) {
    const int m = V.m;
    Rational best;
    bool have = false;
    for (int i = 0; i < m; ++i) {
        if (in_n[static_cast<size_t>(i)]) continue;
        Rational outside(0);
        for (int k = 0; k < m; ++k)
            if (!in_s[static_cast<size_t>(k)])
                outside = std::max(outside, V.values[static_cast<size_t>(i)][static_cast<size_t>(k)] - P[static_cast<size_t>(k)]);
        for (int l = 0; l < m; ++l) {
            if (!in_s[static_cast<size_t>(l)]) continue;
            const Rational gap =
                outside - (V.values[static_cast<size_t>(i)][static_cast<size_t>(l)] - P[static_cast<size_t>(l)]);
            if (!have || gap < best) {
                best = gap;
                have = true;
            }
        }
    }
    if (!have) throw AlgorithmInvariantViolation("no buyer outside the neighbor set");
    return best;
}

} // namespace detail

// Price cut for a constricted good set S at prices P. Throws NotConstricted
// unless |S| > |N(S)| in the preference graph of (V, P).
inline Rational price_reduction(const ValuationMatrix& V, const PriceVector& P, const std::vector<int>& S) {
    const PreferenceGraph G = preference_graph(V, P);
    std::vector<char> in_s(static_cast<size_t>(V.m), 0), in_n(static_cast<size_t>(V.m), 0);
    long long s_count = 0, n_count = 0;
    for (int j : S) {
        if (j < 0 || j >= V.m) throw IndexError("good index out of range");
        if (!in_s[static_cast<size_t>(j)]) {
            in_s[static_cast<size_t>(j)] = 1;
            ++s_count;
        }
    }
    for (int j = 0; j < V.m; ++j)
        if (in_s[static_cast<size_t>(j)])
            for (int b : G.good_to_buyers[static_cast<size_t>(j)])
                if (!in_n[static_cast<size_t>(b)]) {
                    in_n[static_cast<size_t>(b)] = 1;
                    ++n_count;
                }
    if (s_count <= n_count) throw NotConstricted("set has at least as many neighbors as goods");
    return detail::reduction_value(V, P, in_s, in_n);
}

// Descending price auction. Prices start at the column maxima; while the
// preference graph has no perfect matching, every price in the maximally
// skewed set is cut by the smallest amount that attracts a new buyer.
// Terminates at the maximum market-clearing price vector in at most m*m rounds.
inline AuctionOutcome descending_auction(const ValuationMatrix& V) {
    const int m = V.m;
    AuctionOutcome out;
    out.final_prices = initial_prices(V);
    for (;;) {
        const PreferenceGraph G = preference_graph(V, out.final_prices);
        const BipartiteGraph bg = graph_of(G);
        Matching M = maximum_matching(bg);
        if (M.size() == m) {
            out.matching = std::move(M);
            return out;
        }
        if (out.rounds >= m * m)
            throw AlgorithmInvariantViolation("descending auction exceeded its round bound");

        const SkewedSetResult S = most_skewed_colored(bg, M);
        std::vector<char> in_s(static_cast<size_t>(m), 0), in_n(static_cast<size_t>(m), 0);
        for (int j : S.goods) in_s[static_cast<size_t>(j)] = 1;
        for (int i : S.neighbors) in_n[static_cast<size_t>(i)] = 1;
        const Rational cut = detail::reduction_value(V, out.final_prices, in_s, in_n);
        if (cut.sign() <= 0) throw AlgorithmInvariantViolation("non-positive price reduction");

        TraceRound round;
        round.round_index = out.rounds;
        round.prices_before = out.final_prices;
        round.skewed_set = S.goods;
        round.neighbor_set = S.neighbors;
        round.reduction = cut;
        round.graph_skewness = S.skewness;
        for (int j : S.goods) out.final_prices[static_cast<size_t>(j)] -= cut;
        round.prices_after = out.final_prices;
        out.trace.push_back(std::move(round));
        ++out.rounds;
    }
}

inline bool is_market_clearing(const ValuationMatrix& V, const PriceVector& P) {
    return has_perfect_matching(graph_of(preference_graph(V, P)));
}

struct MaximalityResult {
    bool maximum = false;
    std::vector<int> witness_buyers; // on failure: a buyer set with |B| >= |N(B) + dummy|
};

namespace detail {

// Buyer-side graph of G plus the dummy good (index m), with buyer `dup`
// duplicated as extra left vertex m. Left = buyers, right = goods.
inline BipartiteGraph duplicated_buyer_graph(const DummyExtendedGraph& D, int dup) {
    const int m = D.base.m;
    BipartiteGraph H;
    H.m = m + 1;
    H.adj.assign(static_cast<size_t>(m) + 1, {});
    for (int i = 0; i < m; ++i) H.adj[static_cast<size_t>(i)] = D.base.buyer_to_goods[static_cast<size_t>(i)];
    for (int i : D.dummy_adjacent_buyers) H.adj[static_cast<size_t>(i)].push_back(m);
    H.adj[static_cast<size_t>(m)] = H.adj[static_cast<size_t>(dup)];
    return H;
}

} // namespace detail

// A market-clearing P is the maximum MCP iff every non-empty buyer set has
// strictly more neighbors than members once the dummy good is added. That
// holds iff for every buyer i the dummy-extended graph with i duplicated
// still has a buyer-saturating matching, which is what we test (m matching
// runs instead of 2^m subsets). On failure the deficiency witness of the
// first failing duplication is returned.
inline MaximalityResult verify_maximum(const ValuationMatrix& V, const PriceVector& P) {
    const int m = V.m;
    const PreferenceGraph G = preference_graph(V, P);
    if (maximum_matching(graph_of(G)).size() != m)
        throw NotClearing("prices are not market clearing");
    const DummyExtendedGraph D = add_dummy_good(G);

    for (int i = 0; i < m; ++i) {
        const BipartiteGraph H = detail::duplicated_buyer_graph(D, i);
        const Matching M = maximum_matching(H);
        if (M.size() == H.m) continue;

        std::vector<int> unmatched;
        for (int u = 0; u < H.m; ++u)
            if (M.buyer_of_good[static_cast<size_t>(u)] < 0) unmatched.push_back(u);
        // left side of H holds the buyers, so the "goods" of the closure are buyers
        const ReachableSet reach = alternating_reachable(H, M, unmatched);
        MaximalityResult res;
        res.maximum = false;
        for (int u : reach.goods) {
            const int buyer = u == m ? i : u; // collapse the duplicate back onto buyer i
            if (!std::count(res.witness_buyers.begin(), res.witness_buyers.end(), buyer))
                res.witness_buyers.push_back(buyer);
        }
        std::sort(res.witness_buyers.begin(), res.witness_buyers.end());
        return res;
    }
    return MaximalityResult{true, {}};
}

// Independent maximum-MCP oracle: the price of a good is the social-welfare
// loss caused by deleting it from the market. Uses only the assignment
// solver, no auction machinery.
inline PriceVector externality_prices(const ValuationMatrix& V) {
    const int m = V.m;
    const Rational sw_all = max_weight_assignment(V.values, true).total_value;
    PriceVector P(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        std::vector<std::vector<Rational>> grid;
        grid.reserve(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            std::vector<Rational> row;
            row.reserve(static_cast<size_t>(m) - 1);
            for (int k = 0; k < m; ++k)
                if (k != j) row.push_back(V.values[static_cast<size_t>(i)][static_cast<size_t>(k)]);
            grid.push_back(std::move(row));
        }
        P[static_cast<size_t>(j)] = sw_all - max_weight_assignment(grid, true).total_value;
    }
    return P;
}

// Ascending auction toward the minimum MCP. From zero prices, repeatedly
// raise the over-demanded goods (those on alternating paths from unmatched
// buyers) by the smallest increment that makes some demander of the set
// indifferent to an outside good or to opting out.
inline PriceVector ascending_dgs(const ValuationMatrix& V) {
    const int m = V.m;
    PriceVector P(static_cast<size_t>(m), Rational(0));

    // Round cap: every price lives on the grid (1/L)Z where L is the common
    // denominator of all values, rises by >= 1/L per round it is touched, and
    // never passes the largest value. Anything beyond that is a bug.
    mpz_class lattice(1);
    Rational vmax(0);
    for (const auto& row : V.values)
        for (const auto& v : row) {
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), lattice.get_mpz_t(), v.denominator().get_mpz_t());
            lattice = l;
            vmax = std::max(vmax, v);
        }
    const mpz_class cap = lattice * (vmax.numerator() / vmax.denominator() + 1) * (m + 1) + m + 1;

    for (mpz_class rounds = 0;; ++rounds) {
        if (rounds > cap) throw AlgorithmInvariantViolation("ascending auction exceeded its round bound");
        const PreferenceGraph G = preference_graph(V, P);
        Matching M = maximum_matching(graph_of(G));
        if (M.size() == m) return P;

        BipartiteGraph T{m, G.buyer_to_goods}; // transposed view: buyers on the left
        Matching MT{M.good_of_buyer, M.buyer_of_good};
        std::vector<int> unmatched;
        for (int i = 0; i < m; ++i)
            if (M.good_of_buyer[static_cast<size_t>(i)] < 0) unmatched.push_back(i);
        const ReachableSet reach = alternating_reachable(T, MT, unmatched);
        const std::vector<int>& reached_buyers = reach.goods; // left side of T
        const std::vector<int>& over_demanded = reach.buyers; // right side of T
        if (over_demanded.empty())
            throw AlgorithmInvariantViolation("unmatched buyer demands nothing before clearing");

        std::vector<char> in_o(static_cast<size_t>(m), 0);
        for (int k : over_demanded) in_o[static_cast<size_t>(k)] = 1;
        Rational delta;
        bool have = false;
        for (int i : reached_buyers) {
            Rational outside(0);
            for (int k = 0; k < m; ++k)
                if (!in_o[static_cast<size_t>(k)])
                    outside = std::max(outside, V.values[static_cast<size_t>(i)][static_cast<size_t>(k)] - P[static_cast<size_t>(k)]);
            const Rational gap = G.surpluses[static_cast<size_t>(i)] - outside;
            if (!have || gap < delta) {
                delta = gap;
                have = true;
            }
        }
        if (!have || delta.sign() <= 0)
            throw AlgorithmInvariantViolation("ascending auction made no progress");
        for (int k : over_demanded) P[static_cast<size_t>(k)] += delta;
    }
}

// Pivot payments: what buyer i's presence costs everyone else. Equals the
// minimum-MCP price of the good an efficient assignment hands to i.
inline std::vector<Rational> vcg_payments(const ValuationMatrix& V) {
    const int m = V.m;
    const AssignmentResult eff = lexmin_optimal_assignment(V.values, true);
    std::vector<Rational> pay(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        std::vector<std::vector<Rational>> grid;
        grid.reserve(static_cast<size_t>(m) - 1);
        for (int r = 0; r < m; ++r)
            if (r != i) grid.push_back(V.values[static_cast<size_t>(r)]);
        const Rational sw_without_i = max_weight_assignment(grid, true).total_value;
        const int g = eff.matching.good_of_buyer[static_cast<size_t>(i)];
        const Rational own = g >= 0 ? V.values[static_cast<size_t>(i)][static_cast<size_t>(g)] : Rational(0);
        pay[static_cast<size_t>(i)] = sw_without_i - (eff.total_value - own);
    }
    return pay;
}

} // namespace clearing
