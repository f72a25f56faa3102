#pragma once

#include <string>
#include <utility>
#include <vector>

#include "clearing/errors.hpp"
#include "clearing/rational.hpp"

namespace clearing {

// Square grid of exact non-negative valuations: values[i][j] is buyer i's
// value for good j. Markets are balanced (same number of buyers and goods);
// balance_market() pads rectangular input with zero-valued dummy rows/columns.
struct ValuationMatrix {
    int m = 0;
    std::vector<std::vector<Rational>> values;
    std::vector<std::string> buyer_labels;
    std::vector<std::string> good_labels;

    const Rational& at(int buyer, int good) const {
        if (buyer < 0 || buyer >= m || good < 0 || good >= m)
            throw IndexError("valuation index out of range");
        return values[static_cast<size_t>(buyer)][static_cast<size_t>(good)];
    }
};

// prices[j] is the posted price of good j.
using PriceVector = std::vector<Rational>;

// Bipartite demand structure induced by (V, P): buyer i is linked to every
// good that attains her best non-negative surplus. A buyer whose best raw
// surplus is strictly negative links to nothing (she opts out), but ties at
// zero surplus are kept.
struct PreferenceGraph {
    int m = 0;
    std::vector<std::vector<int>> good_to_buyers; // sorted buyer indices per good
    std::vector<std::vector<int>> buyer_to_goods; // sorted good indices per buyer
    std::vector<Rational> surpluses;              // best non-negative surplus per buyer
};

// PreferenceGraph plus one fictitious good valued 0 by everyone; it is
// demanded exactly by the zero-surplus buyers. Used by the maximality test.
struct DummyExtendedGraph {
    PreferenceGraph base;
    std::vector<int> dummy_adjacent_buyers; // sorted
};

namespace detail {

inline std::string default_label(const char* prefix, int index) {
    return std::string(prefix) + std::to_string(index + 1);
}

} // namespace detail

// Validates a (possibly rectangular) grid and pads it to a square market.
// Padding rows are zero-valued dummy buyers, padding columns zero-valued
// dummy goods; their labels are marked so output stays readable.
inline ValuationMatrix balance_market(const std::vector<std::vector<Rational>>& grid,
                                      std::vector<std::string> buyer_labels = {},
                                      std::vector<std::string> good_labels = {}) {
    if (grid.empty() || grid.front().empty()) throw EmptyMarket("empty valuation grid");
    const size_t rows = grid.size(), cols = grid.front().size();
    for (const auto& row : grid) {
        if (row.size() != cols) throw DimensionError("ragged valuation grid");
        for (const auto& v : row)
            if (v.sign() < 0) throw InvalidValuation("negative valuation " + v.str());
    }
    if (!buyer_labels.empty() && buyer_labels.size() != rows)
        throw DimensionError("buyer label count does not match grid rows");
    if (!good_labels.empty() && good_labels.size() != cols)
        throw DimensionError("good label count does not match grid columns");

    ValuationMatrix out;
    out.m = static_cast<int>(std::max(rows, cols));
    const size_t m = static_cast<size_t>(out.m);
    out.values.assign(m, std::vector<Rational>(m, Rational(0)));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) out.values[i][j] = grid[i][j];

    out.buyer_labels.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        if (i < rows)
            out.buyer_labels.push_back(!buyer_labels.empty() ? buyer_labels[i]
                                                             : detail::default_label("b", static_cast<int>(i)));
        else
            out.buyer_labels.push_back(detail::default_label("dummy-buyer-", static_cast<int>(i - rows)));
    }
    out.good_labels.reserve(m);
    for (size_t j = 0; j < m; ++j) {
        if (j < cols)
            out.good_labels.push_back(!good_labels.empty() ? good_labels[j]
                                                           : detail::default_label("g", static_cast<int>(j)));
        else
            out.good_labels.push_back(detail::default_label("dummy-good-", static_cast<int>(j - cols)));
    }
    return out;
}

// Start-of-auction prices: the column maxima. At these prices every good is
// demanded by at least one buyer (its highest-value buyer sits at surplus 0).
inline PriceVector initial_prices(const ValuationMatrix& V) {
    PriceVector P(static_cast<size_t>(V.m), Rational(0));
    for (int j = 0; j < V.m; ++j) {
        Rational best = V.values[0][static_cast<size_t>(j)];
        for (int i = 1; i < V.m; ++i) best = std::max(best, V.values[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        P[static_cast<size_t>(j)] = best;
    }
    return P;
}

// Best non-negative payoff buyer i can get at prices P (0 = opt out).
inline Rational buyer_surplus(const ValuationMatrix& V, const PriceVector& P, int i) {
    if (i < 0 || i >= V.m) throw IndexError("buyer index out of range");
    if (static_cast<int>(P.size()) != V.m) throw DimensionError("price vector size mismatch");
    Rational best(0);
    for (int j = 0; j < V.m; ++j)
        best = std::max(best, V.values[static_cast<size_t>(i)][static_cast<size_t>(j)] - P[static_cast<size_t>(j)]);
    return best;
}

inline PreferenceGraph preference_graph(const ValuationMatrix& V, const PriceVector& P) {
    if (static_cast<int>(P.size()) != V.m) throw DimensionError("price vector size mismatch");
    PreferenceGraph G;
    G.m = V.m;
    const size_t m = static_cast<size_t>(V.m);
    G.good_to_buyers.assign(m, {});
    G.buyer_to_goods.assign(m, {});
    G.surpluses.reserve(m);
    for (int i = 0; i < V.m; ++i) {
        Rational best(0); // surplus is floored at the opt-out payoff 0
        for (int j = 0; j < V.m; ++j)
            best = std::max(best, V.values[static_cast<size_t>(i)][static_cast<size_t>(j)] - P[static_cast<size_t>(j)]);
        // raw == best >= 0 keeps ties at zero surplus; a buyer whose raw
        // surpluses are all negative never attains best and gets no edges.
        for (int j = 0; j < V.m; ++j) {
            const Rational raw = V.values[static_cast<size_t>(i)][static_cast<size_t>(j)] - P[static_cast<size_t>(j)];
            if (raw == best) {
                G.good_to_buyers[static_cast<size_t>(j)].push_back(i);
                G.buyer_to_goods[static_cast<size_t>(i)].push_back(j);
            }
        }
        G.surpluses.push_back(best);
    }
    return G;
}

// Attach the dummy good: demanded exactly by buyers at zero surplus.
inline DummyExtendedGraph add_dummy_good(const PreferenceGraph& G) {
    DummyExtendedGraph D;
    D.base = G;
    for (int i = 0; i < G.m; ++i)
        if (G.surpluses[static_cast<size_t>(i)].sign() == 0) D.dummy_adjacent_buyers.push_back(i);
    return D;
}

} // namespace clearing
