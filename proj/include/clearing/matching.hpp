#pragma once

#include <algorithm>
#include <queue>
#include <utility>
#include <vector>

#include "clearing/errors.hpp"
#include "clearing/market.hpp"
#include "clearing/rational.hpp"

namespace clearing {

// Balanced bipartite graph, goods on the left and buyers on the right,
// both indexed 0..m-1. adj[g] lists the buyers adjacent to good g; the
// matching routines follow adjacency order, so keep lists sorted when
// deterministic output matters.
struct BipartiteGraph {
    int m = 0;
    std::vector<std::vector<int>> adj;
};

inline BipartiteGraph graph_of(const PreferenceGraph& G) {
    return BipartiteGraph{G.m, G.good_to_buyers};
}

// Partial injective assignment between goods and buyers; -1 marks unmatched.
// Also reused for weight grids, where "goods" are columns and "buyers" rows.
struct Matching {
    std::vector<int> buyer_of_good;
    std::vector<int> good_of_buyer;

    int size() const {
        int n = 0;
        for (int b : buyer_of_good) n += b >= 0;
        return n;
    }
    bool perfect() const {
        if (buyer_of_good.size() != good_of_buyer.size()) return false;
        for (int b : buyer_of_good)
            if (b < 0) return false;
        return true;
    }
};

// Hopcroft-Karp maximum matching. Deterministic: phases scan free goods in
// index order and walk adjacency lists in the order given.
inline Matching maximum_matching(const BipartiteGraph& g) {
    const int m = g.m;
    constexpr int INF = 1 << 30;
    std::vector<int> match_g(static_cast<size_t>(m), -1), match_b(static_cast<size_t>(m), -1);
    std::vector<int> dist(static_cast<size_t>(m), 0);

    auto bfs = [&]() -> bool {
        std::queue<int> q;
        bool reachable_free_buyer = false;
        for (int u = 0; u < m; ++u) {
            if (match_g[static_cast<size_t>(u)] < 0) {
                dist[static_cast<size_t>(u)] = 0;
                q.push(u);
            } else {
                dist[static_cast<size_t>(u)] = INF;
            }
        }
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int b : g.adj[static_cast<size_t>(u)]) {
                const int w = match_b[static_cast<size_t>(b)];
                if (w < 0) {
                    reachable_free_buyer = true;
                } else if (dist[static_cast<size_t>(w)] == INF) {
                    dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(u)] + 1;
                    q.push(w);
                }
            }
        }
        return reachable_free_buyer;
    };

    auto dfs = [&](auto&& self, int u) -> bool {
        for (int b : g.adj[static_cast<size_t>(u)]) {
            const int w = match_b[static_cast<size_t>(b)];
            if (w < 0 || (dist[static_cast<size_t>(w)] == dist[static_cast<size_t>(u)] + 1 && self(self, w))) {
                match_g[static_cast<size_t>(u)] = b;
                match_b[static_cast<size_t>(b)] = u;
                return true;
            }
        }
        dist[static_cast<size_t>(u)] = INF;
        return false;
    };

    while (bfs())
        for (int u = 0; u < m; ++u)
            if (match_g[static_cast<size_t>(u)] < 0) dfs(dfs, u);

    return Matching{std::move(match_g), std::move(match_b)};
}

inline bool has_perfect_matching(const BipartiteGraph& g) {
    return maximum_matching(g).size() == g.m;
}

struct ReachableSet {
    std::vector<int> goods;  // sorted, includes the start goods
    std::vector<int> buyers; // sorted
};

// Breadth-first closure from the given unmatched goods, walking non-matching
// edges good->buyer and matching edges buyer->good. With M maximum this is
// exactly the deficiency structure around the start goods.
inline ReachableSet alternating_reachable(const BipartiteGraph& g, const Matching& M,
                                          const std::vector<int>& start_goods) {
    const int m = g.m;
    std::vector<char> good_seen(static_cast<size_t>(m), 0), buyer_seen(static_cast<size_t>(m), 0);
    std::queue<int> q; // goods only; buyer hops are expanded inline
    for (int s : start_goods) {
        if (s < 0 || s >= m) throw IndexError("start good out of range");
        if (M.buyer_of_good[static_cast<size_t>(s)] >= 0)
            throw InvalidStart("alternating search started from matched good");
        if (!good_seen[static_cast<size_t>(s)]) {
            good_seen[static_cast<size_t>(s)] = 1;
            q.push(s);
        }
    }
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int b : g.adj[static_cast<size_t>(u)]) {
            if (b == M.buyer_of_good[static_cast<size_t>(u)]) continue; // only non-matching edges leave a good
            if (buyer_seen[static_cast<size_t>(b)]) continue;
            buyer_seen[static_cast<size_t>(b)] = 1;
            const int w = M.good_of_buyer[static_cast<size_t>(b)];
            if (w >= 0 && !good_seen[static_cast<size_t>(w)]) {
                good_seen[static_cast<size_t>(w)] = 1;
                q.push(w);
            }
        }
    }
    ReachableSet r;
    for (int j = 0; j < m; ++j)
        if (good_seen[static_cast<size_t>(j)]) r.goods.push_back(j);
    for (int i = 0; i < m; ++i)
        if (buyer_seen[static_cast<size_t>(i)]) r.buyers.push_back(i);
    return r;
}

struct Component {
    std::vector<int> goods;  // sorted
    std::vector<int> buyers; // sorted
};

// Maximal connected components, isolated vertices as singletons. Components
// are ordered by their smallest good (good-less components come last, by
// smallest buyer).
inline std::vector<Component> connected_components(const BipartiteGraph& g) {
    const int m = g.m;
    std::vector<std::vector<int>> buyer_adj(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j)
        for (int b : g.adj[static_cast<size_t>(j)]) buyer_adj[static_cast<size_t>(b)].push_back(j);

    std::vector<int> good_comp(static_cast<size_t>(m), -1), buyer_comp(static_cast<size_t>(m), -1);
    std::vector<Component> comps;
    auto explore = [&](int good0, int buyer0) {
        Component c;
        std::queue<std::pair<char, int>> q; // ('g'|'b', index)
        if (good0 >= 0) {
            good_comp[static_cast<size_t>(good0)] = static_cast<int>(comps.size());
            q.emplace('g', good0);
        } else {
            buyer_comp[static_cast<size_t>(buyer0)] = static_cast<int>(comps.size());
            q.emplace('b', buyer0);
        }
        while (!q.empty()) {
            auto [side, v] = q.front();
            q.pop();
            if (side == 'g') {
                c.goods.push_back(v);
                for (int b : g.adj[static_cast<size_t>(v)])
                    if (buyer_comp[static_cast<size_t>(b)] < 0) {
                        buyer_comp[static_cast<size_t>(b)] = static_cast<int>(comps.size());
                        q.emplace('b', b);
                    }
            } else {
                c.buyers.push_back(v);
                for (int j : buyer_adj[static_cast<size_t>(v)])
                    if (good_comp[static_cast<size_t>(j)] < 0) {
                        good_comp[static_cast<size_t>(j)] = static_cast<int>(comps.size());
                        q.emplace('g', j);
                    }
            }
        }
        std::sort(c.goods.begin(), c.goods.end());
        std::sort(c.buyers.begin(), c.buyers.end());
        comps.push_back(std::move(c));
    };
    for (int j = 0; j < m; ++j)
        if (good_comp[static_cast<size_t>(j)] < 0) explore(j, -1);
    for (int i = 0; i < m; ++i)
        if (buyer_comp[static_cast<size_t>(i)] < 0) explore(-1, i);
    return comps;
}

struct AssignmentResult {
    Matching matching;    // rows are buyers, columns are goods
    Rational total_value; // sum of matched weights, maximal over matchings
};

namespace detail {

// Exact O(n^3) Hungarian method for minimum-cost perfect assignment on a
// square cost matrix (rows to columns). Returns col index per row.
inline std::vector<int> hungarian_min_assignment(const std::vector<std::vector<Rational>>& cost) {
    const int n = static_cast<int>(cost.size());
    std::vector<Rational> u(static_cast<size_t>(n) + 1), v(static_cast<size_t>(n) + 1);
    std::vector<int> row_of_col(static_cast<size_t>(n) + 1, 0), way(static_cast<size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        row_of_col[0] = i;
        int j0 = 0;
        std::vector<Rational> minv(static_cast<size_t>(n) + 1);
        std::vector<char> have_minv(static_cast<size_t>(n) + 1, 0), used(static_cast<size_t>(n) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            const int i0 = row_of_col[static_cast<size_t>(j0)];
            int j1 = -1;
            Rational delta;
            bool have_delta = false;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                const Rational cur =
                    cost[static_cast<size_t>(i0 - 1)][static_cast<size_t>(j - 1)] - u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (!have_minv[static_cast<size_t>(j)] || cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    have_minv[static_cast<size_t>(j)] = 1;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (!have_delta || minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    have_delta = true;
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(row_of_col[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else if (have_minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (row_of_col[static_cast<size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<size_t>(j0)];
            row_of_col[static_cast<size_t>(j0)] = row_of_col[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> col_of_row(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (row_of_col[static_cast<size_t>(j)] > 0) col_of_row[static_cast<size_t>(row_of_col[static_cast<size_t>(j)] - 1)] = j - 1;
    return col_of_row;
}

} // namespace detail

// Maximum total-weight assignment of rows (buyers) to columns (goods) of a
// rectangular non-negative grid. With allow_unmatched, vertices may stay
// unmatched at zero contribution; since weights are non-negative this never
// changes the optimum value, only which matchings realize it. Internally the
// grid is zero-padded square and solved exactly by the Hungarian method.
inline AssignmentResult max_weight_assignment(const std::vector<std::vector<Rational>>& W, bool allow_unmatched) {
    const int rows = static_cast<int>(W.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(W.front().size());
    for (const auto& row : W) {
        if (static_cast<int>(row.size()) != cols) throw DimensionError("ragged weight grid");
        for (const auto& w : row)
            if (w.sign() < 0) throw InvalidValuation("negative weight " + w.str());
    }
    AssignmentResult res;
    res.matching.good_of_buyer.assign(static_cast<size_t>(rows), -1);
    res.matching.buyer_of_good.assign(static_cast<size_t>(cols), -1);
    if (rows == 0 || cols == 0) return res; // nothing to match (column/row-deleted oracles hit this)
    if (!allow_unmatched && rows != cols)
        throw DimensionError("full assignment requires a square grid");

    const int s = std::max(rows, cols);
    std::vector<std::vector<Rational>> cost(static_cast<size_t>(s), std::vector<Rational>(static_cast<size_t>(s), Rational(0)));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) cost[static_cast<size_t>(i)][static_cast<size_t>(j)] = -W[static_cast<size_t>(i)][static_cast<size_t>(j)];

    const std::vector<int> assign = detail::hungarian_min_assignment(cost);
    for (int i = 0; i < rows; ++i) {
        const int j = assign[static_cast<size_t>(i)];
        if (j < 0 || j >= cols) continue; // padded column = left unmatched
        res.matching.good_of_buyer[static_cast<size_t>(i)] = j;
        res.matching.buyer_of_good[static_cast<size_t>(j)] = i;
        res.total_value += W[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    return res;
}

// Canonical optimal assignment: among all maximum-weight assignments, the one
// whose row->column vector is lexicographically smallest (unmatched sorts
// last). Row by row, fix the smallest column whose completion still attains
// the optimum.
inline AssignmentResult lexmin_optimal_assignment(const std::vector<std::vector<Rational>>& W, bool allow_unmatched) {
    const int rows = static_cast<int>(W.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(W.front().size());
    const Rational target = max_weight_assignment(W, allow_unmatched).total_value;

    std::vector<char> taken(static_cast<size_t>(cols), 0);
    std::vector<int> mu(static_cast<size_t>(rows), -1);
    Rational acc(0);

    auto completion_value = [&](int next_row) {
        std::vector<std::vector<Rational>> sub;
        sub.reserve(static_cast<size_t>(rows - next_row));
        for (int i = next_row; i < rows; ++i) {
            std::vector<Rational> r;
            for (int j = 0; j < cols; ++j)
                if (!taken[static_cast<size_t>(j)]) r.push_back(W[static_cast<size_t>(i)][static_cast<size_t>(j)]);
            sub.push_back(std::move(r));
        }
        if (sub.empty() || sub.front().empty()) return Rational(0);
        return max_weight_assignment(sub, true).total_value;
    };

    for (int i = 0; i < rows; ++i) {
        bool fixed = false;
        for (int j = 0; j < cols && !fixed; ++j) {
            if (taken[static_cast<size_t>(j)]) continue;
            taken[static_cast<size_t>(j)] = 1;
            const Rational with = acc + W[static_cast<size_t>(i)][static_cast<size_t>(j)] + completion_value(i + 1);
            if (with == target) {
                mu[static_cast<size_t>(i)] = j;
                acc += W[static_cast<size_t>(i)][static_cast<size_t>(j)];
                fixed = true;
            } else {
                taken[static_cast<size_t>(j)] = 0;
            }
        }
        if (!fixed) {
            // leaving row i unmatched must complete to the optimum
            if (!allow_unmatched || acc + completion_value(i + 1) != target)
                throw AlgorithmInvariantViolation("no completion reaches the optimal assignment value");
        }
    }

    AssignmentResult res;
    res.matching.good_of_buyer = mu;
    res.matching.buyer_of_good.assign(static_cast<size_t>(cols), -1);
    for (int i = 0; i < rows; ++i)
        if (mu[static_cast<size_t>(i)] >= 0) {
            res.matching.buyer_of_good[static_cast<size_t>(mu[static_cast<size_t>(i)])] = i;
            res.total_value += W[static_cast<size_t>(i)][static_cast<size_t>(mu[static_cast<size_t>(i)])];
        }
    return res;
}

} // namespace clearing
