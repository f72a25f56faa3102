#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "clearing/errors.hpp"
#include "clearing/matching.hpp"
#include "clearing/rational.hpp"

namespace clearing {

// Three-coloring of a graph with no perfect matching, relative to a maximum
// matching (whose edges are the "red" edges):
//   blue goods  = unmatched goods,
//   green goods = matched goods on alternating paths from blue goods,
//   red goods   = everything else,
//   green buyers = buyers on those alternating paths,
//   red buyers   = matched partners of red goods,
//   blue buyers  = the rest.
enum class Color : std::uint8_t { Red, Green, Blue };

struct Coloring {
    std::vector<Color> good_color;
    std::vector<Color> buyer_color;
    Matching matching; // the red (matching) edges; all other edges are blue
};

struct SkewedSetResult {
    std::vector<int> goods;     // the set S, sorted
    std::vector<int> neighbors; // N(S), sorted
    Rational skewness;          // |S| - |N(S)| + 1/|S|
    std::optional<Coloring> coloring;
};

// Skewness ranks good sets by deficiency first, then by smaller size: the
// 1/|S| term breaks ties among equal-deficiency sets toward fewer goods.
inline Rational skewness(const BipartiteGraph& g, const std::vector<int>& S) {
    if (S.empty()) throw EmptySet("skewness of the empty set is undefined");
    std::vector<char> in_s(static_cast<size_t>(g.m), 0), nb(static_cast<size_t>(g.m), 0);
    for (int j : S) {
        if (j < 0 || j >= g.m) throw IndexError("good index out of range");
        in_s[static_cast<size_t>(j)] = 1;
    }
    long long s = 0, n = 0;
    for (int j = 0; j < g.m; ++j) {
        if (!in_s[static_cast<size_t>(j)]) continue;
        ++s;
        for (int b : g.adj[static_cast<size_t>(j)])
            if (!nb[static_cast<size_t>(b)]) {
                nb[static_cast<size_t>(b)] = 1;
                ++n;
            }
    }
    return Rational(s - n) + Rational(1, s);
}

// Exhaustive argmax of the skewness over all non-empty good subsets.
// Test oracle; the argmax is unique whenever the graph has no perfect
// matching, so a tie is reported as a bug rather than broken arbitrarily.
inline SkewedSetResult most_skewed_bruteforce(const BipartiteGraph& g) {
    if (g.m > 16) throw DimensionError("brute-force skew search is capped at m = 16");
    if (has_perfect_matching(g))
        throw NoConstrictedSet("graph has a perfect matching; no constricted set exists");

    std::vector<std::uint32_t> buyer_mask(static_cast<size_t>(g.m), 0);
    for (int j = 0; j < g.m; ++j)
        for (int b : g.adj[static_cast<size_t>(j)]) buyer_mask[static_cast<size_t>(j)] |= std::uint32_t{1} << b;

    std::uint32_t best_mask = 0;
    Rational best;
    bool have_best = false, tied = false;
    const std::uint32_t all = (std::uint32_t{1} << g.m) - 1;
    for (std::uint32_t mask = 1; mask <= all; ++mask) {
        std::uint32_t nb = 0;
        for (int j = 0; j < g.m; ++j)
            if (mask & (std::uint32_t{1} << j)) nb |= buyer_mask[static_cast<size_t>(j)];
        const long long s = std::popcount(mask), n = std::popcount(nb);
        const Rational f = Rational(s - n) + Rational(1, s);
        if (!have_best || f > best) {
            best = f;
            best_mask = mask;
            have_best = true;
            tied = false;
        } else if (f == best) {
            tied = true;
        }
    }
    if (tied) throw UniquenessViolation("two distinct sets attain the maximal skewness");

    SkewedSetResult r;
    for (int j = 0; j < g.m; ++j)
        if (best_mask & (std::uint32_t{1} << j)) r.goods.push_back(j);
    std::vector<char> nb(static_cast<size_t>(g.m), 0);
    for (int j : r.goods)
        for (int b : g.adj[static_cast<size_t>(j)]) nb[static_cast<size_t>(b)] = 1;
    for (int i = 0; i < g.m; ++i)
        if (nb[static_cast<size_t>(i)]) r.neighbors.push_back(i);
    r.skewness = best;
    return r;
}

// Coloring search for the maximally skewed set: the unmatched goods plus all
// matched goods on alternating paths from them. Any maximum matching yields
// the same set (the argmax is unique); this overload lets callers reuse one.
inline SkewedSetResult most_skewed_colored(const BipartiteGraph& g, const Matching& M) {
    const int m = g.m;
    if (M.size() == m) throw NoConstrictedSet("graph has a perfect matching; no constricted set exists");

    std::vector<int> blue_goods;
    for (int j = 0; j < m; ++j)
        if (M.buyer_of_good[static_cast<size_t>(j)] < 0) blue_goods.push_back(j);
    const ReachableSet reach = alternating_reachable(g, M, blue_goods);

    SkewedSetResult r;
    r.goods = reach.goods;
    r.neighbors = reach.buyers; // the closure covers every neighbor of the reached goods
    r.skewness = Rational(static_cast<long long>(r.goods.size()) - static_cast<long long>(r.neighbors.size())) +
                 Rational(1, static_cast<long long>(r.goods.size()));

    Coloring c;
    c.good_color.assign(static_cast<size_t>(m), Color::Red);
    c.buyer_color.assign(static_cast<size_t>(m), Color::Blue);
    for (int j : reach.goods)
        c.good_color[static_cast<size_t>(j)] =
            M.buyer_of_good[static_cast<size_t>(j)] < 0 ? Color::Blue : Color::Green;
    for (int i : reach.buyers) c.buyer_color[static_cast<size_t>(i)] = Color::Green;
    for (int j = 0; j < m; ++j)
        if (c.good_color[static_cast<size_t>(j)] == Color::Red) {
            const int b = M.buyer_of_good[static_cast<size_t>(j)];
            if (b >= 0) c.buyer_color[static_cast<size_t>(b)] = Color::Red;
        }
    c.matching = M;
    r.coloring = std::move(c);
    return r;
}

inline SkewedSetResult most_skewed_colored(const BipartiteGraph& g) {
    return most_skewed_colored(g, maximum_matching(g));
}

// Potential of the graph: skewness of its maximally skewed set.
inline Rational graph_skewness(const BipartiteGraph& g) {
    return most_skewed_colored(g).skewness;
}

} // namespace clearing
