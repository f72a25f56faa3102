#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "clearing/clearing.hpp"
#include "support/testutil.hpp"

using namespace clearing;
using testutil::grid;
using testutil::R;

namespace {

bool has_edge(const PreferenceGraph& G, int buyer, int good) {
    const auto& bg = G.buyer_to_goods[static_cast<std::size_t>(buyer)];
    return std::find(bg.begin(), bg.end(), good) != bg.end();
}

} // namespace

TEST_CASE("balance keeps square grids and default-labels them") {
    const ValuationMatrix V = balance_market(grid({{3, 1}, {2, 2}}));
    REQUIRE(V.m == 2);
    REQUIRE(V.values[0][0] == Rational(3));
    REQUIRE(V.values[1][1] == Rational(2));
    REQUIRE(V.buyer_labels == std::vector<std::string>{"b1", "b2"});
    REQUIRE(V.good_labels == std::vector<std::string>{"g1", "g2"});
}

TEST_CASE("balance pads short sides with zero-value dummies") {
    const ValuationMatrix wide = balance_market(grid({{1, 2, 3}, {4, 5, 6}}));
    REQUIRE(wide.m == 3);
    for (int j = 0; j < 3; ++j) REQUIRE(wide.values[2][static_cast<std::size_t>(j)] == Rational(0));
    REQUIRE(wide.buyer_labels[2] == "dummy-buyer-1");
    REQUIRE(wide.good_labels == std::vector<std::string>{"g1", "g2", "g3"});

    const ValuationMatrix tall = balance_market(grid({{1, 2}, {3, 4}, {5, 6}}));
    REQUIRE(tall.m == 3);
    for (int i = 0; i < 3; ++i) REQUIRE(tall.values[static_cast<std::size_t>(i)][2] == Rational(0));
    REQUIRE(tall.good_labels[2] == "dummy-good-1");

    const ValuationMatrix twice = balance_market(grid({{1, 2, 3}}));
    REQUIRE(twice.m == 3);
    REQUIRE(twice.buyer_labels[1] == "dummy-buyer-1");
    REQUIRE(twice.buyer_labels[2] == "dummy-buyer-2");
}

TEST_CASE("balance accepts custom labels") {
    const ValuationMatrix V = balance_market(grid({{4, 1}, {2, 3}}), {"ann", "bob"}, {"left", "right"});
    REQUIRE(V.buyer_labels == std::vector<std::string>{"ann", "bob"});
    REQUIRE(V.good_labels == std::vector<std::string>{"left", "right"});
}

TEST_CASE("balance validates its input") {
    REQUIRE_THROWS_AS(balance_market({}), EmptyMarket);
    REQUIRE_THROWS_AS(balance_market(testutil::Grid{{}}), EmptyMarket);
    REQUIRE_THROWS_AS(balance_market(grid({{1, -1}})), InvalidValuation);
    REQUIRE_THROWS_AS(balance_market(testutil::Grid{{Rational(1), Rational(2)}, {Rational(3)}}), DimensionError);
    REQUIRE_THROWS_AS(balance_market(grid({{1, 2}}), {"a", "b"}), DimensionError);
    REQUIRE_THROWS_AS(balance_market(grid({{1, 2}}), {}, {"only-one"}), DimensionError);
}

TEST_CASE("matrix access is bounds-checked") {
    const ValuationMatrix V = testutil::v1();
    REQUIRE(V.at(0, 3) == Rational(6));
    REQUIRE_THROWS_AS(V.at(4, 0), IndexError);
    REQUIRE_THROWS_AS(V.at(0, -1), IndexError);
}

TEST_CASE("initial prices are the column maxima") {
    REQUIRE(initial_prices(testutil::v1()) == PriceVector{Rational(4), Rational(5), Rational(5), Rational(6)});
    REQUIRE(initial_prices(testutil::vc()) == PriceVector{Rational(5), Rational(4), Rational(4), Rational(5)});
    REQUIRE(initial_prices(testutil::v2())[1] == R("5.9"));
}

TEST_CASE("buyer surplus is the best payoff floored at opting out") {
    const ValuationMatrix V = testutil::v1();
    const PriceVector P{Rational(1), Rational(2), Rational(3), Rational(4)};
    REQUIRE(buyer_surplus(V, P, 0) == Rational(3));
    REQUIRE(buyer_surplus(V, P, 3) == Rational(0));

    const ValuationMatrix C = testutil::vc();
    REQUIRE(buyer_surplus(C, initial_prices(C), 1) == Rational(0)); // all payoffs negative
    REQUIRE_THROWS_AS(buyer_surplus(V, P, 4), IndexError);
    REQUIRE_THROWS_AS(buyer_surplus(V, P, -1), IndexError);
    REQUIRE_THROWS_AS(buyer_surplus(V, PriceVector{Rational(1)}, 0), DimensionError);
}

TEST_CASE("preference graph at the one-round market's initial prices") {
    const ValuationMatrix C = testutil::vc();
    const PreferenceGraph G = preference_graph(C, initial_prices(C));
    // only buyer 1 (on goods 1,2) and buyer 4 (on goods 3,4) get payoff 0;
    // buyers 2 and 3 are priced out everywhere and keep no edges at all
    REQUIRE(G.buyer_to_goods == std::vector<std::vector<int>>{{0, 1}, {}, {}, {2, 3}});
    REQUIRE(G.good_to_buyers == std::vector<std::vector<int>>{{0}, {0}, {3}, {3}});
    REQUIRE(G.surpluses == std::vector<Rational>{Rational(0), Rational(0), Rational(0), Rational(0)});
}

TEST_CASE("preference graph after the one-round drop to [4,3,3,4]") {
    const ValuationMatrix C = testutil::vc();
    const PriceVector P{Rational(4), Rational(3), Rational(3), Rational(4)};
    const PreferenceGraph G = preference_graph(C, P);
    REQUIRE(G.buyer_to_goods == std::vector<std::vector<int>>{{0, 1}, {1}, {2}, {2, 3}});
    REQUIRE(G.good_to_buyers == std::vector<std::vector<int>>{{0}, {0, 1}, {2, 3}, {3}});
    REQUIRE(G.surpluses == std::vector<Rational>{Rational(1), Rational(0), Rational(0), Rational(1)});
    REQUIRE_THROWS_AS(preference_graph(C, PriceVector{Rational(1)}), DimensionError);
}

TEST_CASE("free goods of equal value attract every buyer") {
    const ValuationMatrix V = balance_market(grid({{2, 2}, {2, 2}}));
    const PreferenceGraph G = preference_graph(V, PriceVector{Rational(0), Rational(0)});
    REQUIRE(G.good_to_buyers == std::vector<std::vector<int>>{{0, 1}, {0, 1}});
}

TEST_CASE("dummy good connects exactly the zero-surplus buyers") {
    const ValuationMatrix V = testutil::v1();
    const PriceVector P{Rational(1), Rational(2), Rational(3), Rational(4)};
    const DummyExtendedGraph D = add_dummy_good(preference_graph(V, P));
    REQUIRE(D.dummy_adjacent_buyers == std::vector<int>{3});
    REQUIRE(D.base.surpluses == std::vector<Rational>{Rational(3), Rational(2), Rational(1), Rational(0)});

    const ValuationMatrix C = testutil::vc();
    const DummyExtendedGraph D0 = add_dummy_good(preference_graph(C, initial_prices(C)));
    REQUIRE(D0.dummy_adjacent_buyers == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("preference graph properties hold on random markets") {
    auto rng = testutil::rng(2024);
    for (int t = 0; t < 120; ++t) {
        const int m = 2 + static_cast<int>(rng.next() % 5);
        const ValuationMatrix V = testutil::random_market(rng, m, 0, 12);
        PriceVector P(static_cast<std::size_t>(m));
        for (auto& p : P) p = Rational(testutil::draw_int(rng, 0, 14));
        const PreferenceGraph G = preference_graph(V, P);

        for (int i = 0; i < m; ++i) {
            REQUIRE(G.surpluses[static_cast<std::size_t>(i)] == buyer_surplus(V, P, i));
            REQUIRE(G.surpluses[static_cast<std::size_t>(i)].sign() >= 0);
            for (int j = 0; j < m; ++j) {
                const Rational payoff = V.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - P[static_cast<std::size_t>(j)];
                const bool edge = has_edge(G, i, j);
                REQUIRE(edge == (payoff == G.surpluses[static_cast<std::size_t>(i)]));
                const auto& gb = G.good_to_buyers[static_cast<std::size_t>(j)];
                REQUIRE(edge == (std::find(gb.begin(), gb.end(), i) != gb.end()));
                if (!edge) REQUIRE(payoff < G.surpluses[static_cast<std::size_t>(i)]);
            }
        }

        // at the column maxima every good still has a zero-payoff demander
        const PreferenceGraph G0 = preference_graph(V, initial_prices(V));
        for (int j = 0; j < m; ++j) REQUIRE_FALSE(G0.good_to_buyers[static_cast<std::size_t>(j)].empty());

        // scaling all values and prices by the same positive factor keeps the graph
        testutil::Grid scaled = V.values;
        PriceVector SP = P;
        const Rational k(3, 7);
        for (auto& row : scaled)
            for (auto& cell : row) cell *= k;
        for (auto& p : SP) p *= k;
        const PreferenceGraph GS = preference_graph(balance_market(scaled), SP);
        REQUIRE(GS.buyer_to_goods == G.buyer_to_goods);
        REQUIRE(GS.good_to_buyers == G.good_to_buyers);
    }
}
