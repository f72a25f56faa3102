#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "clearing/clearing.hpp"
#include "support/testutil.hpp"

using namespace clearing;
using testutil::R;

namespace {

Rational revenue_of_draw(const Table1Draw& d, const Rational& epsilon) {
    const ValuationMatrix bids = detail::advertiser_market(equilibrium_bids(d, epsilon).bids);
    const AuctionOutcome out = descending_auction(bids);
    Rational total(0);
    for (const Rational& p : out.final_prices) total += p;
    return total;
}

ValuationMatrix true_values(const Table1Draw& d) {
    return detail::advertiser_market({
        {d.w, Rational(0), Rational(0)},
        {d.x, Rational(0), Rational(1, 2)},
        {d.y, d.z, Rational(2)},
    });
}

} // namespace

TEST_CASE("per-sample generators are stable and decorrelated") {
    SampleRng a = rng_for_sample(7, 0);
    SampleRng b = rng_for_sample(7, 0);
    REQUIRE(a.next() == b.next()); // same seed and index replay identically
    REQUIRE(rng_for_sample(7, 1).next() != rng_for_sample(7, 2).next());
    REQUIRE(rng_for_sample(7, 0).next() != rng_for_sample(8, 0).next());

    SampleRng u = rng_for_sample(123, 9);
    const Rational x = u.unit();
    REQUIRE(x >= Rational(0));
    REQUIRE(x < Rational(1));
    REQUIRE(x.denominator() <= mpz_class(1) << 32); // dyadic at 2^32 resolution
}

TEST_CASE("value sampling follows the inverse transforms") {
    const Rational two_thirds(2, 3);
    for (std::uint64_t idx = 0; idx < 200; ++idx) {
        SampleRng gen = rng_for_sample(99, idx);
        SampleRng replay = rng_for_sample(99, idx);
        const Table1Draw d = sample_table1(gen);
        const Rational uw = replay.unit(), ux = replay.unit(), uy = replay.unit(), uz = replay.unit();
        REQUIRE(d.w == (uw < two_thirds ? uw * Rational(3, 2) : uw * Rational(3)));
        REQUIRE(d.x == (ux < two_thirds ? Rational(3, 2) + ux * Rational(3, 2) : Rational(1, 2) + ux * Rational(3)));
        REQUIRE(d.y == Rational(7, 2) + uy / Rational(2));
        REQUIRE(d.z == Rational(3) + uz);
    }
}

TEST_CASE("sampled values land in the documented ranges with the right mix") {
    const int n = 8000;
    double sw = 0, sx = 0, sy = 0, sz = 0;
    int low_branch = 0;
    for (int s = 0; s < n; ++s) {
        SampleRng gen = rng_for_sample(2025, static_cast<std::uint64_t>(s));
        const Table1Draw d = sample_table1(gen);
        const bool low = d.w < Rational(1);
        if (low) ++low_branch;
        REQUIRE((low || (d.w >= Rational(2) && d.w < Rational(3))));
        REQUIRE(d.w >= Rational(0));
        REQUIRE((d.x >= Rational(3, 2) && d.x < Rational(7, 2)));
        REQUIRE((d.y >= Rational(7, 2) && d.y < Rational(4)));
        REQUIRE((d.z >= Rational(3) && d.z < Rational(4)));
        sw += d.w.approx();
        sx += d.x.approx();
        sy += d.y.approx();
        sz += d.z.approx();
    }
    REQUIRE_THAT(sw / n, Catch::Matchers::WithinAbs(7.0 / 6.0, 0.06)); // 2/3*1/2 + 1/3*5/2
    REQUIRE_THAT(sx / n, Catch::Matchers::WithinAbs(7.0 / 3.0, 0.06)); // 2/3*2 + 1/3*3
    REQUIRE_THAT(sy / n, Catch::Matchers::WithinAbs(3.75, 0.02));
    REQUIRE_THAT(sz / n, Catch::Matchers::WithinAbs(3.5, 0.02));
    REQUIRE_THAT(static_cast<double>(low_branch) / n, Catch::Matchers::WithinAbs(2.0 / 3.0, 0.03));
}

TEST_CASE("bid profile under the studied strategies") {
    const Rational eps(1, 1000);
    const Table1Draw d{R("5/2"), Rational(3), R("15/4"), R("7/2")};
    const BidProfile p = equilibrium_bids(d, eps);
    REQUIRE(p.bids[0][0] == R("5/4")); // w/2 beats 1 - eps once w > 2
    REQUIRE(p.bids[1][0] == R("5/4")); // (2x-1)/4 beats 1 once x > 5/2
    REQUIRE(p.bids[2][1] == eps);
    REQUIRE(p.bids[0][1] == Rational(0));
    REQUIRE(p.bids[2][0] == Rational(0));

    const Table1Draw small{R("1/2"), Rational(2), R("15/4"), R("7/2")};
    const BidProfile q = equilibrium_bids(small, eps);
    REQUIRE(q.bids[0][0] == Rational(1) - eps); // hides her low value
    REQUIRE(q.bids[1][0] == Rational(1));

    REQUIRE_THROWS_AS(equilibrium_bids(small, Rational(0)), InvalidEpsilon);
    REQUIRE_THROWS_AS(equilibrium_bids(small, Rational(-1, 10)), InvalidEpsilon);
}

TEST_CASE("one forced draw prices out exactly under both mechanisms") {
    const Rational eps(1, 1000);
    const Table1Draw d{R("1/2"), Rational(2), R("15/4"), R("7/2")};

    // bid auction: Bob outbids Alice at 1, Carol's sidebar bid sets its price
    REQUIRE(revenue_of_draw(d, eps) == Rational(1) + eps);

    // pivot payments on the true values: only Bob pays, exactly max(w, y-z)
    REQUIRE(vcg_payments(true_values(d)) == std::vector<Rational>{Rational(0), R("1/2"), Rational(0)});
}

TEST_CASE("removing the listing winner can reroute the runner-up") {
    // y - z = 9/10 exceeds w = 1/10: without Bob, Carol would leave the
    // sidebar for the listing, so Bob's payment is 9/10, not w
    const Table1Draw d{R("1/10"), Rational(2), R("39/10"), Rational(3)};
    REQUIRE(vcg_payments(true_values(d)) == std::vector<Rational>{Rational(0), R("9/10"), Rational(0)});
}

TEST_CASE("every sampled bid auction is first-price for the listing") {
    const Rational eps(1, 500);
    for (std::uint64_t idx = 0; idx < 60; ++idx) {
        SampleRng gen = rng_for_sample(31, idx);
        const Table1Draw d = sample_table1(gen);
        const BidProfile p = equilibrium_bids(d, eps);
        const ValuationMatrix bids = detail::advertiser_market(p.bids);
        const AuctionOutcome out = descending_auction(bids);
        REQUIRE(out.final_prices[0] == std::max(p.bids[0][0], p.bids[1][0]));
        REQUIRE(out.final_prices[1] == eps);
        REQUIRE(out.final_prices[2] == Rational(0));
        REQUIRE(verify_maximum(bids, out.final_prices).maximum);
    }
}

TEST_CASE("estimators reduce to the plain sample mean") {
    const Rational eps(1, 1000);
    const McEstimate one = mc_auction_revenue(1, eps, 4242);
    SampleRng gen = rng_for_sample(4242, 0);
    REQUIRE(one.mean == revenue_of_draw(sample_table1(gen), eps));
    REQUIRE(one.samples == 1);
    REQUIRE(one.std_error == 0.0);

    const McEstimate vone = mc_vcg_revenue(1, 4242);
    SampleRng vgen = rng_for_sample(4242, 0);
    Rational expect(0);
    for (const Rational& p : vcg_payments(true_values(sample_table1(vgen)))) expect += p;
    REQUIRE(vone.mean == expect);
}

TEST_CASE("estimators are bit-reproducible for a fixed seed") {
    const Rational eps(1, 1000);
    const McEstimate a1 = mc_auction_revenue(300, eps, 9);
    const McEstimate a2 = mc_auction_revenue(300, eps, 9);
    REQUIRE(a1.mean == a2.mean);
    REQUIRE(a1.std_error == a2.std_error);
    const McEstimate v1 = mc_vcg_revenue(300, 9);
    const McEstimate v2 = mc_vcg_revenue(300, 9);
    REQUIRE(v1.mean == v2.mean);
    REQUIRE(a1.mean != v1.mean);
}

TEST_CASE("the bid perturbation shifts revenue by exactly its increment") {
    const Rational e1(1, 1000), e2(1, 200);
    const McEstimate a = mc_auction_revenue(250, e1, 77);
    const McEstimate b = mc_auction_revenue(250, e2, 77);
    REQUIRE(b.mean - a.mean == e2 - e1); // only the sidebar price moves
}

TEST_CASE("standard error shrinks like the square root of the sample count") {
    const Rational eps(1, 1000);
    const double wide = mc_auction_revenue(400, eps, 11).std_error;
    const double tight = mc_auction_revenue(1600, eps, 11).std_error;
    REQUIRE(wide > 0.0);
    REQUIRE(tight > 0.0);
    const double ratio = wide / tight;
    REQUIRE(ratio > 1.5);
    REQUIRE(ratio < 2.5);
}

TEST_CASE("estimates land near their long-run limits") {
    const Rational eps(1, 1000000);
    const McEstimate auction = mc_auction_revenue(20000, eps, 42);
    const McEstimate pivots = mc_vcg_revenue(20000, 42);
    const double auction_limit = 31.0 / 27.0 + eps.approx();
    const double pivot_limit = 845.0 / 864.0;
    REQUIRE(std::abs(auction.mean.approx() - auction_limit) < 0.02);
    REQUIRE(std::abs(pivots.mean.approx() - pivot_limit) < 0.02);
    REQUIRE(auction.mean > pivots.mean); // the headline revenue comparison
    REQUIRE(auction.samples == 20000);
    REQUIRE(pivots.samples == 20000);
}

TEST_CASE("estimators reject empty sample counts") {
    REQUIRE_THROWS_AS(mc_auction_revenue(0, Rational(1, 1000), 1), InvalidSampleCount);
    REQUIRE_THROWS_AS(mc_auction_revenue(-5, Rational(1, 1000), 1), InvalidSampleCount);
    REQUIRE_THROWS_AS(mc_vcg_revenue(0, 1), InvalidSampleCount);
}

TEST_CASE("the overbidding fixture replays the bid-shading story") {
    const OverbiddingFixture fx = overbidding_fixture();
    const AuctionOutcome truth = descending_auction(fx.truthful);
    const AuctionOutcome shaded = descending_auction(fx.overbid);

    REQUIRE(truth.final_prices == fx.truthful_prices);
    REQUIRE(shaded.final_prices == fx.overbid_prices);
    REQUIRE(truth.matching.good_of_buyer == fx.assignment.good_of_buyer);
    REQUIRE(shaded.matching.good_of_buyer == fx.assignment.good_of_buyer);
    REQUIRE(verify_maximum(fx.truthful, truth.final_prices).maximum);
    REQUIRE(verify_maximum(fx.overbid, shaded.final_prices).maximum);

    // same good either way, but raising her losing bids cut her price from
    // 1 to 1/10: payoff on her true values climbs from 3 to 39/10
    const int won = fx.assignment.good_of_buyer[0];
    const Rational before = fx.truthful.values[0][static_cast<std::size_t>(won)] - truth.final_prices[static_cast<std::size_t>(won)];
    const Rational after = fx.truthful.values[0][static_cast<std::size_t>(won)] - shaded.final_prices[static_cast<std::size_t>(won)];
    REQUIRE(before == Rational(3));
    REQUIRE(after == R("39/10"));
}
