#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "clearing/auction.hpp"
#include "clearing/errors.hpp"
#include "clearing/market.hpp"
#include "clearing/rational.hpp"

namespace clearing {

// Counter-based deterministic generator (splitmix64). Every Monte-Carlo
// sample gets its own state derived from (seed, sample index), so estimates
// are bit-reproducible no matter how samples are scheduled.
struct SampleRng {
    std::uint64_t state = 0;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform draw from {0, 1/2^32, ..., (2^32-1)/2^32}, exact
    Rational unit() { return Rational(static_cast<long long>(next() >> 32), 1ll << 32); }
};

inline SampleRng rng_for_sample(std::uint64_t seed, std::uint64_t index) {
    SampleRng r{seed + 0x9E3779B97F4A7C15ull * (index + 1)};
    r.next(); // decorrelate nearby indices
    return r;
}

// One draw of the four advertiser values. Densities: w is 2/3 on [0,1) and
// 1/3 on (2,3]; x is 2/3 on [1.5,2.5] and 1/3 on (2.5,3.5]; y uniform on
// [3.5,4]; z uniform on [3,4].
struct Table1Draw {
    Rational w, x, y, z;
};

// Inverse-CDF sampling at 2^32 resolution; consumes four generator values
// in the order w, x, y, z.
inline Table1Draw sample_table1(SampleRng& rng) {
    const Rational two_thirds(2, 3);
    Table1Draw d;
    const Rational uw = rng.unit();
    d.w = uw < two_thirds ? uw * Rational(3, 2) : uw * Rational(3);
    const Rational ux = rng.unit();
    d.x = ux < two_thirds ? Rational(3, 2) + ux * Rational(3, 2) : Rational(1, 2) + ux * Rational(3);
    d.y = Rational(7, 2) + rng.unit() / Rational(2);
    d.z = Rational(3) + rng.unit();
    return d;
}

// Bid grid: rows Alice, Bob, Carol; columns listing, sidebar, pop-ups.
struct BidProfile {
    std::vector<std::vector<Rational>> bids;
    Rational epsilon;
};

// The studied strategy profile: Alice bids max{1-eps, w/2} on the listing,
// Bob max{1, (2x-1)/4}, Carol bids eps on the sidebar regardless of value;
// all other bids are zero.
inline BidProfile equilibrium_bids(const Table1Draw& d, const Rational& epsilon) {
    if (epsilon.sign() <= 0) throw InvalidEpsilon("bid perturbation must be positive");
    BidProfile p;
    p.epsilon = epsilon;
    p.bids = {
        {std::max(Rational(1) - epsilon, d.w / Rational(2)), Rational(0), Rational(0)},
        {std::max(Rational(1), (d.x * Rational(2) - Rational(1)) / Rational(4)), Rational(0), Rational(0)},
        {Rational(0), epsilon, Rational(0)},
    };
    return p;
}

struct McEstimate {
    Rational mean;          // exact sample mean of per-draw revenue
    double std_error = 0.0; // sqrt(sample variance / n), for reporting
    long long samples = 0;
};

namespace detail {

inline McEstimate finish_estimate(const Rational& sum, const Rational& sum_sq, long long n) {
    McEstimate e;
    e.samples = n;
    e.mean = sum / Rational(n);
    if (n > 1) {
        const Rational var = (sum_sq - sum * sum / Rational(n)) / Rational(n - 1);
        e.std_error = std::sqrt(var.approx() / static_cast<double>(n));
    }
    return e;
}

inline ValuationMatrix advertiser_market(const std::vector<std::vector<Rational>>& rows) {
    return balance_market(rows, {"Alice", "Bob", "Carol"}, {"listing", "sidebar", "popups"});
}

} // namespace detail

// Expected seller revenue of the descending auction when the three bidders
// play the strategy profile above: run the auction on the BID matrix and sum
// the clearing prices. Converges to 31/27 + eps.
inline McEstimate mc_auction_revenue(long long n, const Rational& epsilon, std::uint64_t seed) {
    if (n < 1) throw InvalidSampleCount("need at least one sample");
    Rational sum(0), sum_sq(0);
    for (long long s = 0; s < n; ++s) {
        SampleRng rng = rng_for_sample(seed, static_cast<std::uint64_t>(s));
        const Table1Draw draw = sample_table1(rng);
        const ValuationMatrix V = detail::advertiser_market(equilibrium_bids(draw, epsilon).bids);
        const AuctionOutcome out = descending_auction(V);
        Rational revenue(0);
        for (const Rational& p : out.final_prices) revenue += p;
        sum += revenue;
        sum_sq += revenue * revenue;
    }
    return detail::finish_estimate(sum, sum_sq, n);
}

// Expected pivot-payment revenue on the TRUE advertiser values:
// Alice (w,0,0), Bob (x,0,1/2), Carol (y,z,2). Converges to 845/864:
// whenever w < 1 Bob wins the listing and his pivot payment is
// max(w, y-z), because removing Bob lets Carol switch from the sidebar
// to the listing when y > w + z. Integrating the four value densities
// gives 1/3 + 5/96 from that strip plus 1/3 + 7/54 + 7/54 from the
// w > 2 strips, i.e. 845/864 ~= 0.97801.
inline McEstimate mc_vcg_revenue(long long n, std::uint64_t seed) {
    if (n < 1) throw InvalidSampleCount("need at least one sample");
    Rational sum(0), sum_sq(0);
    for (long long s = 0; s < n; ++s) {
        SampleRng rng = rng_for_sample(seed, static_cast<std::uint64_t>(s));
        const Table1Draw d = sample_table1(rng);
        const ValuationMatrix V = detail::advertiser_market({
            {d.w, Rational(0), Rational(0)},
            {d.x, Rational(0), Rational(1, 2)},
            {d.y, d.z, Rational(2)},
        });
        Rational revenue(0);
        for (const Rational& p : vcg_payments(V)) revenue += p;
        sum += revenue;
        sum_sq += revenue * revenue;
    }
    return detail::finish_estimate(sum, sum_sq, n);
}

// A 4x4 market where buyer 1 profits from bidding above value: truthful bids
// clear at [1,2,3,4], the inflated bids at [0.1,2,3,4]; buyer 1 wins good 1
// either way (diagonal assignment) and pays 0.1 instead of 1.
struct OverbiddingFixture {
    ValuationMatrix truthful;
    ValuationMatrix overbid;
    PriceVector truthful_prices;
    PriceVector overbid_prices;
    Matching assignment; // diagonal in both markets
};

inline OverbiddingFixture overbidding_fixture() {
    const auto R = [](const char* s) { return Rational::parse(s); };
    OverbiddingFixture f;
    f.truthful = balance_market({
        {R("4"), R("5"), R("5"), R("6")},
        {R("2"), R("4"), R("5"), R("5")},
        {R("1"), R("2"), R("4"), R("5")},
        {R("0"), R("1"), R("2"), R("4")},
    });
    f.overbid = balance_market({
        {R("4"), R("5.9"), R("5.9"), R("6.9")},
        {R("2"), R("4"), R("5"), R("5")},
        {R("1"), R("2"), R("4"), R("5")},
        {R("0"), R("1"), R("2"), R("4")},
    });
    f.truthful_prices = {R("1"), R("2"), R("3"), R("4")};
    f.overbid_prices = {R("0.1"), R("2"), R("3"), R("4")};
    f.assignment = Matching{{0, 1, 2, 3}, {0, 1, 2, 3}};
    return f;
}

} // namespace clearing
