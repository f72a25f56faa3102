// Command-line front end: solve instances (max/min clearing prices), verify
// candidate prices, benchmark round counts, run the Monte-Carlo revenue lab,
// and generate random instances.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/parse error,
// 3 internal invariant violation.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clearing/clearing.hpp"
#include "clearing/io.hpp"

namespace {

using namespace clearing;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct GlobalOpts {
    std::string format = "text";
    std::uint64_t seed = 1;
    bool trace = false;
    bool verify = false;

    bool json() const { return format == "json"; }
};

std::string bracketed(const PriceVector& P) {
    std::string out = "[";
    for (size_t i = 0; i < P.size(); ++i) {
        if (i) out += ", ";
        out += P[i].str();
    }
    return out + "]";
}

std::string bracketed_decimal(const PriceVector& P) {
    std::string out = "[";
    for (size_t i = 0; i < P.size(); ++i) {
        if (i) out += ", ";
        out += P[i].decimal();
    }
    return out + "]";
}

std::string label_set(const std::vector<std::string>& labels, const std::vector<int>& idx) {
    std::string out = "{";
    for (size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ", ";
        out += labels[static_cast<size_t>(idx[i])];
    }
    return out + "}";
}

void print_trace_text(const ValuationMatrix& V, const AuctionOutcome& out) {
    for (const TraceRound& r : out.trace) {
        std::cout << "round " << r.round_index << ": cut " << label_set(V.good_labels, r.skewed_set) << " by "
                  << r.reduction.str() << " (graph skewness " << r.graph_skewness.str() << "), neighbors "
                  << label_set(V.buyer_labels, r.neighbor_set) << "\n";
        std::cout << "         prices -> " << bracketed(r.prices_after) << "\n";
    }
}

void print_matching_text(const ValuationMatrix& V, const Matching& M) {
    std::cout << "matching:";
    for (int i = 0; i < V.m; ++i) {
        const int g = M.good_of_buyer[static_cast<size_t>(i)];
        std::cout << " " << V.buyer_labels[static_cast<size_t>(i)] << "->"
                  << (g >= 0 ? V.good_labels[static_cast<size_t>(g)] : std::string("-"));
    }
    std::cout << "\n";
}

int cmd_solve(const GlobalOpts& g, const std::string& input, const std::string& mode) {
    const ValuationMatrix V = load_instance(input);
    Json doc;
    bool internal_ok = true;

    if (mode == "max" || mode == "both") {
        const AuctionOutcome out = descending_auction(V);
        const MaximalityResult max_check = verify_maximum(V, out.final_prices);
        std::optional<bool> oracle_match;
        if (g.verify) oracle_match = externality_prices(V) == out.final_prices;
        internal_ok = max_check.maximum && oracle_match.value_or(true);

        if (g.json()) {
            doc["max"] = outcome_to_json(V, out, g.trace, max_check.maximum, oracle_match);
        } else {
            std::cout << "market: " << V.m << " buyers x " << V.m << " goods\n";
            if (g.trace) print_trace_text(V, out);
            std::cout << "maximum clearing prices: " << bracketed(out.final_prices) << "\n";
            std::cout << "  decimal: " << bracketed_decimal(out.final_prices) << "\n";
            print_matching_text(V, out.matching);
            std::cout << "rounds: " << out.rounds << "\n";
            std::cout << "maximum verified: " << (max_check.maximum ? "yes" : "NO") << "\n";
            if (oracle_match) std::cout << "welfare-oracle prices match: " << (*oracle_match ? "yes" : "NO") << "\n";
        }
    }

    if (mode == "min" || mode == "both") {
        const PriceVector pmin = ascending_dgs(V);
        const std::vector<Rational> pay = vcg_payments(V);
        Json jmin;
        jmin["prices"] = detail::fraction_array(pmin);
        jmin["prices_decimal"] = detail::decimal_array(pmin);
        Json jpay = Json::object();
        for (int i = 0; i < V.m; ++i) jpay[V.buyer_labels[static_cast<size_t>(i)]] = pay[static_cast<size_t>(i)].str();
        jmin["pivot_payments"] = std::move(jpay);
        if (g.json()) {
            doc["min"] = std::move(jmin);
        } else {
            std::cout << "minimum clearing prices: " << bracketed(pmin) << "\n";
            std::cout << "  decimal: " << bracketed_decimal(pmin) << "\n";
            std::cout << "pivot payments:";
            for (int i = 0; i < V.m; ++i)
                std::cout << " " << V.buyer_labels[static_cast<size_t>(i)] << "=" << pay[static_cast<size_t>(i)].str();
            std::cout << "\n";
        }
    }

    if (g.json()) std::cout << doc.dump(2) << "\n";
    if (!internal_ok) {
        std::cerr << "error: solver output failed its own verification\n";
        return kExitInternal;
    }
    return kExitOk;
}

int cmd_verify(const GlobalOpts& g, const std::string& instance_path, const std::string& prices_path) {
    const ValuationMatrix V = load_instance(instance_path);
    const PriceVector P = load_prices(prices_path);
    if (static_cast<int>(P.size()) != V.m)
        throw ParseError("price vector has " + std::to_string(P.size()) + " entries, market has " +
                         std::to_string(V.m) + " goods");

    Json doc;
    doc["prices"] = detail::fraction_array(P);
    if (!is_market_clearing(V, P)) {
        doc["clearing"] = false;
        doc["maximum"] = false;
        if (g.json())
            std::cout << doc.dump(2) << "\n";
        else
            std::cout << "not market clearing: the induced preference graph has no perfect matching\n";
        return kExitVerifyFail;
    }
    const MaximalityResult res = verify_maximum(V, P);
    doc["clearing"] = true;
    doc["maximum"] = res.maximum;
    if (!res.maximum) {
        doc["witness_buyers"] = detail::labels_of(V.buyer_labels, res.witness_buyers);
        if (g.json())
            std::cout << doc.dump(2) << "\n";
        else
            std::cout << "market clearing but not maximum: buyer set " << label_set(V.buyer_labels, res.witness_buyers)
                      << " has no more neighbors (dummy good included) than members,\n"
                      << "so their goods' prices can rise together\n";
        return kExitVerifyFail;
    }
    if (g.json())
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << "prices are the maximum market-clearing vector\n";
    return kExitOk;
}

ValuationMatrix random_instance(SampleRng& rng, int m, long long lo, long long hi) {
    std::vector<std::vector<Rational>> grid(static_cast<size_t>(m), std::vector<Rational>(static_cast<size_t>(m)));
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
    for (auto& row : grid)
        for (auto& cell : row) cell = Rational(lo + static_cast<long long>(rng.next() % span));
    return balance_market(grid);
}

int cmd_bench(const GlobalOpts& g, const std::vector<int>& sizes, int per_size) {
    Json rows = Json::array();
    if (!g.json())
        std::cout << "   m  runs  mean_rounds  max_rounds  bound  mean_ms\n";
    std::uint64_t counter = 0;
    for (int m : sizes) {
        long long total_rounds = 0, max_rounds = 0;
        double total_ms = 0.0;
        for (int k = 0; k < per_size; ++k) {
            SampleRng rng = rng_for_sample(g.seed, counter++);
            const ValuationMatrix V = random_instance(rng, m, 0, 100);
            const auto t0 = std::chrono::steady_clock::now();
            const AuctionOutcome out = descending_auction(V);
            const auto t1 = std::chrono::steady_clock::now();
            total_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
            total_rounds += out.rounds;
            max_rounds = std::max<long long>(max_rounds, out.rounds);
        }
        if (max_rounds > static_cast<long long>(m) * m)
            throw AlgorithmInvariantViolation("round bound exceeded in benchmark");
        const double mean_rounds = static_cast<double>(total_rounds) / per_size;
        const double mean_ms = total_ms / per_size;
        if (g.json()) {
            Json r;
            r["m"] = m;
            r["runs"] = per_size;
            r["mean_rounds"] = mean_rounds;
            r["max_rounds"] = max_rounds;
            r["round_bound"] = m * m;
            r["mean_ms"] = mean_ms;
            rows.push_back(std::move(r));
        } else {
            std::printf("%4d  %4d  %11.2f  %10lld  %5d  %7.3f\n", m, per_size, mean_rounds, max_rounds, m * m,
                        mean_ms);
        }
    }
    if (g.json()) std::cout << rows.dump(2) << "\n";
    return kExitOk;
}

int cmd_mc(const GlobalOpts& g, const std::string& kind, long long n, const std::string& epsilon_text) {
    const Rational epsilon = Rational::parse(epsilon_text);
    McEstimate est;
    Rational target;
    if (kind == "auction") {
        est = mc_auction_revenue(n, epsilon, g.seed);
        target = Rational(31, 27) + epsilon;
    } else {
        est = mc_vcg_revenue(n, g.seed);
        target = Rational(845, 864);
    }
    const Rational deviation = abs(est.mean - target);
    if (g.json()) {
        Json doc;
        doc["kind"] = kind;
        doc["samples"] = est.samples;
        doc["estimate"] = est.mean.str();
        doc["estimate_decimal"] = est.mean.decimal();
        doc["std_error"] = est.std_error;
        doc["target"] = target.str();
        doc["target_decimal"] = target.decimal();
        doc["deviation"] = deviation.decimal();
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << kind << " revenue over " << est.samples << " samples\n";
        std::cout << "estimate:  " << est.mean.decimal() << "  (exact " << est.mean.str() << ")\n";
        std::cout << "std error: " << est.std_error << "\n";
        std::cout << "target:    " << target.decimal() << "  (exact " << target.str() << ")\n";
        std::cout << "deviation: " << deviation.decimal() << "\n";
    }
    return kExitOk;
}

int cmd_gen(const GlobalOpts& g, int m, long long lo, long long hi, const std::string& out_path, bool sponsored) {
    if (lo < 0 || hi < lo) throw ParseError("need 0 <= min <= max");
    SampleRng rng = rng_for_sample(g.seed, 0);
    ValuationMatrix V;
    if (sponsored) {
        // rank-1 sponsored-search values: per-buyer weight times per-good rate
        std::vector<long long> w, c;
        auto draw_distinct = [&](std::vector<long long>& dst) {
            while (static_cast<int>(dst.size()) < m) {
                const long long cand = 1 + static_cast<long long>(rng.next() % 50);
                if (!std::count(dst.begin(), dst.end(), cand)) dst.push_back(cand);
            }
        };
        draw_distinct(w);
        draw_distinct(c);
        std::sort(c.begin(), c.end());
        std::vector<std::vector<Rational>> grid(static_cast<size_t>(m), std::vector<Rational>(static_cast<size_t>(m)));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                grid[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rational(w[static_cast<size_t>(i)] * c[static_cast<size_t>(j)]);
        V = balance_market(grid);
    } else {
        V = random_instance(rng, m, lo, hi);
    }
    if (out_path.empty())
        std::cout << instance_to_json(V).dump(2) << "\n";
    else
        save_instance(out_path, V);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"descending-price auction solver for unit-demand matching markets"};
    app.require_subcommand(1);
    app.fallthrough(); // let global flags appear after the subcommand name

    GlobalOpts g;
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_option("--seed", g.seed, "random seed for bench/mc/gen")->capture_default_str();
    app.add_flag("--trace", g.trace, "include the round-by-round price trace in solve output");
    app.add_flag("--verify", g.verify, "cross-check solve output against the welfare oracle");

    std::string solve_input, solve_mode = "max";
    CLI::App* solve = app.add_subcommand("solve", "compute market-clearing prices for an instance file");
    solve->add_option("input", solve_input, "instance file (JSON or CSV)")->required();
    solve->add_option("--mode", solve_mode, "max, min, or both")->check(CLI::IsMember({"max", "min", "both"}))->capture_default_str();

    std::string verify_instance, verify_prices;
    CLI::App* verify = app.add_subcommand("verify", "check that prices are market clearing and maximum");
    verify->add_option("instance", verify_instance, "instance file")->required();
    verify->add_option("prices", verify_prices, "price file (JSON array or plain text)")->required();

    std::vector<int> bench_sizes{2, 4, 8};
    int bench_per = 50;
    CLI::App* bench = app.add_subcommand("bench", "round counts and timings on random instances");
    bench->add_option("--sizes", bench_sizes, "market sizes")->delimiter(',');
    bench->add_option("--per-size", bench_per, "instances per size")->check(CLI::PositiveNumber)->capture_default_str();

    std::string mc_kind;
    long long mc_n = 100000;
    std::string mc_epsilon = "1/1000000";
    CLI::App* mc = app.add_subcommand("mc", "Monte-Carlo expected-revenue estimate");
    mc->add_option("kind", mc_kind, "auction or vcg")->required()->check(CLI::IsMember({"auction", "vcg"}));
    mc->add_option("--n", mc_n, "sample count")->check(CLI::PositiveNumber)->capture_default_str();
    mc->add_option("--epsilon", mc_epsilon, "bid perturbation (exact rational)")->capture_default_str();

    int gen_m = 4;
    long long gen_min = 0, gen_max = 20;
    std::string gen_out;
    bool gen_sponsored = false;
    CLI::App* gen = app.add_subcommand("gen", "generate a random instance file");
    gen->add_option("--m", gen_m, "market size")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--min", gen_min, "smallest value")->capture_default_str();
    gen->add_option("--max", gen_max, "largest value")->capture_default_str();
    gen->add_option("--out", gen_out, "output path (stdout if omitted)");
    gen->add_flag("--sponsored", gen_sponsored, "rank-1 values: buyer weight times good rate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(solve)) return cmd_solve(g, solve_input, solve_mode);
        if (app.got_subcommand(verify)) return cmd_verify(g, verify_instance, verify_prices);
        if (app.got_subcommand(bench)) return cmd_bench(g, bench_sizes, bench_per);
        if (app.got_subcommand(mc)) return cmd_mc(g, mc_kind, mc_n, mc_epsilon);
        if (app.got_subcommand(gen)) return cmd_gen(g, gen_m, gen_min, gen_max, gen_out, gen_sponsored);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidValuation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const AlgorithmInvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
