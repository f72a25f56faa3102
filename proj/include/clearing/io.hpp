#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clearing/auction.hpp"
#include "clearing/errors.hpp"
#include "clearing/market.hpp"
#include "clearing/rational.hpp"

namespace clearing {

using Json = nlohmann::json;

// Numeric fields accept fraction/decimal strings ("5.9", "59/10") or exact
// JSON integers. Non-integer JSON numbers are rejected: they would smuggle
// binary floating point into an exact computation.
inline Rational rational_from_json(const Json& v) {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(static_cast<long long>(v.get<std::int64_t>()));
    if (v.is_number_unsigned()) return Rational(static_cast<long long>(v.get<std::uint64_t>()));
    if (v.is_number_float())
        throw ParseError("write non-integer numbers as strings (e.g. \"5.9\" or \"59/10\")");
    throw ParseError("expected a number or numeric string");
}

inline ValuationMatrix instance_from_json(const Json& doc) {
    if (!doc.is_object() || !doc.contains("values") || !doc["values"].is_array())
        throw ParseError("instance document needs a \"values\" grid");
    std::vector<std::vector<Rational>> grid;
    for (const Json& row : doc["values"]) {
        if (!row.is_array()) throw ParseError("\"values\" must be a grid");
        std::vector<Rational> r;
        for (const Json& cell : row) r.push_back(rational_from_json(cell));
        grid.push_back(std::move(r));
    }
    std::vector<std::string> buyers, goods;
    if (doc.contains("buyers"))
        for (const Json& b : doc["buyers"]) buyers.push_back(b.get<std::string>());
    if (doc.contains("goods"))
        for (const Json& g : doc["goods"]) goods.push_back(g.get<std::string>());
    try {
        return balance_market(grid, buyers, goods);
    } catch (const DimensionError& e) {
        throw ParseError(e.what());
    } catch (const EmptyMarket& e) {
        throw ParseError(e.what());
    }
}

// Headerless CSV: one row per buyer, comma-separated decimal/fraction cells.
inline ValuationMatrix instance_from_csv(std::istream& in) {
    std::vector<std::vector<Rational>> grid;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<Rational> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(Rational::parse(cell));
        grid.push_back(std::move(row));
    }
    try {
        return balance_market(grid);
    } catch (const DimensionError& e) {
        throw ParseError(e.what());
    } catch (const EmptyMarket& e) {
        throw ParseError(e.what());
    }
}

inline ValuationMatrix load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read instance file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError("instance file '" + path + "' is empty");
    if (text[first] == '{' || text[first] == '[') {
        Json doc;
        try {
            doc = Json::parse(text);
        } catch (const Json::exception& e) {
            throw ParseError("invalid JSON in '" + path + "': " + e.what());
        }
        return instance_from_json(doc);
    }
    std::stringstream csv(text);
    return instance_from_csv(csv);
}

inline Json instance_to_json(const ValuationMatrix& V) {
    Json doc;
    doc["buyers"] = V.buyer_labels;
    doc["goods"] = V.good_labels;
    Json grid = Json::array();
    for (const auto& row : V.values) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(v.str());
        grid.push_back(std::move(r));
    }
    doc["values"] = std::move(grid);
    return doc;
}

inline void save_instance(const std::string& path, const ValuationMatrix& V) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write instance file '" + path + "'");
    out << instance_to_json(V).dump(2) << "\n";
}

// Price files: a JSON array, a JSON object with a "prices" field, or a plain
// text line of comma/whitespace-separated values.
inline PriceVector prices_from_text(const std::string& text) {
    const size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError("empty price document");
    PriceVector P;
    if (text[first] == '{' || text[first] == '[') {
        Json doc;
        try {
            doc = Json::parse(text);
        } catch (const Json::exception& e) {
            throw ParseError(std::string("invalid JSON price document: ") + e.what());
        }
        const Json& arr = doc.is_object() ? doc.at("prices") : doc;
        if (!arr.is_array()) throw ParseError("price document must hold an array");
        for (const Json& v : arr) P.push_back(rational_from_json(v));
        return P;
    }
    std::string norm = text;
    for (char& c : norm)
        if (c == ',' || c == '\n' || c == '\t' || c == '\r') c = ' ';
    std::stringstream ss(norm);
    std::string tok;
    while (ss >> tok) P.push_back(Rational::parse(tok));
    if (P.empty()) throw ParseError("price document holds no values");
    return P;
}

inline PriceVector load_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read price file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return prices_from_text(buf.str());
}

namespace detail {

inline Json labels_of(const std::vector<std::string>& labels, const std::vector<int>& idx) {
    Json a = Json::array();
    for (int i : idx) a.push_back(labels[static_cast<size_t>(i)]);
    return a;
}

inline Json fraction_array(const PriceVector& P) {
    Json a = Json::array();
    for (const Rational& p : P) a.push_back(p.str());
    return a;
}

inline Json decimal_array(const PriceVector& P) {
    Json a = Json::array();
    for (const Rational& p : P) a.push_back(p.decimal());
    return a;
}

} // namespace detail

inline Json matching_to_json(const ValuationMatrix& V, const Matching& M) {
    Json m = Json::object();
    for (int i = 0; i < V.m; ++i) {
        const int g = M.good_of_buyer[static_cast<size_t>(i)];
        m[V.buyer_labels[static_cast<size_t>(i)]] =
            g >= 0 ? Json(V.good_labels[static_cast<size_t>(g)]) : Json(nullptr);
    }
    return m;
}

inline Json trace_to_json(const ValuationMatrix& V, const std::vector<TraceRound>& trace) {
    Json rounds = Json::array();
    for (const TraceRound& r : trace) {
        Json jr;
        jr["round"] = r.round_index;
        jr["skewed_set"] = detail::labels_of(V.good_labels, r.skewed_set);
        jr["neighbors"] = detail::labels_of(V.buyer_labels, r.neighbor_set);
        jr["reduction"] = r.reduction.str();
        jr["prices_after"] = detail::fraction_array(r.prices_after);
        jr["graph_skewness"] = r.graph_skewness.str();
        rounds.push_back(std::move(jr));
    }
    return rounds;
}

// Full machine-readable record of one descending-auction run.
inline Json outcome_to_json(const ValuationMatrix& V, const AuctionOutcome& out, bool include_trace,
                            std::optional<bool> verified_maximum = std::nullopt,
                            std::optional<bool> oracle_match = std::nullopt) {
    Json doc;
    doc["instance"] = instance_to_json(V);
    if (include_trace) doc["rounds"] = trace_to_json(V, out.trace);
    Json fin;
    fin["prices"] = detail::fraction_array(out.final_prices);
    fin["prices_decimal"] = detail::decimal_array(out.final_prices);
    fin["matching"] = matching_to_json(V, out.matching);
    fin["rounds"] = out.rounds;
    if (verified_maximum) fin["verified_maximum"] = *verified_maximum;
    if (oracle_match) fin["oracle_prices_match"] = *oracle_match;
    doc["final"] = std::move(fin);
    return doc;
}

} // namespace clearing
