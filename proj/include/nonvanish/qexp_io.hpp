#pragma once

// Interchange records for q-expansions:
//
//   {"label": "f24_4", "weight": 4, "level": 24, "normalized": true,
//    "coefficients": ["0", "1", "0", "3", ...]}
//
// Coefficients are decimal strings, index 0 first, so arbitrarily large
// values survive any JSON toolchain. A file holds one record or an array.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonvanish/bigint.hpp"
#include "nonvanish/errors.hpp"
#include "nonvanish/qseries.hpp"

namespace nonvanish::qseries {

using json = nlohmann::json;

inline json store_qexp(const QExpansion& f) {
    json coeffs = json::array();
    for (const auto& c : f.coefficients()) coeffs.push_back(c.str());
    return json{{"label", f.label()},
                {"weight", f.weight()},
                {"level", f.level()},
                {"normalized", f.normalized()},
                {"coefficients", std::move(coeffs)}};
}

inline QExpansion load_qexp(const json& record) {
    if (!record.is_object()) throw SchemaError("q-expansion record must be an object");
    for (const char* key : {"label", "weight", "level", "normalized", "coefficients"}) {
        if (!record.contains(key)) throw SchemaError(std::string("q-expansion record lacks '") + key + "'");
    }
    if (!record["label"].is_string()) throw SchemaError("'label' must be a string");
    std::string label = record["label"].get<std::string>();
    const json& w = record["weight"];
    const json& lv = record["level"];
    if (!w.is_number_integer() || w.get<long long>() <= 0) throw SchemaError(label + ": 'weight' must be a positive integer");
    if (w.get<long long>() % 2 != 0) throw SchemaError(label + ": odd weight " + w.dump());
    if (!lv.is_number_integer() || lv.get<long long>() <= 0) throw SchemaError(label + ": 'level' must be a positive integer");
    if (!record["normalized"].is_boolean()) throw SchemaError(label + ": 'normalized' must be a boolean");
    const json& cs = record["coefficients"];
    if (!cs.is_array() || cs.empty()) throw SchemaError(label + ": 'coefficients' must be a non-empty array");
    std::vector<BigInt> coeffs;
    coeffs.reserve(cs.size());
    for (const auto& c : cs) {
        if (!c.is_string()) throw SchemaError(label + ": coefficients must be decimal strings");
        coeffs.push_back(parse_bigint(c.get<std::string>()));
    }
    bool normalized = record["normalized"].get<bool>();
    if (normalized && (coeffs.size() < 2 || coeffs[1] != 1)) {
        throw SchemaError(label + ": flagged normalized but a(1) != 1");
    }
    return QExpansion(static_cast<unsigned>(w.get<long long>()), static_cast<u64>(lv.get<long long>()),
                      std::move(coeffs), std::move(label), normalized);
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline std::vector<QExpansion> load_qexp_file(const std::string& path) {
    json doc = read_json_file(path);
    std::vector<QExpansion> out;
    if (doc.is_array()) {
        for (const auto& r : doc) out.push_back(load_qexp(r));
    } else {
        out.push_back(load_qexp(doc));
    }
    return out;
}

}  // namespace nonvanish::qseries
