#pragma once

// Fixture files shipped under fixtures/:
//   curves.json      [{"label", "ainvs": [5 decimal strings], "conductor", "has_cyclic_4_isogeny"}]
//   forms.json       q-expansion interchange records
//   regression.json  constants frozen from oracle sweeps

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonvanish/bigint.hpp"
#include "nonvanish/elliptic.hpp"
#include "nonvanish/errors.hpp"
#include "nonvanish/qexp_io.hpp"
#include "nonvanish/qseries.hpp"

namespace nonvanish::fixtures {

using json = nlohmann::json;

#ifdef NONVANISH_FIXTURE_DIR
inline constexpr const char* kDefaultDir = NONVANISH_FIXTURE_DIR;
#else
inline constexpr const char* kDefaultDir = "fixtures";
#endif

inline elliptic::CurveQ load_curve(const json& r) {
    if (!r.is_object() || !r.contains("label") || !r.contains("ainvs")) {
        throw SchemaError("curve record needs 'label' and 'ainvs'");
    }
    const json& a = r["ainvs"];
    if (!a.is_array() || a.size() != 5) throw SchemaError("'ainvs' must list a1, a2, a3, a4, a6");
    std::vector<BigInt> c;
    for (const auto& v : a) {
        if (v.is_string()) {
            c.push_back(parse_bigint(v.get<std::string>()));
        } else if (v.is_number_integer()) {
            c.push_back(BigInt(v.get<long long>()));
        } else {
            throw SchemaError("curve coefficients must be integers or decimal strings");
        }
    }
    std::optional<std::uint64_t> conductor;
    if (r.contains("conductor")) {
        if (!r["conductor"].is_number_integer() || r["conductor"].get<long long>() <= 0) {
            throw SchemaError("'conductor' must be a positive integer");
        }
        conductor = r["conductor"].get<std::uint64_t>();
    }
    elliptic::CurveQ e(c[0], c[1], c[2], c[3], c[4], r["label"].get<std::string>(), conductor);
    e.set_has_cyclic_4_isogeny(r.value("has_cyclic_4_isogeny", false));
    return e;
}

inline json store_curve(const elliptic::CurveQ& e) {
    json r{{"label", e.label().value_or("")},
           {"ainvs", {e.a1().str(), e.a2().str(), e.a3().str(), e.a4().str(), e.a6().str()}},
           {"has_cyclic_4_isogeny", e.has_cyclic_4_isogeny()}};
    if (e.conductor()) r["conductor"] = *e.conductor();
    return r;
}

struct FixtureSet {
    std::vector<elliptic::CurveQ> curves;
    std::vector<qseries::QExpansion> forms;
    json regression = json::object();

    const elliptic::CurveQ* find_curve(const std::string& label) const {
        for (const auto& c : curves) {
            if (c.label() == label) return &c;
        }
        return nullptr;
    }

    const qseries::QExpansion* find_form(const std::string& label) const {
        for (const auto& f : forms) {
            if (f.label() == label) return &f;
        }
        return nullptr;
    }

    const elliptic::CurveQ& curve(const std::string& label) const {
        if (auto* c = find_curve(label)) return *c;
        throw SchemaError("no curve labelled '" + label + "' in the fixtures");
    }

    const qseries::QExpansion& form(const std::string& label) const {
        if (auto* f = find_form(label)) return *f;
        throw SchemaError("no form labelled '" + label + "' in the fixtures");
    }
};

/// Loads curves.json and forms.json (both required) and regression.json
/// (optional) from `dir`.
inline FixtureSet load_fixtures(const std::string& dir = kDefaultDir) {
    namespace fs = std::filesystem;
    FixtureSet set;
    fs::path base(dir);
    json curves = qseries::read_json_file((base / "curves.json").string());
    if (!curves.is_array()) throw SchemaError("curves.json must hold an array");
    for (const auto& r : curves) set.curves.push_back(load_curve(r));
    set.forms = qseries::load_qexp_file((base / "forms.json").string());
    if (fs::exists(base / "regression.json")) set.regression = qseries::read_json_file((base / "regression.json").string());
    return set;
}

}  // namespace nonvanish::fixtures
