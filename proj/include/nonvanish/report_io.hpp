#pragma once

// Serialization of result records to JSON, CSV and plain text. All floating
// values are printed with a fixed precision so identical inputs give
// byte-identical output.

#include <cstdint>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonvanish/bigint.hpp"
#include "nonvanish/congruence.hpp"
#include "nonvanish/elliptic.hpp"
#include "nonvanish/gaps.hpp"
#include "nonvanish/intervals.hpp"

namespace nonvanish::report {

using json = nlohmann::json;

enum class Format { json, csv, text };

inline Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    if (s == "text") return Format::text;
    throw DomainError("unknown format '" + s + "' (expected json, csv or text)");
}

inline std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// -- a_p tables ---------------------------------------------------------------

struct ApRow {
    std::uint64_t p = 0;
    std::int64_t ap = 0;
    elliptic::ReductionType reduction = elliptic::ReductionType::good;
};

inline std::string render_ap_table(const std::string& label, const std::vector<ApRow>& rows, Format fmt) {
    std::ostringstream os;
    switch (fmt) {
        case Format::json: {
            json arr = json::array();
            for (const auto& r : rows) arr.push_back({{"p", r.p}, {"a_p", r.ap}, {"reduction", to_string(r.reduction)}});
            os << json{{"curve", label}, {"rows", arr}}.dump(2) << "\n";
            break;
        }
        case Format::csv:
            os << "p,a_p,reduction\n";
            for (const auto& r : rows) os << r.p << "," << r.ap << "," << to_string(r.reduction) << "\n";
            break;
        case Format::text:
            os << "curve " << label << "\n";
            for (const auto& r : rows) os << "p=" << r.p << "  a_p=" << r.ap << "  " << to_string(r.reduction) << "\n";
            break;
    }
    return os.str();
}

// -- congruences --------------------------------------------------------------

inline json to_json(const congruence::CongruenceReport& r) {
    json j{{"congruent", r.congruent},
           {"checked_bound", r.checked_bound},
           {"sturm_bound", r.sturm_bound},
           {"modulus_exponent", r.modulus_exponent},
           {"certified", r.certified()}};
    j["first_failure_index"] = r.first_failure_index ? json(*r.first_failure_index) : json(nullptr);
    return j;
}

inline std::string render(const congruence::CongruenceReport& r, const std::string& f1, const std::string& f2,
                          Format fmt) {
    std::ostringstream os;
    switch (fmt) {
        case Format::json: {
            json j = to_json(r);
            j["form1"] = f1;
            j["form2"] = f2;
            os << j.dump(2) << "\n";
            break;
        }
        case Format::csv:
            os << "form1,form2,modulus_exponent,congruent,first_failure_index,checked_bound,sturm_bound,certified\n";
            os << f1 << "," << f2 << "," << r.modulus_exponent << "," << (r.congruent ? "true" : "false") << ","
               << (r.first_failure_index ? std::to_string(*r.first_failure_index) : "") << "," << r.checked_bound << ","
               << r.sturm_bound << "," << (r.certified() ? "true" : "false") << "\n";
            break;
        case Format::text:
            os << f1 << " vs " << f2 << " mod 2^" << r.modulus_exponent << ": ";
            if (r.congruent) {
                os << "congruent up to " << r.checked_bound;
            } else {
                os << "NOT congruent, first failure at n=" << *r.first_failure_index;
            }
            os << " (Sturm bound " << r.sturm_bound << (r.certified() ? ", certified" : "") << ")\n";
            break;
    }
    return os.str();
}

inline std::string render(const congruence::ClosenessReport& r, const std::string& f1, const std::string& f2,
                          unsigned m, unsigned s, Format fmt) {
    std::ostringstream os;
    json primes = r.primes_checked;
    json j{{"form1", f1},
           {"form2", f2},
           {"m", m},
           {"s", s},
           {"close", r.close},
           {"weight_clause", r.weight_clause},
           {"alpha_clause", r.alpha_clause},
           {"primes_checked", primes},
           {"failure", r.failure}};
    j["witness_prime"] = r.witness_prime ? json(*r.witness_prime) : json(nullptr);
    switch (fmt) {
        case Format::json: os << j.dump(2) << "\n"; break;
        case Format::csv:
            os << "form1,form2,m,s,close,weight_clause,alpha_clause,witness_prime,primes_checked\n";
            os << f1 << "," << f2 << "," << m << "," << s << "," << (r.close ? "true" : "false") << ","
               << (r.weight_clause ? "true" : "false") << "," << (r.alpha_clause ? "true" : "false") << ","
               << (r.witness_prime ? std::to_string(*r.witness_prime) : "") << "," << r.primes_checked.size() << "\n";
            break;
        case Format::text:
            os << f1 << " and " << f2 << (r.close ? " are" : " are NOT") << " 2-adically close (m=" << m << ", s=" << s
               << ") on " << r.primes_checked.size() << " primes";
            if (!r.close) os << ": " << r.failure;
            os << "\n";
            break;
    }
    return os.str();
}

// -- interval scans -----------------------------------------------------------

inline std::string render(const intervals::ScanReport& r, Format fmt) {
    std::ostringstream os;
    switch (fmt) {
        case Format::csv:
            os << "X,next_qualifying_n,gap,gap/X^{1/4}\n";
            for (const auto& row : r.rows) os << row.x << "," << row.next << "," << row.gap << "," << fixed(row.ratio) << "\n";
            break;
        case Format::json: {
            json j{{"kind", intervals::to_string(r.kind)},
                   {"N", r.modulus_n},
                   {"x_min", r.x_min},
                   {"x_max", r.x_max},
                   {"c", to_string(r.c)},
                   {"delta", to_string(r.delta)},
                   {"failures", r.failures},
                   {"failure_count", r.failures.size()},
                   {"max_gap_observed", r.max_gap_observed}};
            json w = json::array();
            for (auto [x, n] : r.witness_sample) w.push_back({x, n});
            j["witness_sample"] = w;
            if (!r.gap_histogram.empty()) {
                json h = json::object();
                for (auto [g, cnt] : r.gap_histogram) h[std::to_string(g)] = cnt;
                j["gap_histogram"] = h;
            }
            if (r.fitted_delta) j["fitted_delta"] = fixed(*r.fitted_delta);
            if (r.fitted_c) j["fitted_c"] = fixed(*r.fitted_c);
            if (!r.implied_c.empty()) {
                json ic = json::array();
                for (const auto& [d, c] : r.implied_c) ic.push_back({{"delta", to_string(d)}, {"c", fixed(c)}});
                j["implied_c"] = ic;
            }
            os << j.dump(2) << "\n";
            break;
        }
        case Format::text:
            os << intervals::to_string(r.kind) << " scan, N=" << r.modulus_n << ", X in [" << r.x_min << ", " << r.x_max
               << "], c=" << to_string(r.c) << ", delta=" << to_string(r.delta) << "\n";
            os << "failures: " << r.failures.size() << ", max gap: " << r.max_gap_observed << "\n";
            if (r.fitted_delta) os << "fitted exponent: " << fixed(*r.fitted_delta) << ", fitted c: " << fixed(*r.fitted_c) << "\n";
            for (const auto& [d, c] : r.implied_c) os << "implied c at delta=" << to_string(d) << ": " << fixed(c) << "\n";
            break;
    }
    return os.str();
}

// -- gap reports --------------------------------------------------------------

/// `certified` and `nonzero` describe the record's index n.
inline std::string render(const gaps::GapReport& r, const std::function<bool(std::uint64_t)>& certified,
                          const std::function<bool(std::uint64_t)>& nonzero, Format fmt) {
    std::ostringstream os;
    auto ratio = [](const gaps::GapRecord& g) {
        return static_cast<double>(g.run_length) / std::pow(static_cast<double>(g.n), 0.25);
    };
    switch (fmt) {
        case Format::csv:
            os << "n,run_length,ratio,certified,coefficient_nonzero\n";
            for (const auto& g : r.records) {
                os << g.n << "," << g.run_length << "," << fixed(ratio(g)) << ","
                   << (certified && certified(g.n) ? "true" : "false") << "," << (nonzero(g.n) ? "true" : "false") << "\n";
            }
            break;
        case Format::json: {
            json recs = json::array();
            for (const auto& g : r.records) {
                recs.push_back({{"n", g.n}, {"run_length", g.run_length}, {"truncated", g.truncated}});
            }
            json j{{"form", r.form_label},
                   {"bound", r.bound},
                   {"n_min", r.n_min},
                   {"n_max", r.n_max},
                   {"convention", r.convention == gaps::GapConvention::run_after ? "run_after" : "run_starting_at"},
                   {"max_ratio", fixed(r.max_ratio)},
                   {"ratio_min_index", r.ratio_min_index},
                   {"certified_count", r.certified_count},
                   {"certificate_violations", r.certificate_violations},
                   {"has_truncated_run", r.has_truncated_run},
                   {"records", recs}};
            j["max_ratio_index"] = r.max_ratio_index ? json(*r.max_ratio_index) : json(nullptr);
            os << j.dump(2) << "\n";
            break;
        }
        case Format::text:
            os << "gaps of " << r.form_label << " on [" << r.n_min << ", " << r.n_max << "]: " << r.records.size()
               << " runs, max run/n^(1/4) = " << fixed(r.max_ratio);
            if (r.max_ratio_index) os << " at n=" << *r.max_ratio_index;
            os << "\ncertified indices: " << r.certified_count << ", violations: " << r.certificate_violations.size()
               << (r.has_truncated_run ? ", final run truncated" : "") << "\n";
            break;
    }
    return os.str();
}

}  // namespace nonvanish::report
