#pragma once

// Runs of vanishing coefficients and the mod-4 non-vanishing certificates.
//
// Two gap conventions exist for i_f(n). Literally, i_f(n) is the largest i
// with a(n + j) = 0 for all 0 <= j <= i, which is empty whenever a(n) != 0.
// The quantity bounded in practice is the run of zeros right after a nonzero
// a(n). zero_run() returns whichever one applies at n; GapReport records runs
// after nonzero coefficients by default.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "nonvanish/arith.hpp"
#include "nonvanish/congruence.hpp"
#include "nonvanish/elliptic.hpp"
#include "nonvanish/errors.hpp"
#include "nonvanish/intervals.hpp"
#include "nonvanish/qseries.hpp"

namespace nonvanish::gaps {

using arith::u64;
using qseries::QExpansion;

enum class GapConvention {
    run_after,        // zeros following a nonzero a(n)
    run_starting_at,  // literal: largest i with a(n..n+i) all zero
};

namespace detail {

// Number of consecutive zero coefficients starting at `from`.
inline u64 zeros_from(const QExpansion& f, u64 from) {
    u64 k = from;
    while (k <= f.bound() && f.at(k) == 0) ++k;
    if (k > f.bound()) {
        throw TruncatedRunError("zero run from " + std::to_string(from) + " reaches the trusted bound " +
                                std::to_string(f.bound()) + " of '" + f.label() + "'");
    }
    return k - from;
}

}  // namespace detail

/// If a(n) != 0: the number of zeros following n. If a(n) = 0: the largest i
/// with a(n + j) = 0 for 0 <= j <= i.
inline u64 zero_run(const QExpansion& f, u64 n) {
    if (n == 0) throw DomainError("zero_run: n must be positive");
    if (f.at(n) != 0) return detail::zeros_from(f, n + 1);
    return detail::zeros_from(f, n) - 1;
}

// ---------------------------------------------------------------------------
// Certificates. Each is sound only: true guarantees a nonzero coefficient under
// the stated hypotheses, false says nothing.

/// n a sum of two squares coprime to 2 N_E, for a curve with a cyclic rational
/// 4-isogeny.
inline bool certify_weight2(u64 n, const elliptic::CurveQ& curve) {
    if (!curve.has_cyclic_4_isogeny()) {
        throw NotApplicableError("certify_weight2: " + curve.describe() + " is not flagged with a cyclic 4-isogeny");
    }
    if (!curve.conductor()) throw NotApplicableError("certify_weight2: conductor of " + curve.describe() + " unknown");
    return std::gcd(n, 2 * *curve.conductor()) == 1 && arith::is_sum_of_two_squares(n);
}

/// n a sum of two squares coprime to 2 N_f N_E, given a certified congruence
/// f = f_E modulo 2^m with m > 1.
inline bool certify_congruent(u64 n, u64 level_f, u64 level_e, const congruence::CongruenceReport& congruence) {
    if (!congruence.certified()) {
        throw NotApplicableError("certify_congruent: congruence not certified up to the Sturm bound (checked " +
                                 std::to_string(congruence.checked_bound) + ", need " +
                                 std::to_string(congruence.sturm_bound) + ")");
    }
    if (congruence.modulus_exponent <= 1) {
        throw NotApplicableError("certify_congruent: needs a congruence modulo 2^m with m > 1");
    }
    return std::gcd(n, 2 * level_f * level_e) == 1 && arith::is_sum_of_two_squares(n);
}

struct HypothesisCertificate {
    bool certified = false;
    std::optional<intervals::HypothesisDecomposition> decomposition;
    /// a(n) mod 4 predicted from the mod-4 Hecke patterns. When a(2) mod 4 is
    /// not supplied this is the odd part's residue only; a(2^i) is then an
    /// unknown unit.
    std::optional<int> predicted_residue;
};

namespace detail {

inline int odd_part_residue(const arith::Factorization& f) {
    int r = 1;
    for (const auto& [q, e] : f.factors) {
        if (q == 2) continue;
        int aq = q % 4 == 1 ? 2 : 0;
        r = r * congruence::mod4_power_pattern(q, e, aq) % 4;
    }
    return r;
}

}  // namespace detail

/// Certificate for cusp forms congruent mod 4 to f_E where E has a cyclic
/// rational 4-isogeny: n of the form 2^i p^j m^2 coprime to N. Even n needs
/// multiplicative reduction at 2. `a2_mod4`, when given, sharpens the
/// predicted residue to the full a(n) mod 4.
inline HypothesisCertificate certify_hypothesis_form(u64 n, u64 modulus_n, bool mult_at_2,
                                                     std::optional<int> a2_mod4 = std::nullopt,
                                                     intervals::HypothesisOptions opts = {}) {
    if (n == 0) throw DomainError("certify_hypothesis_form: n must be positive");
    if (n % 2 == 0 && !mult_at_2) {
        throw NotApplicableError("certify_hypothesis_form: even n needs multiplicative reduction at 2");
    }
    if (a2_mod4 && ((*a2_mod4 % 4) + 4) % 4 % 2 == 0) {
        throw DomainError("certify_hypothesis_form: a(2) must be a unit mod 4 under multiplicative reduction");
    }
    HypothesisCertificate cert;
    auto f = arith::factorize(n);
    cert.decomposition = intervals::hypothesis_form_check(f, n, modulus_n, opts);
    if (!cert.decomposition) return cert;
    int r = detail::odd_part_residue(f);
    if (a2_mod4) {
        int unit = ((*a2_mod4 % 4) + 4) % 4;
        for (unsigned k = 0; k < cert.decomposition->i; ++k) r = r * unit % 4;
    }
    cert.predicted_residue = r;
    // A residue of 0 would contradict the mod-4 patterns; never certify it.
    cert.certified = r != 0;
    return cert;
}

// ---------------------------------------------------------------------------

struct GapRecord {
    u64 n = 0;
    u64 run_length = 0;
    bool truncated = false;  // run reaches the trusted bound; length is a lower bound
};

struct GapReport {
    std::string form_label;
    u64 bound = 0;
    u64 n_min = 0, n_max = 0;
    GapConvention convention = GapConvention::run_after;
    std::vector<GapRecord> records;
    double max_ratio = 0;                // max run_length / n^{1/4} over n >= ratio_min_index
    std::optional<u64> max_ratio_index;  // n attaining max_ratio
    u64 ratio_min_index = 1000;
    u64 certified_count = 0;
    std::vector<u64> certificate_violations;
    bool has_truncated_run = false;
};

struct GapScanOptions {
    GapConvention convention = GapConvention::run_after;
    /// Indices below this are left out of max_ratio.
    u64 ratio_min_index = 1000;
    /// Certificate to cross-check; empty = none.
    std::function<bool(u64)> certified;
    /// Check applied to a(n) at certified n; defaults to a(n) != 0.
    std::function<bool(u64, const BigInt&)> verify;
};

/// All maximal zero runs attached to n in [n_min, n_max], the largest
/// normalized run, and a pointwise check of the certificate against the
/// coefficients.
inline GapReport gap_scan(const QExpansion& f, u64 n_min, u64 n_max, const GapScanOptions& opts = {}) {
    if (n_min == 0 || n_max < n_min) throw DomainError("gap_scan: need 1 <= n_min <= n_max");
    if (n_max > f.bound()) {
        throw RangeError("gap_scan: n_max " + std::to_string(n_max) + " is past the trusted bound " +
                         std::to_string(f.bound()));
    }
    GapReport r;
    r.form_label = f.label();
    r.bound = f.bound();
    r.n_min = n_min;
    r.n_max = n_max;
    r.convention = opts.convention;
    r.ratio_min_index = opts.ratio_min_index;

    auto record = [&](u64 n, u64 start) {
        GapRecord g{n, 0, false};
        u64 k = start;
        while (k <= f.bound() && f.at(k) == 0) ++k;
        g.truncated = k > f.bound();
        g.run_length = k - start;
        if (opts.convention == GapConvention::run_starting_at) g.run_length -= 1;
        r.has_truncated_run = r.has_truncated_run || g.truncated;
        if (!g.truncated && n >= opts.ratio_min_index) {
            double ratio = static_cast<double>(g.run_length) / std::pow(static_cast<double>(n), 0.25);
            if (ratio > r.max_ratio) {
                r.max_ratio = ratio;
                r.max_ratio_index = n;
            }
        }
        r.records.push_back(g);
    };

    for (u64 n = n_min; n <= n_max; ++n) {
        bool zero = f.at(n) == 0;
        if (opts.convention == GapConvention::run_after) {
            if (!zero && n < f.bound() && f.at(n + 1) == 0) record(n, n + 1);
        } else if (zero && (n == n_min || f.at(n - 1) != 0)) {
            record(n, n);
        }
        if (opts.certified && opts.certified(n)) {
            ++r.certified_count;
            bool ok = opts.verify ? opts.verify(n, f.at(n)) : !zero;
            if (!ok) r.certificate_violations.push_back(n);
        }
    }
    return r;
}

}  // namespace nonvanish::gaps
