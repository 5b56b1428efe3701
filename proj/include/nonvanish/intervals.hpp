#pragma once

// Short-interval scans for integers of two shapes:
//   * sums of two squares coprime to N;
//   * "hypothesis form" integers 2^i p^j m^2 coprime to N with p = 1 (mod 4),
//     j != 3 (mod 4) and gcd(p, m) = 1.
//
// Interval convention: for real c > 0 and exponent delta the interval at X is
// the integer range (X, X + floor(c * X^delta)], floor applied once, computed
// exactly from rational c and delta.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonvanish/arith.hpp"
#include "nonvanish/bigint.hpp"
#include "nonvanish/errors.hpp"
#include "nonvanish/parallel.hpp"

namespace nonvanish::intervals {

using arith::u64;

/// n = 2^i p^j m^2 with m odd. `p` is empty when j = 0.
struct HypothesisDecomposition {
    unsigned i = 0;
    std::optional<u64> p;
    unsigned j = 0;
    u64 m = 1;

    friend bool operator==(const HypothesisDecomposition&, const HypothesisDecomposition&) = default;
};

struct HypothesisOptions {
    /// Reject decompositions with j = 0 (the stricter reading of the hypothesis).
    bool require_prime_factor = false;
};

inline std::optional<HypothesisDecomposition> hypothesis_form_check(const arith::Factorization& f, u64 n, u64 modulus_n,
                                                                    HypothesisOptions opts = {}) {
    if (std::gcd(n, modulus_n) != 1) return std::nullopt;
    HypothesisDecomposition d;
    std::optional<u64> even_candidate;  // a prime = 1 (mod 4) to an even power
    for (const auto& [q, e] : f.factors) {
        if (q == 2) {
            d.i = e;
        } else if (q % 4 == 3) {
            if (e % 2) return std::nullopt;
        } else if (e % 2) {
            if (d.p || e % 4 == 3) return std::nullopt;
            d.p = q;
            d.j = e;
        } else if (!even_candidate) {
            even_candidate = q;
        }
    }
    if (!d.p && opts.require_prime_factor) {
        if (!even_candidate) return std::nullopt;
        d.p = even_candidate;
        d.j = f.exponent_of(*even_candidate);
    }
    u64 square = 1;
    for (const auto& [q, e] : f.factors) {
        if (q == 2 || (d.p && q == *d.p)) continue;
        for (unsigned k = 0; k < e / 2; ++k) square *= q;
    }
    d.m = square;
    return d;
}

/// Decomposition of n as 2^i p^j m^2 coprime to N, or nothing.
inline std::optional<HypothesisDecomposition> hypothesis_form_check(u64 n, u64 modulus_n, HypothesisOptions opts = {}) {
    if (n == 0) throw DomainError("hypothesis_form_check: n must be positive");
    return hypothesis_form_check(arith::factorize(n), n, modulus_n, opts);
}

enum class ScanKind { sum_of_two_squares, hypothesis_form };

inline const char* to_string(ScanKind k) { return k == ScanKind::sum_of_two_squares ? "s2s" : "hypothesis"; }

struct ScanPredicate {
    ScanKind kind = ScanKind::sum_of_two_squares;
    u64 coprime_to = 1;
    HypothesisOptions hypothesis;

    bool operator()(const arith::Factorization& f, u64 n) const {
        if (std::gcd(n, coprime_to) != 1) return false;
        if (kind == ScanKind::sum_of_two_squares) return arith::is_sum_of_two_squares(f);
        return hypothesis_form_check(f, n, coprime_to, hypothesis).has_value();
    }

    bool operator()(u64 n) const { return (*this)(arith::factorize(n), n); }
};

/// floor(c * X^delta) for rational c >= 0 and delta >= 0.
class IntervalLength {
public:
    IntervalLength(const Rational& c, const Rational& delta) {
        if (c < 0) throw DomainError("interval constant c must be non-negative");
        if (delta < 0) throw DomainError("interval exponent delta must be non-negative");
        num_ = numerator(c);
        den_ = denominator(c);
        u_ = static_cast<unsigned>(numerator(delta));
        v_ = static_cast<unsigned>(denominator(delta));
        num_pow_ = boost::multiprecision::pow(num_, v_);
    }

    u64 operator()(u64 x) const {
        if (num_ == 0) return 0;
        BigInt inner = num_pow_ * boost::multiprecision::pow(BigInt(x), u_);
        return static_cast<u64>(iroot(inner, v_) / den_);
    }

    /// True iff floor(c X^delta) >= len, i.e. (len * den)^v <= num^v X^u.
    bool at_least(u64 x, u64 len) const {
        if (len == 0) return true;
        return boost::multiprecision::pow(BigInt(len) * den_, v_) <= num_pow_ * boost::multiprecision::pow(BigInt(x), u_);
    }

private:
    BigInt num_, den_, num_pow_;
    unsigned u_ = 0, v_ = 1;
};

/// Least n in (X, X + floor(c X^delta)] satisfying the predicate.
inline std::optional<u64> scan_interval(u64 x, const Rational& c, const Rational& delta, const ScanPredicate& pred) {
    if (x == 0) throw DomainError("scan: X must be positive");
    u64 len = IntervalLength(c, delta)(x);
    for (u64 n = x + 1; n <= x + len; ++n) {
        if (pred(n)) return n;
    }
    return std::nullopt;
}

/// Least sum of two squares coprime to N in (X, X + floor(c X^{1/4})].
inline std::optional<u64> scan_s2s_interval(u64 x, const Rational& c, u64 modulus_n) {
    return scan_interval(x, c, Rational(1, 4), {ScanKind::sum_of_two_squares, modulus_n, {}});
}

inline std::optional<u64> scan_hypothesis_interval(u64 x, const Rational& c, const Rational& delta, u64 modulus_n,
                                                   HypothesisOptions opts = {}) {
    return scan_interval(x, c, delta, {ScanKind::hypothesis_form, modulus_n, opts});
}

/// One row of the gap CSV: the next qualifying integer after X.
struct GapRow {
    u64 x = 0;
    u64 next = 0;
    u64 gap = 0;
    double ratio = 0;  // gap / X^{1/4}
};

struct ScanReport {
    ScanKind kind = ScanKind::sum_of_two_squares;
    u64 modulus_n = 1;
    u64 x_min = 0, x_max = 0;
    Rational c;
    Rational delta{1, 4};
    std::vector<u64> failures;
    u64 max_gap_observed = 0;
    std::vector<std::pair<u64, u64>> witness_sample;
    std::vector<GapRow> rows;
    // Measurement extras from estimate_delta.
    std::map<u64, u64> gap_histogram;
    std::optional<double> fitted_delta;
    std::optional<double> fitted_c;
    std::vector<std::pair<Rational, double>> implied_c;

    bool passed() const { return failures.empty(); }
};

/// Qualifying flags and "next qualifying integer" lookups over [1, limit].
class QualifyingTable {
public:
    QualifyingTable(const ScanPredicate& pred, u64 limit, unsigned jobs = 1) : flags_(limit + 1, 0) {
        arith::FactorSieve sieve(limit);
        constexpr u64 kChunk = 1 << 16;
        std::size_t chunks = (limit + kChunk) / kChunk;
        auto parts = parallel_map(chunks, jobs, [&](std::size_t c) {
            std::vector<std::uint8_t> local;
            u64 lo = std::max<u64>(1, c * kChunk), hi = std::min<u64>(limit, (c + 1) * kChunk - 1);
            for (u64 n = lo; n <= hi; ++n) local.push_back(pred(sieve.factorize(n), n) ? 1 : 0);
            return local;
        });
        for (std::size_t c = 0; c < chunks; ++c) {
            u64 lo = std::max<u64>(1, c * kChunk);
            std::copy(parts[c].begin(), parts[c].end(), flags_.begin() + static_cast<std::ptrdiff_t>(lo));
        }
        next_.assign(limit + 2, 0);
        u64 upcoming = 0;  // 0 = none within the table
        for (u64 n = limit + 1; n-- > 0;) {
            next_[n] = upcoming;
            if (flags_[n]) upcoming = n;
        }
    }

    u64 limit() const { return flags_.size() - 1; }
    bool qualifies(u64 n) const { return flags_.at(n) != 0; }

    /// Least qualifying n > x within the table, or nothing.
    std::optional<u64> next_after(u64 x) const {
        u64 v = next_.at(x);
        return v ? std::optional<u64>(v) : std::nullopt;
    }

private:
    std::vector<std::uint8_t> flags_;
    std::vector<u64> next_;
};

namespace detail {

inline void check_range(u64 x_min, u64 x_max) {
    if (x_min < 16) throw DomainError("scan range must start at X >= 16");
    if (x_max < x_min) throw DomainError("scan range is empty (X_max < X_min)");
}

// Next-qualifying lookups on (X, 2X] for every X in range; throws when some X
// has no qualifying integer in that window.
inline QualifyingTable build_table(const ScanPredicate& pred, u64 x_min, u64 x_max, unsigned jobs) {
    QualifyingTable table(pred, 2 * x_max, jobs);
    for (u64 x : {x_min, x_max}) {
        auto nx = table.next_after(x);
        if (!nx || *nx > 2 * x) {
            throw EmptyDataError("no qualifying integer in (" + std::to_string(x) + ", " + std::to_string(2 * x) + "]");
        }
    }
    return table;
}

// Every X where the gap to the next qualifying integer is locally maximal
// relative to X: X_min and each qualifying n in range.
inline std::vector<u64> critical_points(const QualifyingTable& t, u64 x_min, u64 x_max) {
    std::vector<u64> xs{x_min};
    for (u64 x = x_min + 1; x <= x_max; ++x) {
        if (t.qualifies(x)) xs.push_back(x);
    }
    return xs;
}

inline std::vector<std::pair<u64, u64>> sample_witnesses(const QualifyingTable& t, u64 x_min, u64 x_max,
                                                         const IntervalLength& len, std::size_t count = 16) {
    std::vector<std::pair<u64, u64>> out;
    u64 span = x_max - x_min;
    for (std::size_t k = 0; k < count; ++k) {
        u64 x = x_min + (count == 1 ? 0 : span * k / (count - 1));
        auto n = t.next_after(x);
        if (n && len.at_least(x, *n - x)) {
            if (out.empty() || out.back().first != x) out.emplace_back(x, *n);
        }
    }
    return out;
}

inline double quarter_ratio(u64 gap, u64 x) { return static_cast<double>(gap) / std::pow(static_cast<double>(x), 0.25); }

}  // namespace detail

/// Scans every X in [x_min, x_max] at fixed (c, delta). Failures are the X
/// whose interval holds no qualifying integer.
inline ScanReport scan_range(const ScanPredicate& pred, u64 x_min, u64 x_max, const Rational& c, const Rational& delta,
                             unsigned jobs = 1) {
    detail::check_range(x_min, x_max);
    QualifyingTable table = detail::build_table(pred, x_min, x_max, jobs);
    IntervalLength len(c, delta);
    ScanReport r;
    r.kind = pred.kind;
    r.modulus_n = pred.coprime_to;
    r.x_min = x_min;
    r.x_max = x_max;
    r.c = c;
    r.delta = delta;
    constexpr u64 kChunk = 1 << 14;
    std::size_t chunks = (x_max - x_min) / kChunk + 1;
    auto parts = parallel_map(chunks, jobs, [&](std::size_t k) {
        std::pair<std::vector<u64>, u64> part{{}, 0};
        u64 lo = x_min + k * kChunk, hi = std::min(x_max, lo + kChunk - 1);
        for (u64 x = lo; x <= hi; ++x) {
            u64 gap = *table.next_after(x) - x;
            part.second = std::max(part.second, gap);
            if (!len.at_least(x, gap)) part.first.push_back(x);
        }
        return part;
    });
    for (auto& [fails, gap] : parts) {
        r.failures.insert(r.failures.end(), fails.begin(), fails.end());
        r.max_gap_observed = std::max(r.max_gap_observed, gap);
    }
    for (u64 x : detail::critical_points(table, x_min, x_max)) {
        u64 next = *table.next_after(x);
        r.rows.push_back({x, next, next - x, detail::quarter_ratio(next - x, x)});
    }
    r.witness_sample = detail::sample_witnesses(table, x_min, x_max, len);
    return r;
}

namespace detail {

// sup over X of gap(X) / X^delta, in floating point.
inline double sup_ratio(const QualifyingTable& t, const std::vector<u64>& xs, double delta) {
    double best = 0;
    for (u64 x : xs) {
        u64 gap = *t.next_after(x) - x;
        best = std::max(best, static_cast<double>(gap) / std::pow(static_cast<double>(x), delta));
    }
    return best;
}

inline Rational round_up_micro(double v) {
    return Rational(BigInt(static_cast<long long>(std::ceil(v * 1e6))), BigInt(1'000'000));
}

}  // namespace detail

/// Smallest c (at 1e-6 resolution) such that every X in [x_min, x_max] has a
/// qualifying integer in (X, X + floor(c X^delta)]; the returned report is
/// the exact scan at that c.
inline ScanReport estimate_constant(const ScanPredicate& pred, u64 x_min, u64 x_max, const Rational& delta,
                                    unsigned jobs = 1) {
    detail::check_range(x_min, x_max);
    QualifyingTable table = detail::build_table(pred, x_min, x_max, jobs);
    auto xs = detail::critical_points(table, x_min, x_max);
    double estimate = detail::sup_ratio(table, xs, static_cast<double>(delta));
    Rational c = detail::round_up_micro(estimate);
    Rational micro(1, 1'000'000);
    // Lower c while the exact check still passes, raise it while it fails.
    auto passes = [&](const Rational& cand) {
        IntervalLength len(cand, delta);
        return std::all_of(xs.begin(), xs.end(), [&](u64 x) { return len.at_least(x, *table.next_after(x) - x); });
    };
    while (!passes(c)) c += micro;
    while (c > micro && passes(c - micro)) c -= micro;
    return scan_range(pred, x_min, x_max, c, delta, jobs);
}

/// Sums of two squares coprime to N.
inline ScanReport estimate_constant(u64 modulus_n, u64 x_min, u64 x_max, const Rational& delta, unsigned jobs = 1) {
    return estimate_constant({ScanKind::sum_of_two_squares, modulus_n, {}}, x_min, x_max, delta, jobs);
}

/// Gap statistics for hypothesis-form integers: histogram of consecutive gaps,
/// a least-squares exponent fitted to the maximal gap in each dyadic block,
/// and the empirical c implied at a few fixed exponents. A measurement only.
inline ScanReport estimate_delta(u64 modulus_n, u64 x_min, u64 x_max, HypothesisOptions opts = {}, unsigned jobs = 1) {
    ScanPredicate pred{ScanKind::hypothesis_form, modulus_n, opts};
    detail::check_range(x_min, x_max);
    QualifyingTable table = detail::build_table(pred, x_min, x_max, jobs);
    auto xs = detail::critical_points(table, x_min, x_max);

    ScanReport r;
    r.kind = pred.kind;
    r.modulus_n = modulus_n;
    r.x_min = x_min;
    r.x_max = x_max;
    r.delta = Rational(1, 4);
    for (u64 x : xs) {
        u64 next = *table.next_after(x);
        u64 gap = next - x;
        r.rows.push_back({x, next, gap, detail::quarter_ratio(gap, x)});
        r.max_gap_observed = std::max(r.max_gap_observed, gap);
        if (table.qualifies(x)) ++r.gap_histogram[gap];
    }
    for (const Rational& d : {Rational(1, 8), Rational(1, 6), Rational(1, 4), Rational(1, 3), Rational(1, 2)}) {
        r.implied_c.emplace_back(d, detail::sup_ratio(table, xs, static_cast<double>(d)));
    }
    r.c = detail::round_up_micro(r.implied_c[2].second);

    // Dyadic blocks [2^k, 2^{k+1}) clipped to the range.
    std::vector<std::pair<double, double>> points;
    for (u64 lo = x_min; lo <= x_max;) {
        u64 hi = std::min(x_max, std::bit_floor(lo) * 2 - 1);
        u64 best = 0;
        for (u64 x : xs) {
            if (x >= lo && x <= hi) best = std::max(best, *table.next_after(x) - x);
        }
        if (best > 0) points.emplace_back(std::log(static_cast<double>(lo)), std::log(static_cast<double>(best)));
        if (hi == x_max) break;
        lo = hi + 1;
    }
    if (points.size() >= 2) {
        double n = static_cast<double>(points.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [px, py] : points) {
            sx += px;
            sy += py;
            sxx += px * px;
            sxy += px * py;
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        r.fitted_delta = slope;
        r.fitted_c = std::exp((sy - slope * sx) / n);
    }
    IntervalLength len(r.c, r.delta);
    r.witness_sample = detail::sample_witnesses(table, x_min, x_max, len);
    return r;
}

}  // namespace nonvanish::intervals
