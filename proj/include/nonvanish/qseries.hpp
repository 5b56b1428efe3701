#pragma once

// Truncated q-expansions with exact integer coefficients.
//
// A QExpansion stores a(0..B); B is the trusted bound and every accessor
// refuses to read past it. Characters are always trivial.

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonvanish/arith.hpp"
#include "nonvanish/bigint.hpp"
#include "nonvanish/elliptic.hpp"
#include "nonvanish/errors.hpp"
#include "nonvanish/parallel.hpp"
#include "nonvanish/point_count.hpp"

namespace nonvanish::qseries {

using arith::u64;

class QExpansion {
public:
    QExpansion(unsigned weight, u64 level, std::vector<BigInt> coefficients, std::string label = {},
               bool normalized = false)
        : weight_(weight), level_(level), coeffs_(std::move(coefficients)), label_(std::move(label)),
          normalized_(normalized) {
        if (weight_ == 0 || weight_ % 2 != 0) {
            throw DomainError("weight must be a positive even integer, got " + std::to_string(weight_));
        }
        if (level_ == 0) throw DomainError("level must be positive");
        if (coeffs_.empty()) throw DomainError("a q-expansion needs at least a(0)");
        if (normalized_ && (coeffs_.size() < 2 || coeffs_[1] != 1)) {
            throw DomainError("normalized form '" + label_ + "' must have a(1) = 1");
        }
    }

    unsigned weight() const { return weight_; }
    u64 level() const { return level_; }
    const std::string& label() const { return label_; }
    bool normalized() const { return normalized_; }

    /// Highest trusted index.
    u64 bound() const { return coeffs_.size() - 1; }

    const BigInt& at(u64 n) const {
        if (n > bound()) {
            throw RangeError("index " + std::to_string(n) + " is past the trusted bound " + std::to_string(bound()) +
                             " of '" + label_ + "'");
        }
        return coeffs_[n];
    }
    const BigInt& operator[](u64 n) const { return at(n); }

    const std::vector<BigInt>& coefficients() const { return coeffs_; }

    QExpansion truncated(u64 new_bound) const {
        if (new_bound > bound()) throw RangeError("cannot extend a series past its trusted bound");
        return QExpansion(weight_, level_, {coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(new_bound) + 1},
                          label_, normalized_);
    }

    friend bool operator==(const QExpansion&, const QExpansion&) = default;

private:
    unsigned weight_;
    u64 level_;
    std::vector<BigInt> coeffs_;
    std::string label_;
    bool normalized_;
};

/// Completes a(n), n <= bound, from a(p) for every prime p <= bound:
///   p not dividing level: a(p^r) = a(p) a(p^{r-1}) - p^{weight-1} a(p^{r-2})
///   p dividing level:     a(p^r) = a(p)^r
/// and a(mn) = a(m) a(n) for coprime m, n. Index 0 is set to 0.
inline std::vector<BigInt> hecke_extend(const std::map<u64, BigInt>& prime_coeffs, unsigned weight, u64 level,
                                        u64 bound) {
    if (weight == 0 || weight % 2) throw DomainError("hecke_extend: weight must be positive and even");
    if (level == 0) throw DomainError("hecke_extend: level must be positive");
    std::vector<BigInt> a(bound + 1);
    if (bound == 0) return a;
    a[1] = 1;
    arith::FactorSieve sieve(bound);
    for (u64 n = 2; n <= bound; ++n) {
        u64 p = sieve.smallest_prime_factor(n);
        u64 pe = 1, rest = n;
        while (rest % p == 0) {
            rest /= p;
            pe *= p;
        }
        if (rest != 1) {
            a[n] = a[pe] * a[rest];
            continue;
        }
        if (pe == p) {
            auto it = prime_coeffs.find(p);
            if (it == prime_coeffs.end()) {
                throw IncompleteInputError("hecke_extend: missing a(" + std::to_string(p) + ")");
            }
            a[p] = it->second;
        } else if (level % p == 0) {
            a[n] = a[pe / p] * a[p];
        } else {
            BigInt pk = boost::multiprecision::pow(BigInt(p), weight - 1);
            a[n] = a[p] * a[pe / p] - pk * a[pe / (p * p)];
        }
    }
    return a;
}

/// a(p) for every prime p <= bound, computed on `jobs` worker threads.
inline std::map<u64, BigInt> curve_prime_coefficients(const elliptic::CurveQ& curve, u64 bound,
                                                      elliptic::CountMethod method = elliptic::CountMethod::automatic,
                                                      unsigned jobs = 1) {
    std::vector<u64> primes = arith::primes_up_to(bound);
    auto values = parallel_map(primes.size(), jobs, [&](std::size_t i) { return elliptic::ap(curve, primes[i], method); });
    std::map<u64, BigInt> out;
    for (std::size_t i = 0; i < primes.size(); ++i) out.emplace(primes[i], values[i]);
    return out;
}

/// The weight-2 newform attached to a curve of the given conductor, to `bound`.
inline QExpansion from_curve(const elliptic::CurveQ& curve, u64 level, u64 bound,
                             elliptic::CountMethod method = elliptic::CountMethod::automatic, unsigned jobs = 1) {
    if (curve.conductor() && *curve.conductor() != level) {
        throw DomainError("from_curve: level " + std::to_string(level) + " differs from the conductor of " +
                          curve.describe());
    }
    if (bound < 1) throw DomainError("from_curve: bound must be positive");
    for (u64 p : arith::primes_up_to(bound)) {
        bool bad = curve.discriminant() % p == 0;
        if (bad != (level % p == 0)) {
            throw DomainError("from_curve: level " + std::to_string(level) + " and the discriminant of " +
                              curve.describe() + " disagree at p = " + std::to_string(p));
        }
    }
    auto coeffs = hecke_extend(curve_prime_coefficients(curve, bound, method, jobs), 2, level, bound);
    return QExpansion(2, level, std::move(coeffs), curve.label().value_or("f_E"), true);
}

/// Cauchy product truncated at `bound`; weights add and levels combine by lcm.
inline QExpansion series_multiply(const QExpansion& f, const QExpansion& g, u64 bound) {
    if (bound > f.bound() || bound > g.bound()) {
        throw RangeError("series_multiply: bound " + std::to_string(bound) + " exceeds a trusted bound");
    }
    std::vector<BigInt> c(bound + 1);
    for (u64 i = 0; i <= bound; ++i) {
        const BigInt& fi = f.at(i);
        if (fi == 0) continue;
        for (u64 j = 0; i + j <= bound; ++j) c[i + j] += fi * g.at(j);
    }
    return QExpansion(f.weight() + g.weight(), std::lcm(f.level(), g.level()), std::move(c),
                      f.label() + "*" + g.label(), false);
}

/// E4 = 1 + 240 sum sigma_3(n) q^n.
inline QExpansion eisenstein_e4(u64 bound) {
    std::vector<BigInt> sigma3(bound + 1);
    for (u64 d = 1; d <= bound; ++d) {
        BigInt cube = BigInt(d) * d * d;
        for (u64 m = d; m <= bound; m += d) sigma3[m] += cube;
    }
    std::vector<BigInt> c(bound + 1);
    c[0] = 1;
    for (u64 n = 1; n <= bound; ++n) c[n] = 240 * sigma3[n];
    return QExpansion(4, 1, std::move(c), "E4", false);
}

/// f * E4^n, truncated at `bound`.
inline QExpansion times_e4_power(const QExpansion& f, unsigned n, u64 bound) {
    QExpansion e4 = eisenstein_e4(bound);
    QExpansion out = f.truncated(bound);
    for (unsigned i = 0; i < n; ++i) out = series_multiply(out, e4, bound);
    return out;
}

}  // namespace nonvanish::qseries
