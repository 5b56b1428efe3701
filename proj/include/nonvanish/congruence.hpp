#pragma once

// Congruences of q-expansions modulo powers of 2.
//
// The coefficient ring is Z and the prime above 2 is (2) itself, so the
// ramification index is always 1. A truncated comparison only becomes a
// proof once it reaches the Sturm bound; CongruenceReport keeps both numbers
// so callers can tell "congruent so far" from "certified".

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonvanish/arith.hpp"
#include "nonvanish/bigint.hpp"
#include "nonvanish/errors.hpp"
#include "nonvanish/qseries.hpp"

namespace nonvanish::congruence {

using arith::u64;
using qseries::QExpansion;

/// The modulus q^m with q = (2) above 2 and ramification index e.
class Modulus {
public:
    explicit Modulus(unsigned exponent, unsigned ramification = 1) : exponent_(exponent), ramification_(ramification) {
        if (exponent_ == 0) throw DomainError("modulus exponent must be positive");
        if (ramification_ != 1) {
            throw NotApplicableError("only the unramified prime (2) over Z is supported (e = " +
                                     std::to_string(ramification_) + " requested)");
        }
        if (exponent_ > 4096) throw DomainError("modulus exponent unreasonably large");
    }

    unsigned exponent() const { return exponent_; }
    unsigned ramification() const { return ramification_; }
    BigInt value() const { return BigInt(1) << exponent_; }

    bool divides(const BigInt& v) const {
        if (v == 0) return true;
        return boost::multiprecision::lsb(abs(v)) >= exponent_;
    }

private:
    unsigned exponent_;
    unsigned ramification_;
};

/// ord_{q^m}: the least index whose coefficient q^m does not divide. `index`
/// is empty when no such index exists up to `checked_bound`, which is the
/// truncated stand-in for the conventional value infinity.
struct Order {
    std::optional<u64> index;
    u64 checked_bound = 0;

    bool infinite_up_to_bound() const { return !index.has_value(); }
};

inline Order ord_qa(const QExpansion& f, const Modulus& modulus) {
    for (u64 n = 0; n <= f.bound(); ++n) {
        if (!modulus.divides(f.at(n))) return {n, f.bound()};
    }
    return {std::nullopt, f.bound()};
}

/// [SL2(Z) : Gamma1(N)] = N^2 prod_{p | N} (1 - 1/p^2).
inline u64 index_gamma1(u64 n) {
    if (n == 0) throw DomainError("index_gamma1: N must be positive");
    u64 result = n * n;
    for (const auto& [p, e] : arith::factorize(n).factors) result = result / (p * p) * (p * p - 1);
    return result;
}

/// ceil(max(w1, w2) * [SL2(Z):Gamma1(N)] / 12).
inline u64 sturm_bound(unsigned weight1, unsigned weight2, u64 level) {
    if (weight1 == 0 || weight2 == 0 || weight1 % 2 || weight2 % 2) {
        throw DomainError("sturm_bound: weights must be positive and even");
    }
    u64 numerator = std::max(weight1, weight2) * index_gamma1(level);
    return (numerator + 11) / 12;
}

struct CongruenceReport {
    bool congruent = true;
    std::optional<u64> first_failure_index;
    u64 checked_bound = 0;
    u64 sturm_bound = 0;
    unsigned modulus_exponent = 0;

    /// Congruent at every index up to a bound that reaches the Sturm bound.
    bool certified() const { return congruent && checked_bound >= sturm_bound; }
};

/// Compares a_{f1}(n) and a_{f2}(n) modulo 2^m for 0 <= n <= bound. The Sturm
/// bound uses the lcm of the two levels.
inline CongruenceReport congruent_mod(const QExpansion& f1, const QExpansion& f2, const Modulus& modulus, u64 bound) {
    if (bound > f1.bound() || bound > f2.bound()) {
        throw RangeError("congruent_mod: bound " + std::to_string(bound) + " exceeds trusted bounds (" +
                         std::to_string(f1.bound()) + ", " + std::to_string(f2.bound()) + ")");
    }
    CongruenceReport r;
    r.checked_bound = bound;
    r.sturm_bound = sturm_bound(f1.weight(), f2.weight(), std::lcm(f1.level(), f2.level()));
    r.modulus_exponent = modulus.exponent();
    for (u64 n = 0; n <= bound; ++n) {
        if (!modulus.divides(f1.at(n) - f2.at(n))) {
            r.congruent = false;
            r.first_failure_index = n;
            break;
        }
    }
    return r;
}

/// 0 for n <= 1, 1 for n = 2, n - 2 for n > 2.
constexpr std::int64_t alpha(std::int64_t n) {
    if (n <= 1) return 0;
    if (n == 2) return 1;
    return n - 2;
}

struct ClosenessReport {
    bool close = false;
    bool weight_clause = false;  // 2k1 = 2k2 (mod 2^s)
    bool alpha_clause = false;   // s >= alpha(ceil(m/e)) >= 1
    std::optional<u64> witness_prime;
    std::vector<u64> primes_checked;
    std::string failure;
};

/// 2-adic closeness of two eigenforms at exponent m and weight precision s,
/// checked on primes p <= prime_bound not dividing 2 N1 N2. Definitional
/// failures are reported, never thrown.
inline ClosenessReport two_adically_close(const QExpansion& f1, const QExpansion& f2, unsigned m, unsigned s,
                                          u64 prime_bound, unsigned ramification = 1) {
    Modulus modulus(m, ramification);
    if (prime_bound > f1.bound() || prime_bound > f2.bound()) {
        throw RangeError("two_adically_close: prime bound " + std::to_string(prime_bound) +
                         " exceeds a trusted bound");
    }
    if (s == 0) throw DomainError("two_adically_close: s must be positive");
    ClosenessReport r;
    BigInt two_s = BigInt(1) << s;
    r.weight_clause = (BigInt(f1.weight()) - BigInt(f2.weight())) % two_s == 0;
    std::int64_t a = alpha((m + ramification - 1) / ramification);
    r.alpha_clause = a >= 1 && static_cast<std::int64_t>(s) >= a;
    if (!r.weight_clause) {
        r.failure = "weights " + std::to_string(f1.weight()) + " and " + std::to_string(f2.weight()) +
                    " differ modulo 2^" + std::to_string(s);
        return r;
    }
    if (!r.alpha_clause) {
        r.failure = "need s >= alpha(ceil(m/e)) >= 1, got s = " + std::to_string(s) + ", alpha = " + std::to_string(a);
        return r;
    }
    u64 excluded = 2 * f1.level() * f2.level();
    for (u64 p : arith::primes_up_to(prime_bound)) {
        if (excluded % p == 0) continue;
        r.primes_checked.push_back(p);
        if (!modulus.divides(f1.at(p) - f2.at(p))) {
            r.witness_prime = p;
            r.failure = "a(" + std::to_string(p) + ") differ modulo 2^" + std::to_string(m);
            return r;
        }
    }
    r.close = true;
    return r;
}

/// First (p, n) with p <= prime_limit, p not dividing 2 N1 N2, p^n <= min
/// trusted bound and a_{f1}(p^n) != a_{f2}(p^n) mod 2^m; empty if none.
inline std::optional<std::pair<u64, unsigned>> prime_power_mismatch(const QExpansion& f1, const QExpansion& f2,
                                                                    const Modulus& modulus, u64 prime_limit) {
    u64 bound = std::min(f1.bound(), f2.bound());
    u64 excluded = 2 * f1.level() * f2.level();
    for (u64 p : arith::primes_up_to(std::min(prime_limit, bound))) {
        if (excluded % p == 0) continue;
        unsigned n = 1;
        for (u64 q = p; q <= bound; q *= p, ++n) {
            if (!modulus.divides(f1.at(q) - f2.at(q))) return std::make_pair(p, n);
            if (q > bound / p) break;
        }
    }
    return std::nullopt;
}

struct Mod4Class {
    bool consistent = false;  // a_p = +-(1 + p) (mod 4)
    int residue = 0;          // a_p mod 4 forced by p mod 4: 2 if p = 1, 0 if p = 3
};

inline int mod4(std::int64_t v) { return static_cast<int>(((v % 4) + 4) % 4); }

/// Classifies a_p against a_p = 1 + p or -(1 + p) (mod 4) for an odd prime p.
inline Mod4Class mod4_prime_class(std::int64_t a_p, u64 p) {
    if (p % 2 == 0) throw DomainError("mod4_prime_class: p must be odd");
    int plus = static_cast<int>((1 + p) % 4);
    int minus = (4 - plus) % 4;
    int r = mod4(a_p);
    return {r == plus || r == minus, p % 4 == 1 ? 2 : 0};
}

/// a(p^j) mod 4 from a(p) mod 4 via a(p^r) = a(p) a(p^{r-1}) - p a(p^{r-2}).
/// For p = 1 (mod 4) the residues cycle 1, 2, 3, 0 (j = 0, 1, 2, 3); for
/// p = 3 (mod 4) they alternate 1, 0.
inline int mod4_power_pattern(u64 p, unsigned j, int a_p_mod4) {
    if (p % 2 == 0) throw DomainError("mod4_power_pattern: p must be odd");
    int expected = p % 4 == 1 ? 2 : 0;
    if (((a_p_mod4 % 4) + 4) % 4 != expected) {
        throw DomainError("mod4_power_pattern: a(p) = " + std::to_string(a_p_mod4) + " (mod 4) is not possible for p = " +
                          std::to_string(p) + " under a cyclic 4-isogeny");
    }
    int pm = static_cast<int>(p % 4);
    int prev = 1, cur = expected;  // a(1), a(p)
    if (j == 0) return 1;
    for (unsigned r = 2; r <= j; ++r) {
        int next = ((expected * cur - pm * prev) % 4 + 4) % 4;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace nonvanish::congruence
