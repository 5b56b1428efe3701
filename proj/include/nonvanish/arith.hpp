#pragma once

// Exact integer utilities: factorization, quadratic residues, sums of two
// squares and prime generation. Everything here works on 64-bit unsigned
// integers; factorization targets inputs below ~10^12 but is correct for any
// uint64_t value.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "nonvanish/errors.hpp"

namespace nonvanish::arith {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct PrimePower {
    u64 prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization with strictly increasing primes and positive exponents.
/// The empty factorization represents 1.
struct Factorization {
    std::vector<PrimePower> factors;

    u64 value() const {
        u64 v = 1;
        for (const auto& [p, e] : factors) {
            for (unsigned i = 0; i < e; ++i) v *= p;
        }
        return v;
    }

    /// Exponent of p (0 when p does not divide).
    unsigned exponent_of(u64 p) const {
        for (const auto& f : factors) {
            if (f.prime == p) return f.exponent;
        }
        return 0;
    }

    friend bool operator==(const Factorization&, const Factorization&) = default;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Primes p <= limit in increasing order (Eratosthenes).
inline std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

namespace detail {

inline constexpr u64 kTrialLimit = 1'000'000;

inline const std::vector<u64>& trial_primes() {
    static const std::vector<u64> primes = primes_up_to(kTrialLimit);
    return primes;
}

inline u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
        u64 x = 2, y = 2, d = 1;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

inline void split_large(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

}  // namespace detail

/// Trial division by the sieved primes up to 10^6, then Pollard rho on any
/// remaining composite cofactor.
inline Factorization factorize(u64 n) {
    if (n == 0) throw DomainError("factorize: n must be positive");
    Factorization result;
    for (u64 p : detail::trial_primes()) {
        if (p * p > n) break;
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        result.factors.push_back({p, e});
    }
    if (n == 1) return result;
    std::vector<u64> rest;
    detail::split_large(n, rest);
    std::sort(rest.begin(), rest.end());
    for (u64 p : rest) {
        if (!result.factors.empty() && result.factors.back().prime == p) {
            ++result.factors.back().exponent;
        } else {
            result.factors.push_back({p, 1});
        }
    }
    return result;
}

/// True iff every prime = 3 (mod 4) divides the factored integer to an even power.
inline bool is_sum_of_two_squares(const Factorization& f) {
    return std::all_of(f.factors.begin(), f.factors.end(),
                       [](const PrimePower& pp) { return pp.prime % 4 != 3 || pp.exponent % 2 == 0; });
}

inline bool is_sum_of_two_squares(u64 n) {
    if (n == 0) throw DomainError("is_sum_of_two_squares: n must be positive");
    return is_sum_of_two_squares(factorize(n));
}

/// Legendre symbol (a/p) for an odd prime p.
inline int legendre_symbol(std::int64_t a, u64 p) {
    if (p == 2 || !is_prime(p)) throw DomainError("legendre_symbol: p must be an odd prime");
    std::int64_t sp = static_cast<std::int64_t>(p);
    u64 r = static_cast<u64>(((a % sp) + sp) % sp);
    if (r == 0) return 0;
    return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

namespace detail {

// x with x^2 = -1 (mod p) for a prime p = 1 (mod 4).
inline u64 sqrt_minus_one(u64 p) {
    for (u64 a = 2;; ++a) {
        if (pow_mod(a, (p - 1) / 2, p) == p - 1) return pow_mod(a, (p - 1) / 4, p);
    }
}

// Hermite-Serret descent: the first two remainders below sqrt(p) in the
// Euclidean algorithm on (p, x) give p = r1^2 + r2^2.
inline std::pair<u64, u64> prime_two_squares(u64 p) {
    if (p == 2) return {1, 1};
    u64 a = p, b = sqrt_minus_one(p);
    u64 limit = isqrt(p);
    while (b > limit) {
        u64 r = a % b;
        a = b;
        b = r;
    }
    u64 rest = p - b * b;
    return {isqrt(rest), b};
}

}  // namespace detail

/// A witness (a, b) with a^2 + b^2 = n and a <= b, or nothing when n is not a
/// sum of two squares. Built multiplicatively from per-prime representations.
inline std::optional<std::pair<u64, u64>> two_squares_witness(u64 n) {
    Factorization f = factorize(n);
    if (!is_sum_of_two_squares(f)) return std::nullopt;
    // Track a Gaussian integer x + iy with norm equal to the processed part.
    __int128 x = 1, y = 0;
    for (const auto& [p, e] : f.factors) {
        if (p % 4 == 3) {
            u64 scale = 1;
            for (unsigned i = 0; i < e / 2; ++i) scale *= p;
            x *= scale;
            y *= scale;
            continue;
        }
        auto [u, v] = detail::prime_two_squares(p);
        for (unsigned i = 0; i < e; ++i) {
            __int128 nx = x * static_cast<__int128>(u) - y * static_cast<__int128>(v);
            __int128 ny = x * static_cast<__int128>(v) + y * static_cast<__int128>(u);
            x = nx;
            y = ny;
        }
    }
    u64 a = static_cast<u64>(x < 0 ? -x : x);
    u64 b = static_cast<u64>(y < 0 ? -y : y);
    if (a > b) std::swap(a, b);
    return std::make_pair(a, b);
}

/// Smallest-prime-factor table on [0, limit], for fast repeated factorization
/// of every integer in a range.
class FactorSieve {
public:
    explicit FactorSieve(u64 limit) : spf_(limit + 1, 0) {
        for (u64 i = 2; i <= limit; ++i) {
            if (spf_[i]) continue;
            for (u64 j = i; j <= limit; j += i) {
                if (!spf_[j]) spf_[j] = static_cast<std::uint32_t>(i);
            }
        }
    }

    u64 limit() const { return spf_.size() - 1; }

    u64 smallest_prime_factor(u64 n) const { return spf_.at(n); }

    Factorization factorize(u64 n) const {
        if (n == 0) throw DomainError("factorize: n must be positive");
        if (n > limit()) return arith::factorize(n);
        Factorization f;
        while (n > 1) {
            u64 p = spf_[n];
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.factors.push_back({p, e});
        }
        return f;
    }

private:
    std::vector<std::uint32_t> spf_;
};

/// The odd part and the 2-adic valuation of n > 0.
inline std::pair<u64, unsigned> split_two(u64 n) {
    unsigned i = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++i;
    }
    return {n, i};
}

}  // namespace nonvanish::arith
