#pragma once

// Counting points on reductions E mod p and the trace of Frobenius a_p.
//
// Two counters are provided:
//   * a Legendre-symbol sum over x after completing the square, O(p) per
//     prime, exact for every p (direct enumeration for p = 2, 3);
//   * baby-step/giant-step order finding in the Hasse interval with Mestre's
//     quadratic-twist trick, O(p^{1/4}) per prime, used for p >= 1000 in
//     automatic mode and regression-gated against the Legendre counter.

#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "nonvanish/arith.hpp"
#include "nonvanish/elliptic.hpp"
#include "nonvanish/errors.hpp"

namespace nonvanish::elliptic {

using arith::u64;

/// Primes above this are refused by every counter.
inline constexpr u64 kMaxCountingPrime = 100'000'000;

enum class CountMethod { legendre, bsgs, automatic };

namespace detail {

inline void check_counting_prime(u64 p) {
    if (p > kMaxCountingPrime) {
        throw RangeError("prime " + std::to_string(p) + " exceeds the point-counting range");
    }
    if (!arith::is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
}

// Direct enumeration of affine solutions of the long Weierstrass equation.
inline u64 count_enumerate(const CurveQ& e, u64 p) {
    u64 a1 = mod_u64(e.a1(), p), a2 = mod_u64(e.a2(), p), a3 = mod_u64(e.a3(), p);
    u64 a4 = mod_u64(e.a4(), p), a6 = mod_u64(e.a6(), p);
    u64 count = 1;
    for (u64 x = 0; x < p; ++x) {
        u64 rhs = (((x + a2) * x + a4) * x + a6) % p;
        for (u64 y = 0; y < p; ++y) {
            u64 lhs = (y * y + a1 * x * y + a3 * y) % p;
            if (lhs == rhs) ++count;
        }
    }
    return count;
}

// p + 1 + sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6), p odd.
inline u64 count_legendre(const CurveQ& e, u64 p) {
    const auto& inv = e.invariants();
    u64 c3 = 4 % p, c2 = mod_u64(inv.b2, p), c1 = mod_u64(2 * inv.b4, p), c0 = mod_u64(inv.b6, p);
    std::vector<std::int8_t> chi(p, -1);
    chi[0] = 0;
    for (u64 x = 1; x <= (p - 1) / 2; ++x) chi[arith::mul_mod(x, x, p)] = 1;
    std::int64_t sum = 0;
    for (u64 x = 0; x < p; ++x) {
        u64 v = arith::mul_mod(c3, x, p) + c2;
        v = arith::mul_mod(v % p, x, p) + c1;
        v = arith::mul_mod(v % p, x, p) + c0;
        sum += chi[v % p];
    }
    return static_cast<u64>(static_cast<std::int64_t>(p) + 1 + sum);
}

// -- arithmetic on y^2 = x^3 + A x + B over F_p, p >= 5 ----------------------

struct ModPoint {
    u64 x = 0, y = 0;
    bool inf = true;
};

class ShortCurveModP {
public:
    ShortCurveModP(u64 a, u64 b, u64 p) : a_(a), b_(b), p_(p) {}

    u64 prime() const { return p_; }
    u64 rhs(u64 x) const { return (arith::mul_mod((arith::mul_mod(x, x, p_) + a_) % p_, x, p_) + b_) % p_; }

    ModPoint add(const ModPoint& P, const ModPoint& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        u64 lambda;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p_ == 0) return {};
            u64 num = (3 * arith::mul_mod(P.x, P.x, p_) + a_) % p_;
            lambda = arith::mul_mod(num, inverse(2 * P.y % p_), p_);
        } else {
            u64 num = (Q.y + p_ - P.y) % p_;
            lambda = arith::mul_mod(num, inverse((Q.x + p_ - P.x) % p_), p_);
        }
        u64 x3 = (arith::mul_mod(lambda, lambda, p_) + 2 * p_ - P.x - Q.x) % p_;
        u64 y3 = (arith::mul_mod(lambda, (P.x + p_ - x3) % p_, p_) + p_ - P.y) % p_;
        return {x3, y3, false};
    }

    ModPoint negate(const ModPoint& P) const {
        if (P.inf) return P;
        return {P.x, (p_ - P.y) % p_, false};
    }

    ModPoint multiply(ModPoint P, u64 k) const {
        ModPoint acc;
        while (k) {
            if (k & 1) acc = add(acc, P);
            k >>= 1;
            if (k) P = add(P, P);
        }
        return acc;
    }

    // Tonelli-Shanks; requires v to be a nonzero square.
    u64 sqrt(u64 v) const {
        if (v == 0) return 0;
        if (p_ % 4 == 3) return arith::pow_mod(v, (p_ + 1) / 4, p_);
        u64 q = p_ - 1;
        unsigned s = 0;
        while (q % 2 == 0) {
            q /= 2;
            ++s;
        }
        u64 z = 2;
        while (arith::pow_mod(z, (p_ - 1) / 2, p_) != p_ - 1) ++z;
        u64 m = s, c = arith::pow_mod(z, q, p_), t = arith::pow_mod(v, q, p_), r = arith::pow_mod(v, (q + 1) / 2, p_);
        while (t != 1) {
            u64 i = 0, tt = t;
            while (tt != 1) {
                tt = arith::mul_mod(tt, tt, p_);
                ++i;
            }
            u64 b = c;
            for (u64 k = 0; k + 1 < m - i; ++k) b = arith::mul_mod(b, b, p_);
            m = i;
            c = arith::mul_mod(b, b, p_);
            t = arith::mul_mod(t, c, p_);
            r = arith::mul_mod(r, b, p_);
        }
        return r;
    }

    template <class Rng>
    ModPoint random_point(Rng& rng) const {
        std::uniform_int_distribution<u64> dist(0, p_ - 1);
        while (true) {
            u64 x = dist(rng);
            u64 v = rhs(x);
            if (v == 0) return {x, 0, false};
            if (arith::pow_mod(v, (p_ - 1) / 2, p_) == 1) {
                u64 y = sqrt(v);
                if (dist(rng) & 1) y = (p_ - y) % p_;
                return {x, y, false};
            }
        }
    }

    /// Exact order of P given that the group order lies in [lo, hi].
    std::optional<u64> order_in_interval(const ModPoint& P, u64 lo, u64 hi) const {
        if (P.inf) return 1;
        u64 width = hi - lo + 1;
        u64 m = arith::isqrt(width) + 1;
        std::unordered_map<u64, u64> baby;
        baby.reserve(2 * m);
        ModPoint step;
        for (u64 j = 0; j < m; ++j) {
            baby.emplace(key(step), j);
            step = add(step, P);
        }
        ModPoint giant_step = step;  // m P
        ModPoint r = multiply(P, lo);
        std::optional<u64> t0;
        for (u64 i = 0; i * m <= width; ++i) {
            auto it = baby.find(key(negate(r)));
            if (it != baby.end()) {
                t0 = lo + i * m + it->second;
                break;
            }
            r = add(r, giant_step);
        }
        if (!t0 || *t0 == 0) return std::nullopt;
        u64 order = *t0;
        for (const auto& [q, e] : arith::factorize(order).factors) {
            for (unsigned k = 0; k < e; ++k) {
                if (!multiply(P, order / q).inf) break;
                order /= q;
            }
        }
        return order;
    }

private:
    u64 key(const ModPoint& P) const { return P.inf ? ~u64{0} : P.x * p_ + P.y; }

    u64 inverse(u64 a) const {
        std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(p_), nr = static_cast<std::int64_t>(a);
        while (nr) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        return static_cast<u64>(t < 0 ? t + static_cast<std::int64_t>(p_) : t);
    }

    u64 a_, b_, p_;
};

inline u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

}  // namespace detail

/// #E(F_p) by baby-step/giant-step, or nothing when the random points did not
/// isolate a unique candidate (small p, or extremely unlucky sampling).
/// Requires p >= 5 and good reduction at p.
inline std::optional<u64> count_points_bsgs(const CurveQ& e, u64 p, unsigned max_points = 40) {
    detail::check_counting_prime(p);
    if (p < 5) return std::nullopt;
    if (e.discriminant() % p == 0) throw WrongReductionError("count_points_bsgs needs good reduction at p");
    // y^2 = x^3 - 27 c4 x - 54 c6 is isomorphic to E over F_p for p > 3.
    u64 a = mod_u64(-27 * e.c4(), p), b = mod_u64(-54 * e.c6(), p);
    u64 d = 2;
    while (arith::pow_mod(d, (p - 1) / 2, p) != p - 1) ++d;
    u64 d2 = arith::mul_mod(d, d, p), d3 = arith::mul_mod(d2, d, p);
    detail::ShortCurveModP curve(a, b, p);
    detail::ShortCurveModP twist(arith::mul_mod(a, d2, p), arith::mul_mod(b, d3, p), p);

    u64 s = arith::isqrt(4 * p);
    u64 lo = p + 1 - s, hi = p + 1 + s;
    std::mt19937_64 rng(p * 0x9E3779B97F4A7C15ULL);
    u64 lcm_e = 1, lcm_t = 1;
    for (unsigned round = 0; round < max_points; ++round) {
        const auto& c = (round % 2 == 0) ? curve : twist;
        auto order = c.order_in_interval(c.random_point(rng), lo, hi);
        if (!order) return std::nullopt;
        (round % 2 == 0 ? lcm_e : lcm_t) = detail::lcm_u64(round % 2 == 0 ? lcm_e : lcm_t, *order);
        // #E + #E' = 2p + 2.
        std::optional<u64> unique;
        bool ambiguous = false;
        for (u64 n = (lo + lcm_e - 1) / lcm_e * lcm_e; n <= hi; n += lcm_e) {
            if ((2 * p + 2 - n) % lcm_t != 0) continue;
            if (unique) {
                ambiguous = true;
                break;
            }
            unique = n;
        }
        if (unique && !ambiguous) return unique;
    }
    return std::nullopt;
}

/// #E~(F_p) for the reduction of the given model, singular point included.
inline u64 count_points(const CurveQ& e, u64 p, CountMethod method = CountMethod::automatic) {
    detail::check_counting_prime(p);
    if (p <= 3) return detail::count_enumerate(e, p);
    bool good = e.discriminant() % p != 0;
    if (good && (method == CountMethod::bsgs || (method == CountMethod::automatic && p >= 1000))) {
        if (auto n = count_points_bsgs(e, p)) return *n;
    }
    return detail::count_legendre(e, p);
}

/// a_p = p + 1 - #E(F_p) at a prime of good reduction.
inline std::int64_t ap_good(const CurveQ& e, u64 p, CountMethod method = CountMethod::automatic) {
    detail::check_counting_prime(p);
    if (e.discriminant() % p == 0) {
        throw WrongReductionError("ap_good: " + e.describe() + " has bad reduction at " + std::to_string(p));
    }
    return static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(count_points(e, p, method));
}

/// a_p at a prime of bad reduction of a model minimal at p: p - #E_ns(F_p),
/// where E_ns drops the single singular point. Lands in {-1, 0, 1}.
inline std::int64_t ap_bad(const CurveQ& e, u64 p) {
    detail::check_counting_prime(p);
    if (e.discriminant() % p != 0) {
        throw WrongReductionError("ap_bad: " + e.describe() + " has good reduction at " + std::to_string(p));
    }
    u64 all = p <= 3 ? detail::count_enumerate(e, p) : detail::count_legendre(e, p);
    std::int64_t ap = static_cast<std::int64_t>(p) - static_cast<std::int64_t>(all - 1);
    if (ap < -1 || ap > 1) {
        throw DomainError("ap_bad: model of " + e.describe() + " does not look minimal at " + std::to_string(p));
    }
    if (reduction_type(e, p) == ReductionType::additive && ap != 0) {
        throw DomainError("ap_bad: inconsistent additive reduction at " + std::to_string(p));
    }
    return ap;
}

/// a_p at any prime, dispatching on the reduction type.
inline std::int64_t ap(const CurveQ& e, u64 p, CountMethod method = CountMethod::automatic) {
    return e.discriminant() % p == 0 ? ap_bad(e, p) : ap_good(e, p, method);
}

}  // namespace nonvanish::elliptic
