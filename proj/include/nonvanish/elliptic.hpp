#pragma once

// Rational elliptic curves in long Weierstrass form
//
//     y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6,
//
// their standard invariants, reduction types and the rational group law.
//
// Minimality: every curve handed to reduction_type / ap_bad / from_curve is
// assumed to be a global minimal model. No Tate's algorithm is run; the
// shipped fixtures are all minimal Cremona models.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "nonvanish/bigint.hpp"
#include "nonvanish/errors.hpp"

namespace nonvanish::elliptic {

struct Invariants {
    BigInt b2, b4, b6, b8;
    BigInt c4, c6, discriminant;
    std::optional<Rational> j;  // absent iff the discriminant vanishes
};

inline Invariants compute_invariants(const BigInt& a1, const BigInt& a2, const BigInt& a3, const BigInt& a4,
                                     const BigInt& a6) {
    Invariants inv;
    inv.b2 = a1 * a1 + 4 * a2;
    inv.b4 = 2 * a4 + a1 * a3;
    inv.b6 = a3 * a3 + 4 * a6;
    inv.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    inv.c4 = inv.b2 * inv.b2 - 24 * inv.b4;
    inv.c6 = -inv.b2 * inv.b2 * inv.b2 + 36 * inv.b2 * inv.b4 - 216 * inv.b6;
    inv.discriminant = -inv.b2 * inv.b2 * inv.b8 - 8 * inv.b4 * inv.b4 * inv.b4 - 27 * inv.b6 * inv.b6 +
                       9 * inv.b2 * inv.b4 * inv.b6;
    if (inv.discriminant != 0) inv.j = make_rational(inv.c4 * inv.c4 * inv.c4, inv.discriminant);
    return inv;
}

/// A nonsingular rational elliptic curve with integral Weierstrass coefficients.
class CurveQ {
public:
    CurveQ(BigInt a1, BigInt a2, BigInt a3, BigInt a4, BigInt a6, std::optional<std::string> label = std::nullopt,
           std::optional<std::uint64_t> conductor = std::nullopt)
        : a1_(std::move(a1)),
          a2_(std::move(a2)),
          a3_(std::move(a3)),
          a4_(std::move(a4)),
          a6_(std::move(a6)),
          label_(std::move(label)),
          conductor_(conductor),
          inv_(compute_invariants(a1_, a2_, a3_, a4_, a6_)) {
        if (inv_.discriminant == 0) throw SingularCurveError("curve " + describe() + " has zero discriminant");
        if (conductor_ && *conductor_ == 0) throw DomainError("conductor must be positive");
    }

    const BigInt& a1() const { return a1_; }
    const BigInt& a2() const { return a2_; }
    const BigInt& a3() const { return a3_; }
    const BigInt& a4() const { return a4_; }
    const BigInt& a6() const { return a6_; }
    const std::optional<std::string>& label() const { return label_; }
    const std::optional<std::uint64_t>& conductor() const { return conductor_; }

    /// Caller-asserted: isogenies are never computed here.
    bool has_cyclic_4_isogeny() const { return cyclic_4_isogeny_; }
    void set_has_cyclic_4_isogeny(bool flag) { cyclic_4_isogeny_ = flag; }

    const Invariants& invariants() const { return inv_; }
    const BigInt& discriminant() const { return inv_.discriminant; }
    const BigInt& c4() const { return inv_.c4; }
    const BigInt& c6() const { return inv_.c6; }
    const Rational& j_invariant() const { return *inv_.j; }

    std::string describe() const {
        std::string s = "[" + a1_.str() + "," + a2_.str() + "," + a3_.str() + "," + a4_.str() + "," + a6_.str() + "]";
        return label_ ? *label_ + " " + s : s;
    }

    friend bool operator==(const CurveQ& a, const CurveQ& b) {
        return a.a1_ == b.a1_ && a.a2_ == b.a2_ && a.a3_ == b.a3_ && a.a4_ == b.a4_ && a.a6_ == b.a6_;
    }

private:
    BigInt a1_, a2_, a3_, a4_, a6_;
    std::optional<std::string> label_;
    std::optional<std::uint64_t> conductor_;
    bool cyclic_4_isogeny_ = false;
    Invariants inv_;
};

/// (c4, c6, discriminant, j) of a curve. Throws SingularCurveError for raw
/// coefficients with zero discriminant.
inline Invariants invariants_of(const CurveQ& curve) { return curve.invariants(); }

enum class ReductionType { good, multiplicative, additive };

inline const char* to_string(ReductionType t) {
    switch (t) {
        case ReductionType::good: return "good";
        case ReductionType::multiplicative: return "multiplicative";
        case ReductionType::additive: return "additive";
    }
    return "?";
}

inline std::ostream& operator<<(std::ostream& os, ReductionType t) { return os << to_string(t); }

/// Reduction type at p of a model assumed minimal at p.
inline ReductionType reduction_type(const CurveQ& curve, std::uint64_t p) {
    if (curve.discriminant() % p != 0) return ReductionType::good;
    return curve.c4() % p != 0 ? ReductionType::multiplicative : ReductionType::additive;
}

// ---------------------------------------------------------------------------
// Rational points and the group law.

struct CurvePoint {
    bool infinity = true;
    Rational x, y;

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(Rational x, Rational y) { return {false, std::move(x), std::move(y)}; }

    friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
};

inline std::ostream& operator<<(std::ostream& os, const CurvePoint& p) {
    if (p.infinity) return os << "O";
    return os << "(" << nonvanish::to_string(p.x) << ", " << nonvanish::to_string(p.y) << ")";
}

inline bool on_curve(const CurveQ& e, const CurvePoint& p) {
    if (p.infinity) return true;
    const Rational& x = p.x;
    const Rational& y = p.y;
    Rational lhs = y * y + Rational(e.a1()) * x * y + Rational(e.a3()) * y;
    Rational rhs = x * x * x + Rational(e.a2()) * x * x + Rational(e.a4()) * x + Rational(e.a6());
    return lhs == rhs;
}

inline CurvePoint negate(const CurveQ& e, const CurvePoint& p) {
    if (p.infinity) return p;
    return CurvePoint::affine(p.x, -p.y - Rational(e.a1()) * p.x - Rational(e.a3()));
}

inline CurvePoint group_add(const CurveQ& e, const CurvePoint& p, const CurvePoint& q) {
    if (!on_curve(e, p) || !on_curve(e, q)) throw DomainError("group_add: point not on " + e.describe());
    if (p.infinity) return q;
    if (q.infinity) return p;
    const Rational a1(e.a1()), a2(e.a2()), a3(e.a3()), a4(e.a4()), a6(e.a6());
    Rational lambda, nu;
    if (p.x == q.x) {
        if (p.y + q.y + a1 * q.x + a3 == 0) return CurvePoint::at_infinity();
        Rational denom = 2 * p.y + a1 * p.x + a3;
        lambda = (3 * p.x * p.x + 2 * a2 * p.x + a4 - a1 * p.y) / denom;
        nu = (-p.x * p.x * p.x + a4 * p.x + 2 * a6 - a3 * p.y) / denom;
    } else {
        lambda = (q.y - p.y) / (q.x - p.x);
        nu = (p.y * q.x - q.y * p.x) / (q.x - p.x);
    }
    Rational x3 = lambda * lambda + a1 * lambda - a2 - p.x - q.x;
    Rational y3 = -(lambda + a1) * x3 - nu - a3;
    return CurvePoint::affine(std::move(x3), std::move(y3));
}

inline CurvePoint multiply(const CurveQ& e, CurvePoint p, std::uint64_t k) {
    CurvePoint acc = CurvePoint::at_infinity();
    while (k) {
        if (k & 1) acc = group_add(e, acc, p);
        k >>= 1;
        if (k) p = group_add(e, p, p);
    }
    return acc;
}

/// Least k <= max_order with kP = O, or nothing.
inline std::optional<unsigned> point_order(const CurveQ& e, const CurvePoint& p, unsigned max_order) {
    if (!on_curve(e, p)) throw DomainError("point_order: point not on " + e.describe());
    CurvePoint acc = p;
    for (unsigned k = 1; k <= max_order; ++k) {
        if (acc.infinity) return k;
        acc = group_add(e, acc, p);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// The family E_t : y^2 = x^3 - (2t - 1) x^2 + t^2 x, with 4-torsion point (t, t).

namespace detail {

inline void check_family_parameter(const Rational& t) {
    if (t == 0 || t == Rational(1, 4)) {
        throw SingularCurveError("E_t is singular for t = " + nonvanish::to_string(t));
    }
}

}  // namespace detail

/// The member E_t with coefficients scaled by u = denominator(t) so they are
/// integral: a2 = -(2rs - s^2), a4 = r^2 s^2 for t = r/s.
inline CurveQ family_Et(const Rational& t) {
    detail::check_family_parameter(t);
    BigInt r = numerator(t), s = denominator(t);
    return CurveQ(0, -(2 * r * s - s * s), 0, r * r * s * s, 0, "E_t(t=" + nonvanish::to_string(t) + ")");
}

/// Image of (t, t) on family_Et(t) under the same scaling: (r s, r s^2).
inline CurvePoint family_Et_point(const Rational& t) {
    detail::check_family_parameter(t);
    BigInt r = numerator(t), s = denominator(t);
    return CurvePoint::affine(Rational(r * s), Rational(r * s * s));
}

}  // namespace nonvanish::elliptic
