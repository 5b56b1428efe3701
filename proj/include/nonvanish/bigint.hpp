#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "nonvanish/errors.hpp"

namespace nonvanish {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// num/den in lowest terms. The sign is moved to the numerator first; the
/// cpp_rational constructor mishandles negative denominators.
inline Rational make_rational(BigInt num, BigInt den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

inline BigInt parse_bigint(std::string_view text) {
    std::string s(text);
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) throw SchemaError("empty integer literal");
    for (std::size_t k = i; k < s.size(); ++k) {
        if (s[k] < '0' || s[k] > '9') throw SchemaError("not a decimal integer: '" + s + "'");
    }
    if (s[0] == '+') s.erase(0, 1);
    return BigInt(s);
}

/// Parses "a", "a/b" or a plain decimal "1.25" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (auto slash = s.find('/'); slash != std::string::npos) {
        BigInt num = parse_bigint(s.substr(0, slash));
        BigInt den = parse_bigint(s.substr(slash + 1));
        if (den == 0) throw DomainError("zero denominator in '" + s + "'");
        return make_rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string frac = s.substr(dot + 1);
        std::string whole = s.substr(0, dot);
        bool negative = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
        BigInt w = parse_bigint(whole);
        BigInt f = frac.empty() ? BigInt(0) : parse_bigint(frac);
        if (f < 0 || (!frac.empty() && (frac[0] == '-' || frac[0] == '+'))) {
            throw SchemaError("not a decimal number: '" + s + "'");
        }
        BigInt num = w * den;
        if (w < 0 || negative) {
            num -= f;
        } else {
            num += f;
        }
        return Rational(num, den);
    }
    return Rational(parse_bigint(s));
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const Rational& v) {
    if (denominator(v) == 1) return numerator(v).str();
    return numerator(v).str() + "/" + denominator(v).str();
}

/// Least non-negative residue of v modulo m (m > 0).
inline std::uint64_t mod_u64(const BigInt& v, std::uint64_t m) {
    BigInt r = v % m;
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
}

/// floor(n^(1/k)) for n >= 0, k >= 1.
inline BigInt iroot(const BigInt& n, unsigned k) {
    if (n < 0) throw DomainError("iroot of a negative number");
    if (n < 2 || k == 1) return n;
    // Newton iteration from an upper bound 2^ceil(bits/k).
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
    BigInt x = BigInt(1) << ((bits + k - 1) / k);
    while (true) {
        BigInt y = ((k - 1) * x + n / boost::multiprecision::pow(x, k - 1)) / k;
        if (y >= x) break;
        x = y;
    }
    while (boost::multiprecision::pow(x, k) > n) --x;
    while (boost::multiprecision::pow(x + 1, k) <= n) ++x;
    return x;
}

}  // namespace nonvanish
