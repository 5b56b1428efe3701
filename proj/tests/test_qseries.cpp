#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>

#include "nonvanish/qexp_io.hpp"
#include "nonvanish/qseries.hpp"

using namespace nonvanish;
using namespace nonvanish::qseries;
using arith::u64;

namespace {

const elliptic::CurveQ E24(0, -1, 0, -64, 220, std::string("24a3"), 24);
const elliptic::CurveQ E0(1, 1, 1, -1344, 18405, std::string("E0"), 42);

std::vector<BigInt> ints(std::initializer_list<long long> v) { return {v.begin(), v.end()}; }

BigInt sigma(u64 n, unsigned k) {
    BigInt s = 0;
    for (u64 d = 1; d <= n; ++d) {
        if (n % d == 0) s += boost::multiprecision::pow(BigInt(d), k);
    }
    return s;
}

}  // namespace

TEST(QSeries, CurveCoefficientsTo30) {
    QExpansion f = from_curve(E24, 24, 30);
    EXPECT_EQ(f.coefficients(), ints({0, 1, 0, -1, 0, -2, 0, 0, 0, 1, 0, 4, 0, -2, 0, 2, 0, 2, 0, -4,
                                      0, 0, 0, -8, 0, -1, 0, -1, 0, 6, 0}));
    EXPECT_EQ(f.weight(), 2u);
    EXPECT_EQ(f.level(), 24u);
    EXPECT_TRUE(f.normalized());
}

TEST(QSeries, PrimeSquareFromDirectCount) {
    // a(25) = a5^2 - 5 for every good-at-5 curve.
    QExpansion f = from_curve(E0, 42, 25);
    EXPECT_EQ(f.at(25), f.at(5) * f.at(5) - 5);
    EXPECT_EQ(f.at(25), -1);
}

TEST(QSeries, LevelMismatchRejected) {
    EXPECT_THROW(from_curve(E24, 48, 10), DomainError);
    elliptic::CurveQ unlabeled(0, -1, 0, -64, 220);
    EXPECT_THROW(from_curve(unlabeled, 15, 10), DomainError);  // 5 divides 15 but not the discriminant
    EXPECT_NO_THROW(from_curve(unlabeled, 6, 10));
}

TEST(QSeries, HeckeMultiplicativeToBound) {
    QExpansion f = from_curve(E0, 42, 20'000);
    for (u64 m = 2; m <= 141; ++m) {
        for (u64 n = 2; m * n <= f.bound(); ++n) {
            if (std::gcd(m, n) == 1) ASSERT_EQ(f.at(m * n), f.at(m) * f.at(n)) << m << "*" << n;
        }
    }
    // Prime-power recursion at good and bad primes.
    for (u64 p : {5, 11, 13}) EXPECT_EQ(f.at(p * p * p), f.at(p) * f.at(p * p) - BigInt(p) * f.at(p));
    EXPECT_EQ(f.at(8), 1);  // 2 | 42: a(2)^3
    EXPECT_EQ(f.at(343), -1);
}

TEST(QSeries, HeckeExtendErrors) {
    std::map<u64, BigInt> a{{2, 1}, {3, 0}};
    EXPECT_THROW(hecke_extend(a, 2, 11, 10), IncompleteInputError);
    EXPECT_THROW(hecke_extend(a, 3, 11, 3), DomainError);
    auto c = hecke_extend(a, 4, 6, 4);
    EXPECT_EQ(c, ints({0, 1, 1, 0, 1}));
}

TEST(QSeries, CauchyProductAgainstNaive) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-50, 50);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BigInt> a(60), b(60);
        for (auto& v : a) v = d(rng);
        for (auto& v : b) v = d(rng);
        QExpansion f(2, 4, a), g(4, 6, b);
        u64 bound = 40 + trial % 20;
        QExpansion h = series_multiply(f, g, bound);
        for (u64 n = 0; n <= bound; ++n) {
            BigInt s = 0;
            for (u64 i = 0; i <= n; ++i) s += a[i] * b[n - i];
            ASSERT_EQ(h.at(n), s);
        }
        EXPECT_EQ(h.weight(), 6u);
        EXPECT_EQ(h.level(), 12u);
        EXPECT_EQ(h.bound(), bound);
    }
    QExpansion f(2, 1, ints({0, 1, 2}));
    EXPECT_THROW(series_multiply(f, f, 3), RangeError);
}

TEST(QSeries, EisensteinE4) {
    QExpansion e4 = eisenstein_e4(200);
    EXPECT_EQ(e4.at(0), 1);
    EXPECT_EQ(e4.at(1), 240);
    EXPECT_EQ(e4.at(2), 2160);
    EXPECT_EQ(e4.at(3), 6720);
    for (u64 n = 1; n <= 200; ++n) ASSERT_EQ(e4.at(n), 240 * sigma(n, 3)) << n;
    // E4^2 = E8 = 1 + 480 sum sigma_7(n) q^n.
    QExpansion e8 = series_multiply(e4, e4, 60);
    for (u64 n = 1; n <= 60; ++n) ASSERT_EQ(e8.at(n), 480 * sigma(n, 7)) << n;
    QExpansion f = from_curve(E24, 24, 50);
    EXPECT_EQ(times_e4_power(f, 2, 50), series_multiply(series_multiply(f, e4.truncated(50), 50), e4.truncated(50), 50));
}

TEST(QSeries, TrustedBound) {
    QExpansion f(2, 11, ints({0, 1, -2, -1}), "f");
    EXPECT_EQ(f.bound(), 3u);
    EXPECT_THROW(f.at(4), RangeError);
    EXPECT_THROW(f.truncated(5), RangeError);
    EXPECT_EQ(f.truncated(2).bound(), 2u);
    EXPECT_THROW(QExpansion(3, 11, ints({0, 1})), DomainError);
    EXPECT_THROW(QExpansion(2, 0, ints({0, 1})), DomainError);
    EXPECT_THROW(QExpansion(2, 11, ints({0, 2}), "g", true), DomainError);
}

TEST(QSeries, InterchangeRoundTrip) {
    QExpansion f = from_curve(E0, 42, 300);
    json rec = store_qexp(f);
    EXPECT_EQ(load_qexp(rec), f);
    EXPECT_EQ(load_qexp(json::parse(rec.dump())), f);
    // Huge coefficients survive as strings.
    QExpansion big(12, 1, {BigInt(0), BigInt(1), BigInt("-123456789012345678901234567890")}, "big");
    EXPECT_EQ(load_qexp(store_qexp(big)), big);
}

TEST(QSeries, InterchangeSchemaErrors) {
    json good = store_qexp(QExpansion(4, 15, ints({0, 1, 1, 3}), "x", true));
    auto broken = [&](const std::function<void(json&)>& edit) {
        json r = good;
        edit(r);
        return r;
    };
    EXPECT_THROW(load_qexp(broken([](json& r) { r.erase("weight"); })), SchemaError);
    EXPECT_THROW(load_qexp(broken([](json& r) { r["weight"] = 3; })), SchemaError);
    EXPECT_THROW(load_qexp(broken([](json& r) { r["level"] = 0; })), SchemaError);
    EXPECT_THROW(load_qexp(broken([](json& r) { r["coefficients"] = json::array(); })), SchemaError);
    EXPECT_THROW(load_qexp(broken([](json& r) { r["coefficients"][2] = 1; })), SchemaError);
    EXPECT_THROW(load_qexp(broken([](json& r) { r["coefficients"][2] = "1.5"; })), SchemaError);
    EXPECT_THROW(load_qexp(broken([](json& r) { r["coefficients"][1] = "2"; })), SchemaError);
    EXPECT_THROW(load_qexp(broken([](json& r) { r["normalized"] = "yes"; })), SchemaError);
    EXPECT_THROW(read_json_file("/nonexistent/forms.json"), SchemaError);
}

TEST(QSeries, WorkerCountDoesNotChangeCoefficients) {
    EXPECT_EQ(from_curve(E24, 24, 20'000, elliptic::CountMethod::automatic, 1),
              from_curve(E24, 24, 20'000, elliptic::CountMethod::automatic, 4));
}
