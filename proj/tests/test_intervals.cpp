#include <gtest/gtest.h>

#include <cmath>

#include "nonvanish/intervals.hpp"
#include "nonvanish/report_io.hpp"

using namespace nonvanish;
using namespace nonvanish::intervals;
using arith::u64;

namespace {

bool is_square(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n;
}

u64 gcd_u(u64 a, u64 b) { return b ? gcd_u(b, a % b) : a; }

// 2^i p^j m^2 by direct search over the prime p.
bool naive_hypothesis(u64 n, u64 big_n, bool strict) {
    if (gcd_u(n, big_n) != 1) return false;
    while (n % 2 == 0) n /= 2;
    if (!strict && is_square(n)) return true;
    for (u64 p = 5; p <= n; p += 4) {
        if (n % p || !arith::is_prime(p)) continue;
        u64 rest = n;
        unsigned j = 0;
        while (rest % p == 0) {
            rest /= p;
            ++j;
        }
        if (j % 4 != 3 && is_square(rest)) return true;
    }
    return false;
}

bool naive_s2s(u64 n, u64 big_n) {
    if (gcd_u(n, big_n) != 1) return false;
    for (u64 a = 0; a * a <= n; ++a) {
        if (is_square(n - a * a)) return true;
    }
    return false;
}

// floor(c X^{1/4}) for integer c, by counting.
u64 naive_length(u64 c, u64 x) {
    u64 len = 0;
    while ((len + 1) * (len + 1) * (len + 1) * (len + 1) <= c * c * c * c * x) ++len;
    return len;
}

}  // namespace

TEST(Intervals, HypothesisFormExamples) {
    auto d = hypothesis_form_check(104, 21);
    ASSERT_TRUE(d);
    EXPECT_EQ(*d, (HypothesisDecomposition{3, 13, 1, 1}));
    EXPECT_FALSE(hypothesis_form_check(250, 1));         // 5^3
    EXPECT_TRUE(hypothesis_form_check(441, 10));         // 21^2, j = 0
    EXPECT_FALSE(hypothesis_form_check(441, 10, {true}));
    EXPECT_FALSE(hypothesis_form_check(441, 21));
    EXPECT_FALSE(hypothesis_form_check(3, 1));
    EXPECT_FALSE(hypothesis_form_check(65, 1));          // two primes 1 mod 4 to odd powers
    auto strict = hypothesis_form_check(2 * 25 * 9, 7, {true});
    ASSERT_TRUE(strict);
    EXPECT_EQ(strict->p, 5u);
    EXPECT_EQ(strict->j, 2u);
    EXPECT_EQ(strict->m, 3u);
}

TEST(Intervals, HypothesisFormAgainstNaive) {
    for (u64 big_n : {1, 21, 42}) {
        for (bool strict : {false, true}) {
            for (u64 n = 1; n <= 20'000; ++n) {
                ASSERT_EQ(hypothesis_form_check(n, big_n, {strict}).has_value(), naive_hypothesis(n, big_n, strict))
                    << n << " N=" << big_n << " strict=" << strict;
            }
        }
    }
}

TEST(Intervals, DecompositionMultipliesBack) {
    for (u64 n = 1; n <= 20'000; ++n) {
        auto d = hypothesis_form_check(n, 1);
        if (!d) continue;
        u64 v = (u64{1} << d->i) * d->m * d->m;
        for (unsigned k = 0; k < d->j; ++k) v *= *d->p;
        ASSERT_EQ(v, n);
        ASSERT_EQ(d->m % 2, 1u);
        if (d->p) ASSERT_NE(d->m % *d->p, 0u);
    }
}

TEST(Intervals, IntervalLengthExact) {
    EXPECT_EQ(IntervalLength(Rational(1), Rational(1, 4))(16), 2u);
    EXPECT_EQ(IntervalLength(Rational(1), Rational(1, 4))(15), 1u);
    EXPECT_EQ(IntervalLength(Rational(1), Rational(1, 4))(81), 3u);
    EXPECT_EQ(IntervalLength(Rational(3, 2), Rational(1, 2))(4), 3u);
    EXPECT_EQ(IntervalLength(Rational(0), Rational(1, 4))(10'000), 0u);
    for (u64 x = 16; x <= 5000; ++x) {
        IntervalLength len(Rational(3), Rational(1, 4));
        ASSERT_EQ(len(x), naive_length(3, x)) << x;
        ASSERT_TRUE(len.at_least(x, len(x)));
        ASSERT_FALSE(len.at_least(x, len(x) + 1));
    }
    EXPECT_THROW(IntervalLength(Rational(-1), Rational(1, 4)), DomainError);
}

TEST(Intervals, ScanAgainstNaiveFilter) {
    for (u64 c : {1, 2, 3}) {
        auto r = scan_range({ScanKind::sum_of_two_squares, 48, {}}, 16, 10'000, Rational(c), Rational(1, 4));
        std::vector<u64> naive_failures;
        for (u64 x = 16; x <= 10'000; ++x) {
            u64 len = naive_length(c, x);
            bool found = false;
            for (u64 n = x + 1; n <= x + len && !found; ++n) found = naive_s2s(n, 48);
            if (!found) naive_failures.push_back(x);
            if (x % 97 == 0) {
                auto s = scan_s2s_interval(x, Rational(c), 48);
                ASSERT_EQ(s.has_value(), found) << x;
            }
        }
        EXPECT_EQ(r.failures, naive_failures) << "c=" << c;
    }
}

TEST(Intervals, HypothesisScanAgainstNaiveFilter) {
    auto r = scan_range({ScanKind::hypothesis_form, 42, {}}, 16, 10'000, Rational(4), Rational(1, 4));
    std::vector<u64> naive_failures;
    for (u64 x = 16; x <= 10'000; ++x) {
        u64 len = naive_length(4, x);
        bool found = false;
        for (u64 n = x + 1; n <= x + len && !found; ++n) found = naive_hypothesis(n, 42, false);
        if (!found) naive_failures.push_back(x);
    }
    EXPECT_EQ(r.failures, naive_failures);
}

TEST(Intervals, SingleXWithZeroConstantFails) {
    auto r = scan_range({ScanKind::sum_of_two_squares, 48, {}}, 10'000, 10'000, Rational(0), Rational(1, 4));
    EXPECT_EQ(r.failures, (std::vector<u64>{10'000}));
    EXPECT_FALSE(r.passed());
}

TEST(Intervals, TenTimesQuarterPowerSuffices) {
    auto r = scan_range({ScanKind::sum_of_two_squares, 48, {}}, 10'000, 100'000, Rational(10), Rational(1, 4));
    EXPECT_TRUE(r.passed());
    EXPECT_FALSE(r.witness_sample.empty());
    for (auto [x, n] : r.witness_sample) {
        EXPECT_GT(n, x);
        EXPECT_TRUE(arith::is_sum_of_two_squares(n));
    }
}

TEST(Intervals, EstimatedConstantIsMinimal) {
    ScanPredicate pred{ScanKind::sum_of_two_squares, 48, {}};
    auto r = estimate_constant(pred, 1000, 30'000, Rational(1, 4));
    EXPECT_TRUE(r.passed());
    auto lower = scan_range(pred, 1000, 30'000, r.c - Rational(1, 1'000'000), Rational(1, 4));
    EXPECT_FALSE(lower.passed());
}

TEST(Intervals, Errors) {
    ScanPredicate pred{ScanKind::sum_of_two_squares, 48, {}};
    EXPECT_THROW(scan_range(pred, 10, 100, Rational(1), Rational(1, 4)), DomainError);
    EXPECT_THROW(scan_range(pred, 200, 100, Rational(1), Rational(1, 4)), DomainError);
    // Every integer in (16, 32] shares a factor with the primorial.
    ScanPredicate empty{ScanKind::sum_of_two_squares, 200'560'490'130ULL, {}};
    EXPECT_THROW(scan_range(empty, 16, 20, Rational(1), Rational(1, 4)), EmptyDataError);
    EXPECT_THROW(scan_interval(0, Rational(1), Rational(1, 4), pred), DomainError);
}

TEST(Intervals, EstimateDeltaReport) {
    auto r = estimate_delta(42, 10'000, 200'000);
    ASSERT_TRUE(r.fitted_delta.has_value());
    EXPECT_GT(*r.fitted_delta, 0.0);
    EXPECT_LT(*r.fitted_delta, 1.0);
    EXPECT_EQ(r.implied_c.size(), 5u);
    u64 total = 0;
    for (auto [g, cnt] : r.gap_histogram) total += cnt;
    EXPECT_GT(total, 0u);
    EXPECT_TRUE(r.passed());
}

TEST(Intervals, ReportsIndependentOfWorkers) {
    ScanPredicate pred{ScanKind::hypothesis_form, 42, {}};
    for (auto fmt : {report::Format::csv, report::Format::json, report::Format::text}) {
        auto a = report::render(scan_range(pred, 10'000, 150'000, Rational(5), Rational(1, 4), 1), fmt);
        auto b = report::render(scan_range(pred, 10'000, 150'000, Rational(5), Rational(1, 4), 4), fmt);
        EXPECT_EQ(a, b);
    }
    auto e1 = report::render(estimate_delta(42, 10'000, 150'000, {}, 1), report::Format::json);
    auto e3 = report::render(estimate_delta(42, 10'000, 150'000, {}, 3), report::Format::json);
    EXPECT_EQ(e1, e3);
}

TEST(Intervals, CsvSchema) {
    auto r = scan_range({ScanKind::sum_of_two_squares, 48, {}}, 100, 200, Rational(5), Rational(1, 4));
    std::string csv = report::render(r, report::Format::csv);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "X,next_qualifying_n,gap,gap/X^{1/4}");
}
