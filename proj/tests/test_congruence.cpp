#include <gtest/gtest.h>

#include <map>
#include <random>

#include "nonvanish/congruence.hpp"
#include "nonvanish/qseries.hpp"

using namespace nonvanish;
using namespace nonvanish::congruence;
using arith::u64;
using qseries::QExpansion;

namespace {

const elliptic::CurveQ E24(0, -1, 0, -64, 220, std::string("24a3"), 24);
const elliptic::CurveQ E15(1, 1, 1, -80, 242, std::string("15a7"), 15);
const elliptic::CurveQ E32(0, 0, 0, -11, 14, std::string("32a4"), 32);

QExpansion form(unsigned w, u64 level, std::initializer_list<long long> a, const char* label) {
    return QExpansion(w, level, std::vector<BigInt>(a.begin(), a.end()), label);
}

const QExpansion f24_4 = form(4, 24, {0, 1, 0, 3, 0, 14, 0, -24, 0, 9, 0, -28, 0, -74, 0, 42, 0, 82, 0, 92}, "f24_4");
const QExpansion f15_4 = form(4, 15, {0, 1, 1, 3, -7, 5, 3, -24, -15, 9, 5, 52}, "f15_4");

}  // namespace

TEST(Congruence, SturmBounds) {
    EXPECT_EQ(sturm_bound(2, 4, 24), 128u);
    EXPECT_EQ(sturm_bound(2, 10, 24), 320u);
    EXPECT_EQ(sturm_bound(2, 4, 32), 256u);
    EXPECT_EQ(index_gamma1(24), 384u);
    EXPECT_EQ(index_gamma1(1), 1u);
    EXPECT_EQ(sturm_bound(12, 12, 1), 1u);
    EXPECT_THROW(sturm_bound(3, 4, 24), DomainError);
    EXPECT_THROW(index_gamma1(0), DomainError);
}

TEST(Congruence, IndexGamma1AgainstDefinition) {
    // N^2 prod (1 - 1/p^2) computed with exact rationals.
    for (u64 n = 1; n <= 500; ++n) {
        Rational v(BigInt(n * n));
        for (u64 p : arith::primes_up_to(n)) {
            if (n % p == 0) v *= Rational(BigInt(p * p - 1), BigInt(p * p));
        }
        ASSERT_EQ(Rational(BigInt(index_gamma1(n))), v) << n;
    }
}

TEST(Congruence, ModulusAndOrder) {
    Modulus m2(2);
    EXPECT_EQ(m2.value(), 4);
    EXPECT_TRUE(m2.divides(BigInt(-12)));
    EXPECT_TRUE(m2.divides(BigInt(0)));
    EXPECT_FALSE(m2.divides(BigInt(6)));
    EXPECT_THROW(Modulus(2, 2), NotApplicableError);
    EXPECT_THROW(Modulus(0), DomainError);
    auto o = ord_qa(form(2, 1, {0, 4, 8, 2, 1}, "t"), m2);
    EXPECT_EQ(o.index, 3u);
    auto inf = ord_qa(form(2, 1, {0, 4, 8, -16}, "t"), m2);
    EXPECT_TRUE(inf.infinite_up_to_bound());
    EXPECT_EQ(inf.checked_bound, 3u);
}

TEST(Congruence, PrintedPrefixes) {
    Modulus m2(2);
    auto r = congruent_mod(qseries::from_curve(E24, 24, 19), f24_4, m2, 19);
    EXPECT_TRUE(r.congruent);
    EXPECT_FALSE(r.certified());
    EXPECT_EQ(r.sturm_bound, 128u);
    auto bad = congruent_mod(qseries::from_curve(E15, 15, 11), f15_4, m2, 11);
    EXPECT_FALSE(bad.congruent);
    EXPECT_EQ(bad.first_failure_index, 2u);
    EXPECT_THROW(congruent_mod(f24_4, f24_4, m2, 20), RangeError);
    // Mod 8 the weight-4 prefix already differs.
    EXPECT_FALSE(congruent_mod(qseries::from_curve(E24, 24, 19), f24_4, Modulus(3), 19).congruent);
}

TEST(Congruence, CertifiedAtSturmBound) {
    auto f = qseries::from_curve(E24, 24, 200);
    auto r = congruent_mod(f, f, Modulus(5), 128);
    EXPECT_TRUE(r.certified());
}

// A weight-4 eigenform system a_p + 4 k_p shares every a(n) mod 4 with f_E:
// p^3 = p (mod 4) makes the Hecke recursions agree modulo 4.
TEST(Congruence, SyntheticLiftAgreesAtPrimePowers) {
    std::mt19937_64 rng(5);
    u64 bound = 3000;
    auto f = qseries::from_curve(E32, 32, bound);
    std::map<u64, BigInt> lifted;
    for (u64 p : arith::primes_up_to(bound)) lifted[p] = f.at(p) + 4 * BigInt(static_cast<long long>(rng() % 41) - 20);
    QExpansion g(4, 32, qseries::hecke_extend(lifted, 4, 32, bound), "lift");
    EXPECT_FALSE(prime_power_mismatch(f, g, Modulus(2), bound).has_value());
    EXPECT_TRUE(congruent_mod(f, g, Modulus(2), bound).congruent);
    // Mod 8 the random lift breaks some prime.
    EXPECT_TRUE(prime_power_mismatch(f, g, Modulus(3), bound).has_value());
}

TEST(Congruence, Alpha) {
    std::vector<std::int64_t> want{0, 0, 0, 0, 1, 1, 2, 3, 4, 5, 6, 7, 8};
    for (std::int64_t n = -2; n <= 10; ++n) EXPECT_EQ(alpha(n), want[static_cast<std::size_t>(n + 2)]) << n;
    static_assert(alpha(2) == 1 && alpha(7) == 5);
}

TEST(Congruence, TwoAdicCloseness) {
    auto fe = qseries::from_curve(E15, 15, 11);
    auto r = two_adically_close(fe, f15_4, 2, 1, 11);
    EXPECT_TRUE(r.close);
    EXPECT_EQ(r.primes_checked, (std::vector<u64>{7, 11}));
    // alpha(1) = 0 fails the threshold.
    auto m1 = two_adically_close(fe, f15_4, 1, 1, 11);
    EXPECT_FALSE(m1.close);
    EXPECT_FALSE(m1.alpha_clause);
    // Weights 2 and 4 differ mod 4.
    auto s2 = two_adically_close(fe, f15_4, 3, 2, 11);
    EXPECT_FALSE(s2.weight_clause);
    // alpha(3) = 1 and a(7), a(11) differ by 24 and -56, so m = 3 still holds.
    EXPECT_TRUE(two_adically_close(fe, f15_4, 3, 1, 11).close);
    // m = 4 needs s >= alpha(4) = 2.
    auto m4 = two_adically_close(fe, f15_4, 4, 1, 11);
    EXPECT_FALSE(m4.alpha_clause);
    EXPECT_FALSE(m4.close);
    QExpansion shifted = form(4, 15, {0, 1, 1, 3, -7, 5, 3, -22, -15, 9, 5, 52}, "shifted");
    auto w = two_adically_close(fe, shifted, 2, 1, 11);
    EXPECT_FALSE(w.close);
    EXPECT_EQ(w.witness_prime, 7u);
    EXPECT_THROW(two_adically_close(fe, f15_4, 2, 1, 12), RangeError);
    EXPECT_THROW(two_adically_close(fe, f15_4, 2, 1, 11, 2), NotApplicableError);
}

TEST(Congruence, Mod4PrimeClassification) {
    auto f = qseries::from_curve(E24, 24, 5000);
    for (u64 p : arith::primes_up_to(5000)) {
        if (p <= 3) continue;
        auto c = mod4_prime_class(static_cast<std::int64_t>(f.at(p)), p);
        ASSERT_TRUE(c.consistent) << p;
        ASSERT_EQ(mod4(static_cast<std::int64_t>(f.at(p))), c.residue) << p;
    }
    EXPECT_EQ(mod4(-5), 3);
    EXPECT_THROW(mod4_prime_class(0, 2), DomainError);
}

TEST(Congruence, PowerPatternAgainstExactArithmetic) {
    auto f = qseries::from_curve(E24, 24, 100'000);
    for (u64 p : arith::primes_up_to(316)) {
        if (p <= 3) continue;
        int ap4 = static_cast<int>(mod_u64(f.at(p), 4));
        unsigned j = 1;
        for (u64 q = p; q <= f.bound(); q *= p, ++j) {
            ASSERT_EQ(mod4_power_pattern(p, j, ap4), static_cast<int>(mod_u64(f.at(q), 4))) << p << "^" << j;
        }
    }
    EXPECT_EQ(mod4_power_pattern(5, 0, 2), 1);
    EXPECT_EQ(mod4_power_pattern(5, 1, 2), 2);
    EXPECT_EQ(mod4_power_pattern(5, 2, 2), 3);
    EXPECT_EQ(mod4_power_pattern(5, 3, 2), 0);
    EXPECT_EQ(mod4_power_pattern(5, 4, 2), 1);
    EXPECT_EQ(mod4_power_pattern(7, 2, 0), 1);
    EXPECT_EQ(mod4_power_pattern(7, 3, 0), 0);
    EXPECT_THROW(mod4_power_pattern(5, 1, 0), DomainError);
    EXPECT_THROW(mod4_power_pattern(2, 1, 0), DomainError);
}
