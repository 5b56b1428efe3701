#pragma once

// Fixture-driven reproduction checks. Each check returns a named pass/fail
// line; run_all() composes them for the verify-paper command.

#include <chrono>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nonvanish/arith.hpp"
#include "nonvanish/congruence.hpp"
#include "nonvanish/elliptic.hpp"
#include "nonvanish/fixtures.hpp"
#include "nonvanish/gaps.hpp"
#include "nonvanish/intervals.hpp"
#include "nonvanish/point_count.hpp"
#include "nonvanish/qseries.hpp"
#include "nonvanish/report_io.hpp"

namespace nonvanish::verify {

using arith::u64;
using qseries::QExpansion;

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Options {
    unsigned jobs = 1;
    u64 certificate_bound = 100'000;  // coefficients computed for the soundness check
    u64 classification_limit = 10'000;
    u64 e4_bound = 2000;
    u64 property_bound = 100'000;
};

namespace detail {

inline std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
    return s;
}

inline CheckResult finish(std::string name, const std::vector<std::string>& problems, std::string ok_detail) {
    if (problems.empty()) return {std::move(name), true, std::move(ok_detail)};
    return {std::move(name), false, join(problems)};
}

template <class F>
CheckResult guarded(const std::string& name, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {name, false, std::string("error: ") + e.what()};
    }
}

}  // namespace detail

/// A printed prefix reproduced from the curve's point counts.
struct PrintedPrefix {
    elliptic::CurveQ curve;
    QExpansion printed;
};

inline CheckResult check_coefficients(const std::vector<PrintedPrefix>& cases) {
    return detail::guarded("coefficients", [&] {
        std::vector<std::string> problems;
        std::vector<std::string> done;
        for (const auto& [curve, printed] : cases) {
            std::string label = curve.label().value_or("?");
            QExpansion f = qseries::from_curve(curve, *curve.conductor(), printed.bound());
            for (u64 n = 0; n <= printed.bound(); ++n) {
                if (f.at(n) != printed.at(n)) {
                    problems.push_back(label + ": a(" + std::to_string(n) + ") computed " + f.at(n).str() + ", printed " +
                                       printed.at(n).str());
                }
            }
            done.push_back(label + " n<=" + std::to_string(printed.bound()));
        }
        return detail::finish("coefficients", problems, detail::join(done));
    });
}

struct SturmCase {
    unsigned w1, w2;
    u64 level;
    u64 expected;
};

inline CheckResult check_sturm(const std::vector<SturmCase>& cases) {
    return detail::guarded("sturm-bounds", [&] {
        std::vector<std::string> problems, done;
        for (const auto& c : cases) {
            u64 b = congruence::sturm_bound(c.w1, c.w2, c.level);
            std::string tag = "(" + std::to_string(c.w1) + "," + std::to_string(c.w2) + ",N=" + std::to_string(c.level) + ")";
            if (b != c.expected) problems.push_back(tag + " gave " + std::to_string(b) + ", want " + std::to_string(c.expected));
            done.push_back(tag + "=" + std::to_string(b));
        }
        return detail::finish("sturm-bounds", problems, detail::join(done));
    });
}

/// A mod-4 prefix comparison with its expected outcome: congruent, or first
/// failure at a given index.
struct PrefixCase {
    elliptic::CurveQ curve;
    QExpansion form;
    std::optional<u64> expected_failure;
};

inline CheckResult check_prefix_congruences(const std::vector<PrefixCase>& cases) {
    return detail::guarded("prefix-congruences-mod-4", [&] {
        std::vector<std::string> problems, done;
        congruence::Modulus mod4(2);
        for (const auto& c : cases) {
            std::string tag = c.curve.label().value_or("?") + "~" + c.form.label();
            QExpansion fe = qseries::from_curve(c.curve, *c.curve.conductor(), c.form.bound());
            auto r = congruence::congruent_mod(fe, c.form, mod4, c.form.bound());
            if (r.first_failure_index != c.expected_failure) {
                problems.push_back(tag + ": first failure " +
                                   (r.first_failure_index ? std::to_string(*r.first_failure_index) : "none") +
                                   ", want " + (c.expected_failure ? std::to_string(*c.expected_failure) : "none"));
            }
            done.push_back(tag + (r.congruent ? " congruent to " + std::to_string(r.checked_bound)
                                              : " fails at " + std::to_string(*r.first_failure_index)));
        }
        return detail::finish("prefix-congruences-mod-4", problems, detail::join(done));
    });
}

/// a_p = +-(1 + p) (mod 4), residue 2 or 0 by p mod 4, at every good odd p < limit.
inline CheckResult check_mod4_classification(const std::vector<elliptic::CurveQ>& curves, u64 limit, unsigned jobs) {
    return detail::guarded("mod-4-classification", [&] {
        std::vector<std::string> problems, done;
        std::vector<u64> primes = arith::primes_up_to(limit - 1);
        for (const auto& e : curves) {
            std::string label = e.label().value_or("?");
            std::vector<u64> good;
            for (u64 p : primes) {
                if (p != 2 && e.discriminant() % p != 0) good.push_back(p);
            }
            auto aps = parallel_map(good.size(), jobs, [&](std::size_t i) {
                return elliptic::ap_good(e, good[i], elliptic::CountMethod::legendre);
            });
            u64 bad = 0;
            for (std::size_t i = 0; i < good.size(); ++i) {
                auto cls = congruence::mod4_prime_class(aps[i], good[i]);
                if (!cls.consistent || congruence::mod4(aps[i]) != cls.residue) {
                    if (bad++ < 3) problems.push_back(label + ": a(" + std::to_string(good[i]) + ") = " + std::to_string(aps[i]));
                }
            }
            if (bad) problems.push_back(label + ": " + std::to_string(bad) + " exceptions");
            done.push_back(label + " " + std::to_string(good.size()) + " primes");
        }
        return detail::finish("mod-4-classification", problems, detail::join(done));
    });
}

/// f * E4^n = f (mod 4) up to `bound` for n = 1, 2, 3.
inline CheckResult check_e4_twists(const elliptic::CurveQ& curve, u64 bound, unsigned jobs) {
    return detail::guarded("e4-multiples-mod-4", [&] {
        std::vector<std::string> problems;
        QExpansion f = qseries::from_curve(curve, *curve.conductor(), bound, elliptic::CountMethod::automatic, jobs);
        QExpansion e4 = qseries::eisenstein_e4(bound);
        QExpansion g = f;
        congruence::Modulus mod4(2);
        for (unsigned n = 1; n <= 3; ++n) {
            g = qseries::series_multiply(g, e4, bound);
            for (u64 k = 0; k <= bound; ++k) {
                if (!mod4.divides(g.at(k) - f.at(k))) {
                    problems.push_back("n=" + std::to_string(n) + ": index " + std::to_string(k));
                    break;
                }
            }
        }
        return detail::finish("e4-multiples-mod-4", problems,
                              curve.label().value_or("?") + ", n=1..3, indices<=" + std::to_string(bound));
    });
}

/// Pointwise check of the non-vanishing certificates against computed coefficients.
struct HypothesisCase {
    elliptic::CurveQ curve;
    u64 modulus_n;           // N in the certificate
    std::optional<int> a2;   // a(2) mod 4 when 2 is multiplicative
};

inline CheckResult check_certificates(const elliptic::CurveQ& weight2_curve, const std::vector<HypothesisCase>& hyp,
                                      u64 bound, unsigned jobs) {
    return detail::guarded("certificate-soundness", [&] {
        std::vector<std::string> problems, done;
        {
            const auto& e = weight2_curve;
            QExpansion f = qseries::from_curve(e, *e.conductor(), bound, elliptic::CountMethod::automatic, jobs);
            gaps::GapScanOptions opts;
            opts.certified = [&](u64 n) { return gaps::certify_weight2(n, e); };
            auto r = gaps::gap_scan(f, 1, bound - 1, opts);
            if (!r.certificate_violations.empty()) {
                problems.push_back(f.label() + " weight-2: " + std::to_string(r.certificate_violations.size()) +
                                   " violations, first n=" + std::to_string(r.certificate_violations.front()));
            }
            done.push_back(f.label() + " sums of two squares: " + std::to_string(r.certified_count) + " certified");
        }
        for (const auto& h : hyp) {
            QExpansion f =
                qseries::from_curve(h.curve, *h.curve.conductor(), bound, elliptic::CountMethod::automatic, jobs);
            bool mult2 = h.a2.has_value();
            std::vector<int> predicted(bound + 1, -1);
            gaps::GapScanOptions opts;
            opts.certified = [&](u64 n) {
                if (n % 2 == 0 && !mult2) return false;
                auto c = gaps::certify_hypothesis_form(n, h.modulus_n, mult2, h.a2);
                if (c.certified) predicted[n] = *c.predicted_residue;
                return c.certified;
            };
            opts.verify = [&](u64 n, const BigInt& a) {
                int r = static_cast<int>(mod_u64(a, 4));
                return r != 0 && (!mult2 && n % 2 == 0 ? true : r == predicted[n]);
            };
            auto r = gaps::gap_scan(f, 1, bound - 1, opts);
            if (!r.certificate_violations.empty()) {
                problems.push_back(f.label() + " hypothesis form: " + std::to_string(r.certificate_violations.size()) +
                                   " violations, first n=" + std::to_string(r.certificate_violations.front()));
            }
            done.push_back(f.label() + " hypothesis form: " + std::to_string(r.certified_count) + " certified");
        }
        return detail::finish("certificate-soundness", problems, detail::join(done) + ", n<" + std::to_string(bound));
    });
}

/// The frozen s2s constant still gives zero failures, and one step lower it
/// does not (so it is still the minimal c at 1e-6 resolution).
inline CheckResult check_interval_constant(u64 modulus_n, u64 x_min, u64 x_max, const Rational& c,
                                           const Rational& delta, unsigned jobs) {
    return detail::guarded("interval-constant", [&] {
        std::vector<std::string> problems;
        intervals::ScanPredicate pred{intervals::ScanKind::sum_of_two_squares, modulus_n, {}};
        auto r = intervals::scan_range(pred, x_min, x_max, c, delta, jobs);
        if (!r.passed()) {
            problems.push_back(std::to_string(r.failures.size()) + " failures at c=" + to_string(c) + ", first X=" +
                               std::to_string(r.failures.front()));
        }
        auto lower = intervals::scan_range(pred, x_min, x_max, c - Rational(1, 1'000'000), delta, jobs);
        if (lower.passed()) problems.push_back("c=" + to_string(c) + " is not minimal");
        return detail::finish("interval-constant", problems,
                              "N=" + std::to_string(modulus_n) + ", X in [" + std::to_string(x_min) + ", " +
                                  std::to_string(x_max) + "], c=" + to_string(c) + ", max gap " +
                                  std::to_string(r.max_gap_observed));
    });
}

inline CheckResult check_closeness(const QExpansion& f1, const QExpansion& f2, unsigned m, unsigned s) {
    return detail::guarded("2-adic-closeness", [&] {
        u64 pb = std::min(f1.bound(), f2.bound());
        auto r = congruence::two_adically_close(f1, f2, m, s, pb);
        std::vector<std::string> problems;
        if (!r.close) problems.push_back(r.failure);
        if (r.primes_checked.empty()) problems.push_back("no prime indices available");
        std::string ps;
        for (u64 p : r.primes_checked) ps += (ps.empty() ? "" : ",") + std::to_string(p);
        return detail::finish("2-adic-closeness", problems,
                              f1.label() + "/" + f2.label() + " m=" + std::to_string(m) + " s=" + std::to_string(s) +
                                  " on p in {" + ps + "}");
    });
}

inline CheckResult check_alpha(const std::vector<std::int64_t>& expected) {
    return detail::guarded("alpha", [&] {
        std::vector<std::string> problems;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            std::int64_t n = static_cast<std::int64_t>(i) - 2;
            if (congruence::alpha(n) != expected[i]) {
                problems.push_back("alpha(" + std::to_string(n) + ") = " + std::to_string(congruence::alpha(n)));
            }
        }
        return detail::finish("alpha", problems, "n = -2.." + std::to_string(expected.size() - 3));
    });
}

/// t = k/7 for k = 1..count: (t, t) has order 4 and the j-invariants spread out.
inline CheckResult check_family(unsigned count, std::size_t min_distinct_j) {
    return detail::guarded("E_t-family", [&] {
        std::vector<std::string> problems;
        std::set<Rational> js;
        for (unsigned k = 1; k <= count; ++k) {
            Rational t = make_rational(k, 7);
            auto e = elliptic::family_Et(t);
            auto order = elliptic::point_order(e, elliptic::family_Et_point(t), 12);
            if (order != 4u) problems.push_back("t=" + to_string(t) + ": order " + (order ? std::to_string(*order) : "> 12"));
            js.insert(e.j_invariant());
        }
        if (js.size() <= min_distinct_j) problems.push_back(std::to_string(js.size()) + " distinct j-invariants");
        return detail::finish("E_t-family", problems,
                              std::to_string(count) + " members, " + std::to_string(js.size()) + " distinct j");
    });
}

// ---------------------------------------------------------------------------
// Property suites.

inline CheckResult check_properties(const std::vector<elliptic::CurveQ>& curves, u64 bound, unsigned jobs) {
    return detail::guarded("property-suites", [&] {
        std::vector<std::string> problems;
        // Two squares against a direct table.
        {
            std::vector<std::uint8_t> brute(bound + 1, 0);
            for (u64 a = 0; a * a <= bound; ++a) {
                for (u64 b = a; a * a + b * b <= bound; ++b) brute[a * a + b * b] = 1;
            }
            for (u64 n = 1; n <= bound; ++n) {
                if (arith::is_sum_of_two_squares(n) != (brute[n] != 0)) {
                    problems.push_back("two squares disagree at " + std::to_string(n));
                    break;
                }
            }
        }
        // Hecke multiplicativity and the Hasse bound.
        for (const auto& e : curves) {
            u64 b = std::min<u64>(bound, 20'000);
            QExpansion f = qseries::from_curve(e, *e.conductor(), b, elliptic::CountMethod::automatic, jobs);
            for (u64 m = 2; m * m <= b; ++m) {
                for (u64 n = m + 1; m * n <= b; ++n) {
                    if (std::gcd(m, n) == 1 && f.at(m * n) != f.at(m) * f.at(n)) {
                        problems.push_back(f.label() + ": a(" + std::to_string(m * n) + ") not multiplicative");
                        m = b;
                        break;
                    }
                }
            }
            for (u64 p : arith::primes_up_to(b)) {
                if (e.discriminant() % p == 0) continue;
                BigInt a = f.at(p);
                if (a * a > 4 * BigInt(p)) {
                    problems.push_back(f.label() + ": Hasse bound fails at " + std::to_string(p));
                    break;
                }
            }
        }
        // Mod-4 power patterns against exact a(p^j).
        for (const auto& e : curves) {
            QExpansion f = qseries::from_curve(e, *e.conductor(), 4096, elliptic::CountMethod::automatic, jobs);
            for (u64 p : arith::primes_up_to(64)) {
                if (p == 2 || e.discriminant() % p == 0) continue;
                int ap4 = static_cast<int>(mod_u64(f.at(p), 4));
                unsigned j = 1;
                for (u64 q = p; q <= f.bound(); q *= p, ++j) {
                    if (congruence::mod4_power_pattern(p, j, ap4) != static_cast<int>(mod_u64(f.at(q), 4))) {
                        problems.push_back(f.label() + ": pattern at " + std::to_string(p) + "^" + std::to_string(j));
                    }
                }
            }
        }
        // Determinism across worker counts.
        {
            intervals::ScanPredicate pred{intervals::ScanKind::sum_of_two_squares, 48, {}};
            auto one = report::render(intervals::scan_range(pred, 10'000, 60'000, Rational(4), Rational(1, 4), 1),
                                      report::Format::csv);
            auto many = report::render(intervals::scan_range(pred, 10'000, 60'000, Rational(4), Rational(1, 4), 4),
                                       report::Format::csv);
            if (one != many) problems.push_back("scan report depends on worker count");
            const auto& e = curves.front();
            auto f1 = qseries::from_curve(e, *e.conductor(), 5000, elliptic::CountMethod::automatic, 1);
            auto f4 = qseries::from_curve(e, *e.conductor(), 5000, elliptic::CountMethod::automatic, 4);
            if (!(f1 == f4)) problems.push_back("coefficients depend on worker count");
        }
        return detail::finish("property-suites", problems,
                              "two squares to " + std::to_string(bound) + ", Hecke, Hasse, mod-4 patterns, determinism");
    });
}

// ---------------------------------------------------------------------------

struct Summary {
    std::vector<CheckResult> checks;
    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

/// Reference data not carried by the fixture files.
inline const std::vector<SturmCase>& sturm_cases() {
    static const std::vector<SturmCase> cases{{2, 4, 24, 128}, {2, 10, 24, 320}, {2, 4, 32, 256}};
    return cases;
}

inline const std::vector<std::int64_t>& alpha_table() {
    // alpha(-2), ..., alpha(10)
    static const std::vector<std::int64_t> t{0, 0, 0, 0, 1, 1, 2, 3, 4, 5, 6, 7, 8};
    return t;
}

/// f_{12,10} viewed at level 24.
inline QExpansion at_level(const QExpansion& f, u64 level) {
    return QExpansion(f.weight(), level, f.coefficients(), f.label() + "@" + std::to_string(level), f.normalized());
}

/// The whole reproduction suite over a fixture set.
inline Summary run_all(const fixtures::FixtureSet& fx, const Options& opt = {}) {
    Summary s;
    const auto& c24 = fx.curve("24a3");
    const auto& c32 = fx.curve("32a4");
    const auto& c15 = fx.curve("15a7");
    const auto& c0 = fx.curve("E0");

    s.checks.push_back(check_coefficients({{c24, fx.form("24a3-printed")},
                                           {c32, fx.form("32a4-printed")},
                                           {c15, fx.form("15a7-printed")}}));
    s.checks.push_back(check_sturm(sturm_cases()));
    s.checks.push_back(check_prefix_congruences({{c24, fx.form("f24_4"), std::nullopt},
                                                 {c24, at_level(fx.form("f12_10"), 24), std::nullopt},
                                                 {c32, fx.form("f32_4_3"), std::nullopt},
                                                 {c15, fx.form("f15_4"), 2}}));
    s.checks.push_back(check_mod4_classification({c24, c32, c15, c0}, opt.classification_limit, opt.jobs));
    s.checks.push_back(check_e4_twists(c0, opt.e4_bound, opt.jobs));
    s.checks.push_back(check_certificates(c24, {{c24, 3, std::nullopt}, {c0, 21, 1}}, opt.certificate_bound, opt.jobs));

    const auto& reg = fx.regression;
    if (reg.contains("s2s_interval_constant")) {
        const auto& r = reg["s2s_interval_constant"];
        s.checks.push_back(check_interval_constant(r.at("N").get<u64>(), r.at("x_min").get<u64>(), r.at("x_max").get<u64>(),
                                                   parse_rational(r.at("c").get<std::string>()),
                                                   parse_rational(r.at("delta").get<std::string>()), opt.jobs));
    } else {
        s.checks.push_back({"interval-constant", false, "regression.json lacks s2s_interval_constant"});
    }
    QExpansion f15 = qseries::from_curve(c15, 15, fx.form("f15_4").bound());
    s.checks.push_back(check_closeness(f15, fx.form("f15_4"), 2, 1));
    s.checks.push_back(check_alpha(alpha_table()));
    s.checks.push_back(check_family(50, 40));
    s.checks.push_back(check_properties({c24, c32, c15, c0}, opt.property_bound, opt.jobs));
    return s;
}

inline std::string render(const Summary& s) {
    std::ostringstream os;
    for (const auto& c : s.checks) os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    os << (s.passed() ? "all checks passed" : "some checks FAILED") << "\n";
    return os.str();
}

}  // namespace nonvanish::verify
