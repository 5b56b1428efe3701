// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.
// Reference values are written out here rather than read from fixtures/, so
// a corrupted fixture file cannot make this binary agree with itself. The
// frozen interval constant is the exception: it lives in regression.json.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "nonvanish/fixtures.hpp"
#include "nonvanish/verify.hpp"

namespace nv = nonvanish;
using nv::BigInt;
using nv::Rational;
using nv::arith::u64;
using nv::qseries::QExpansion;
namespace vf = nv::verify;

namespace {

nv::elliptic::CurveQ curve(const char* label, std::vector<long long> a, u64 conductor) {
    nv::elliptic::CurveQ e(a[0], a[1], a[2], a[3], a[4], std::string(label), conductor);
    e.set_has_cyclic_4_isogeny(true);
    return e;
}

QExpansion prefix(const std::string& label, unsigned weight, u64 level, std::vector<long long> a) {
    std::vector<BigInt> c{0};
    for (long long v : a) c.emplace_back(v);
    return QExpansion(weight, level, std::move(c), label, true);
}

// Printed coefficients a(1), a(2), ...
const auto E24 = curve("24a3", {0, -1, 0, -64, 220}, 24);
const auto E32 = curve("32a4", {0, 0, 0, -11, 14}, 32);
const auto E15 = curve("15a7", {1, 1, 1, -80, 242}, 15);
const auto E0 = curve("E0", {1, 1, 1, -1344, 18405}, 42);

const QExpansion fE24 = prefix("24a3", 2, 24, {1, 0, -1, 0, -2, 0, 0, 0, 1, 0, 4, 0, -2, 0, 2, 0, 2, 0, -4});
const QExpansion fE32 = prefix("32a4", 2, 32, {1, 0, 0, 0, -2, 0, 0, 0, -3, 0, 0, 0, 6, 0, 0, 0, 2, 0, 0});
const QExpansion fE15 = prefix("15a7", 2, 15, {1, -1, -1, -1, 1, 1, 0, 3, 1, -1, -4});
const QExpansion f24_4 = prefix("f24_4", 4, 24, {1, 0, 3, 0, 14, 0, -24, 0, 9, 0, -28, 0, -74, 0, 42, 0, 82, 0, 92});
const QExpansion f12_10 = prefix("f12_10@24", 10, 24, {1, 0, -81, 0, 990, 0, 8576, 0, 6561, 0, 70596, 0, -2530});
const QExpansion f15_4 = prefix("f15_4", 4, 15, {1, 1, 3, -7, 5, 3, -24, -15, 9, 5, 52});
const QExpansion f32_4 = prefix("f32_4_3", 4, 32, {1, 0, 8, 0, -10, 0, 16, 0, 37, 0, -40, 0, -50, 0, -80, 0, -30, 0, 40});

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string secs(double s) { return nv::report::fixed(s, 2) + " s"; }

// Merges checks into one criterion line.
struct Line {
    bool passed = true;
    std::string detail;
    void add(const vf::CheckResult& c) {
        passed = passed && c.passed;
        detail += (detail.empty() ? "" : " | ") + c.name + ": " + c.detail;
    }
    void require(bool ok, const std::string& what) {
        passed = passed && ok;
        if (!ok) detail += (detail.empty() ? "" : " | ") + what;
    }
};

}  // namespace

int main() {
    unsigned jobs = 1;
    if (const char* j = std::getenv("NONVANISH_JOBS")) jobs = static_cast<unsigned>(std::max(1, std::atoi(j)));
    std::vector<std::pair<std::string, Line>> lines;
    auto record = [&](const std::string& name, const std::function<Line()>& fn) {
        auto t0 = Clock::now();
        Line l;
        try {
            l = fn();
        } catch (const std::exception& e) {
            l.passed = false;
            l.detail = std::string("error: ") + e.what();
        }
        l.detail += " [" + secs(seconds_since(t0)) + "]";
        std::cout << (l.passed ? "PASS " : "FAIL ") << name << ": " << l.detail << std::endl;
        lines.emplace_back(name, l);
    };

    record("1 coefficient reproduction", [] {
        Line l;
        auto t0 = Clock::now();
        l.add(vf::check_coefficients({{E24, fE24}, {E32, fE32}, {E15, fE15}}));
        l.require(seconds_since(t0) < 1.0, "runtime over 1 s");
        return l;
    });

    record("2 Sturm bounds", [] {
        Line l;
        l.add(vf::check_sturm({{2, 4, 24, 128}, {2, 10, 24, 320}, {2, 4, 32, 256}}));
        return l;
    });

    record("3 prefix congruences mod 4", [] {
        Line l;
        l.add(vf::check_prefix_congruences(
            {{E24, f24_4, std::nullopt}, {E24, f12_10, std::nullopt}, {E32, f32_4, std::nullopt}, {E15, f15_4, 2}}));
        return l;
    });

    record("4 a_p mod 4 classification", [jobs] {
        Line l;
        auto t0 = Clock::now();
        l.add(vf::check_mod4_classification({E24, E32, E15, E0}, 10'000, jobs));
        l.require(seconds_since(t0) < 60.0, "runtime over 60 s");
        return l;
    });

    record("5 f_E0 * E4^n mod 4", [jobs] {
        Line l;
        l.add(vf::check_e4_twists(E0, 2000, jobs));
        return l;
    });

    record("6 certificate soundness", [jobs] {
        Line l;
        l.add(vf::check_certificates(E24, {{E24, 3, std::nullopt}, {E0, 21, 1}}, 100'000, jobs));
        return l;
    });

    record("7 interval scan and 2-adic closeness", [jobs] {
        Line l;
        auto reg = nv::fixtures::load_fixtures().regression.at("s2s_interval_constant");
        l.require(reg.contains("generated"), "regression constant lacks a generation date");
        l.add(vf::check_interval_constant(reg.at("N").get<u64>(), reg.at("x_min").get<u64>(), reg.at("x_max").get<u64>(),
                                          nv::parse_rational(reg.at("c").get<std::string>()),
                                          nv::parse_rational(reg.at("delta").get<std::string>()), jobs));
        l.require(reg.at("N").get<u64>() == 48 && reg.at("x_min").get<u64>() == 10'000 &&
                      reg.at("x_max").get<u64>() == 1'000'000 && reg.at("delta").get<std::string>() == "1/4",
                  "regression constant recorded for the wrong parameters");
        QExpansion computed = nv::qseries::from_curve(E15, 15, f15_4.bound());
        l.add(vf::check_closeness(computed, f15_4, 2, 1));
        return l;
    });

    record("8 alpha and the E_t family", [] {
        Line l;
        l.add(vf::check_alpha({0, 0, 0, 0, 1, 1, 2, 3, 4, 5, 6, 7, 8}));
        l.add(vf::check_family(50, 40));
        return l;
    });

    record("9 property suites", [] {
        Line l;
        l.add(vf::check_properties({E24, E32, E15, E0}, 100'000, 4));
        return l;
    });

    bool all = true;
    for (const auto& [name, l] : lines) all = all && l.passed;
    std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
    return all ? 0 : 1;
}
