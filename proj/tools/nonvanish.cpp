// nonvanish: command-line front end.
//
// Exit codes: 0 pass, 1 verified false, 2 input error, 3 insufficient data,
// 4 empty data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nonvanish/congruence.hpp"
#include "nonvanish/elliptic.hpp"
#include "nonvanish/errors.hpp"
#include "nonvanish/fixtures.hpp"
#include "nonvanish/gaps.hpp"
#include "nonvanish/intervals.hpp"
#include "nonvanish/point_count.hpp"
#include "nonvanish/qexp_io.hpp"
#include "nonvanish/qseries.hpp"
#include "nonvanish/report_io.hpp"
#include "nonvanish/verify.hpp"

namespace nv = nonvanish;
using nv::arith::u64;
using nv::qseries::QExpansion;
using nv::Rational;
using json = nlohmann::json;

namespace {

enum Exit { kPass = 0, kFalse = 1, kInput = 2, kInsufficient = 3, kEmpty = 4 };

struct Config {
    std::string format = "text";
    std::string output;
    std::string fixtures = nv::fixtures::kDefaultDir;
    unsigned jobs = 1;
};

void emit(const Config& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw nv::SchemaError("cannot write '" + cfg.output + "'");
    out << text;
}

// A form argument: "curve:<label>" (computed to `bound`), a fixture form
// label, or a path to an interchange file (first record).
bool is_curve_arg(const std::string& arg) { return arg.rfind("curve:", 0) == 0; }

const nv::elliptic::CurveQ& arg_curve(const nv::fixtures::FixtureSet& fx, const std::string& arg) {
    return fx.curve(arg.substr(6));
}

QExpansion fixed_form(const nv::fixtures::FixtureSet& fx, const std::string& arg) {
    if (auto* f = fx.find_form(arg)) return *f;
    if (std::filesystem::exists(arg)) return nv::qseries::load_qexp_file(arg).front();
    throw nv::SchemaError("unknown form '" + arg + "' (not a fixture label, curve:<label> or file)");
}

QExpansion curve_form(const nv::fixtures::FixtureSet& fx, const std::string& arg, u64 bound, unsigned jobs) {
    const auto& e = arg_curve(fx, arg);
    if (!e.conductor()) throw nv::SchemaError("curve '" + arg + "' has no conductor");
    return nv::qseries::from_curve(e, *e.conductor(), bound, nv::elliptic::CountMethod::automatic, jobs);
}

QExpansion resolve_form(const nv::fixtures::FixtureSet& fx, const std::string& arg, u64 bound, unsigned jobs) {
    return is_curve_arg(arg) ? curve_form(fx, arg, bound, jobs) : fixed_form(fx, arg);
}

std::pair<unsigned, u64> weight_level(const nv::fixtures::FixtureSet& fx, const std::string& arg) {
    if (is_curve_arg(arg)) {
        const auto& e = arg_curve(fx, arg);
        if (!e.conductor()) throw nv::SchemaError("curve '" + arg + "' has no conductor");
        return {2, *e.conductor()};
    }
    QExpansion f = fixed_form(fx, arg);
    return {f.weight(), f.level()};
}

// -- subcommands ---------------------------------------------------------------

int cmd_ap(const Config& cfg, const std::string& label, u64 limit) {
    auto fx = nv::fixtures::load_fixtures(cfg.fixtures);
    const auto& e = fx.curve(label);
    auto primes = nv::arith::primes_up_to(limit);
    auto aps = nv::parallel_map(primes.size(), cfg.jobs, [&](std::size_t i) { return nv::elliptic::ap(e, primes[i]); });
    std::vector<nv::report::ApRow> rows;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        rows.push_back({primes[i], aps[i], nv::elliptic::reduction_type(e, primes[i])});
    }
    emit(cfg, nv::report::render_ap_table(label, rows, nv::report::parse_format(cfg.format)));
    return kPass;
}

int cmd_qexp(const Config& cfg, const std::string& arg, u64 bound) {
    auto fmt = nv::report::parse_format(cfg.format);
    auto fx = nv::fixtures::load_fixtures(cfg.fixtures);
    QExpansion f = resolve_form(fx, arg, bound, cfg.jobs);
    if (!is_curve_arg(arg) && bound < f.bound()) f = f.truncated(bound);
    std::ostringstream os;
    switch (fmt) {
        case nv::report::Format::json: os << nv::qseries::store_qexp(f).dump(2) << "\n"; break;
        case nv::report::Format::csv:
            os << "n,a_n\n";
            for (u64 n = 0; n <= f.bound(); ++n) os << n << "," << f.at(n) << "\n";
            break;
        case nv::report::Format::text:
            os << f.label() << " (weight " << f.weight() << ", level " << f.level() << ", trusted to " << f.bound()
               << ")\n";
            for (u64 n = 1; n <= f.bound(); ++n) os << "a(" << n << ") = " << f.at(n) << "\n";
            break;
    }
    emit(cfg, os.str());
    return kPass;
}

int cmd_sturm(const Config& cfg, unsigned w1, unsigned w2, u64 level) {
    u64 b = nv::congruence::sturm_bound(w1, w2, level);
    std::ostringstream os;
    switch (nv::report::parse_format(cfg.format)) {
        case nv::report::Format::json:
            os << json{{"weight1", w1}, {"weight2", w2}, {"level", level}, {"sturm_bound", b}}.dump(2) << "\n";
            break;
        case nv::report::Format::csv: os << "weight1,weight2,level,sturm_bound\n" << w1 << "," << w2 << "," << level << "," << b << "\n"; break;
        case nv::report::Format::text: os << b << "\n"; break;
    }
    emit(cfg, os.str());
    return kPass;
}

int cmd_congr(const Config& cfg, const std::string& s1, const std::string& s2, unsigned m, std::optional<u64> bound,
              bool sturm_mode) {
    auto fmt = nv::report::parse_format(cfg.format);
    auto fx = nv::fixtures::load_fixtures(cfg.fixtures);
    auto [w1, n1] = weight_level(fx, s1);
    auto [w2, n2] = weight_level(fx, s2);
    u64 required = nv::congruence::sturm_bound(w1, w2, std::lcm(n1, n2));

    std::optional<u64> fixed_bound;
    for (const auto& s : {s1, s2}) {
        if (!is_curve_arg(s)) {
            u64 b = fixed_form(fx, s).bound();
            fixed_bound = fixed_bound ? std::min(*fixed_bound, b) : b;
        }
    }
    u64 target;
    if (sturm_mode) {
        target = fixed_bound ? std::min(*fixed_bound, required) : required;
    } else if (bound) {
        target = *bound;
    } else if (fixed_bound) {
        target = *fixed_bound;
    } else {
        throw nv::DomainError("congr: give --bound or --sturm when both forms are curves");
    }
    QExpansion f1 = resolve_form(fx, s1, target, cfg.jobs);
    QExpansion f2 = resolve_form(fx, s2, target, cfg.jobs);
    auto r = nv::congruence::congruent_mod(f1, f2, nv::congruence::Modulus(m), target);
    emit(cfg, nv::report::render(r, f1.label(), f2.label(), fmt));
    if (!r.congruent) return kFalse;
    if (sturm_mode && !r.certified()) {
        std::cerr << "insufficient data: trusted bound " << r.checked_bound << " is below the Sturm bound "
                  << r.sturm_bound << "\n";
        return kInsufficient;
    }
    return kPass;
}

int cmd_close(const Config& cfg, const std::string& s1, const std::string& s2, unsigned m, unsigned s,
              std::optional<u64> prime_bound, unsigned ramification) {
    auto fmt = nv::report::parse_format(cfg.format);
    auto fx = nv::fixtures::load_fixtures(cfg.fixtures);
    std::optional<u64> fixed_bound;
    for (const auto& sp : {s1, s2}) {
        if (!is_curve_arg(sp)) {
            u64 b = fixed_form(fx, sp).bound();
            fixed_bound = fixed_bound ? std::min(*fixed_bound, b) : b;
        }
    }
    u64 pb = prime_bound ? *prime_bound : fixed_bound ? *fixed_bound : 1000;
    QExpansion f1 = resolve_form(fx, s1, pb, cfg.jobs);
    QExpansion f2 = resolve_form(fx, s2, pb, cfg.jobs);
    auto r = nv::congruence::two_adically_close(f1, f2, m, s, pb, ramification);
    emit(cfg, nv::report::render(r, f1.label(), f2.label(), m, s, fmt));
    return r.close ? kPass : kFalse;
}

int cmd_scan(const Config& cfg, const std::string& kind, u64 n, u64 x_min, u64 x_max, std::optional<std::string> c,
             const std::string& delta, bool estimate, bool require_prime) {
    auto fmt = nv::report::parse_format(cfg.format);
    nv::intervals::ScanPredicate pred;
    if (kind == "s2s") {
        pred = {nv::intervals::ScanKind::sum_of_two_squares, n, {}};
    } else if (kind == "hypothesis") {
        pred = {nv::intervals::ScanKind::hypothesis_form, n, {require_prime}};
    } else {
        throw nv::DomainError("scan kind must be s2s or hypothesis, got '" + kind + "'");
    }
    Rational d = nv::parse_rational(delta);
    if (d <= 0) throw nv::DomainError("delta must be positive");
    nv::intervals::ScanReport r;
    if (estimate) {
        r = pred.kind == nv::intervals::ScanKind::sum_of_two_squares
                ? nv::intervals::estimate_constant(pred, x_min, x_max, d, cfg.jobs)
                : nv::intervals::estimate_delta(n, x_min, x_max, pred.hypothesis, cfg.jobs);
    } else {
        if (!c) throw nv::DomainError("scan: give c or --estimate");
        Rational cv = nv::parse_rational(*c);
        if (cv < 0) throw nv::DomainError("c must be nonnegative");
        r = nv::intervals::scan_range(pred, x_min, x_max, cv, d, cfg.jobs);
    }
    emit(cfg, nv::report::render(r, fmt));
    return r.passed() ? kPass : kFalse;
}

int cmd_gaps(const Config& cfg, const std::string& arg, u64 from, u64 to, std::optional<u64> bound,
             const std::string& convention, const std::string& certificate, std::optional<std::string> curve_label,
             std::optional<u64> modulus_n) {
    auto fmt = nv::report::parse_format(cfg.format);
    auto fx = nv::fixtures::load_fixtures(cfg.fixtures);
    QExpansion f = resolve_form(fx, arg, bound ? *bound : to + 1000, cfg.jobs);

    nv::gaps::GapScanOptions opts;
    if (convention == "run-after") {
        opts.convention = nv::gaps::GapConvention::run_after;
    } else if (convention == "run-starting-at") {
        opts.convention = nv::gaps::GapConvention::run_starting_at;
    } else {
        throw nv::DomainError("convention must be run-after or run-starting-at");
    }

    const nv::elliptic::CurveQ* e = nullptr;
    if (curve_label) {
        e = &fx.curve(*curve_label);
    } else if (is_curve_arg(arg)) {
        e = &arg_curve(fx, arg);
    }
    std::vector<int> predicted;
    if (certificate == "weight2") {
        if (!e) throw nv::NotApplicableError("weight2 certificate needs a curve (curve:<label> or --curve)");
        opts.certified = [e](u64 n) { return nv::gaps::certify_weight2(n, *e); };
    } else if (certificate == "hypothesis") {
        if (!e || !e->conductor()) throw nv::NotApplicableError("hypothesis certificate needs a curve with conductor");
        u64 odd = *e->conductor();
        while (odd % 2 == 0) odd /= 2;
        u64 big_n = modulus_n ? *modulus_n : odd;
        bool mult2 = nv::elliptic::reduction_type(*e, 2) == nv::elliptic::ReductionType::multiplicative;
        std::optional<int> a2;
        if (mult2) a2 = static_cast<int>(nv::congruence::mod4(nv::elliptic::ap_bad(*e, 2)));
        predicted.assign(f.bound() + 1, -1);
        opts.certified = [&predicted, big_n, mult2, a2](u64 n) {
            if (n % 2 == 0 && !mult2) return false;
            auto c = nv::gaps::certify_hypothesis_form(n, big_n, mult2, a2);
            if (c.certified) predicted[n] = *c.predicted_residue;
            return c.certified;
        };
        opts.verify = [&predicted](u64 n, const nv::BigInt& a) {
            int r = static_cast<int>(nv::mod_u64(a, 4));
            return r != 0 && r == predicted[n];
        };
    } else if (certificate != "none") {
        throw nv::DomainError("certificate must be none, weight2 or hypothesis");
    }
    auto r = nv::gaps::gap_scan(f, from, to, opts);
    auto cert_fn = opts.certified;
    std::function<bool(u64)> nonzero = [&f](u64 n) { return f.at(n) != 0; };
    emit(cfg, nv::report::render(r, cert_fn, nonzero, fmt));
    return r.certificate_violations.empty() ? kPass : kFalse;
}

int cmd_et_family(const Config& cfg, const std::string& t_text, unsigned max_order) {
    Rational t = nv::parse_rational(t_text);
    auto e = nv::elliptic::family_Et(t);
    auto p = nv::elliptic::family_Et_point(t);
    auto order = nv::elliptic::point_order(e, p, max_order);
    const auto& inv = e.invariants();
    std::ostringstream pt;
    pt << p;
    json j{{"t", nv::to_string(t)},
               {"ainvs", {e.a1().str(), e.a2().str(), e.a3().str(), e.a4().str(), e.a6().str()}},
               {"c4", inv.c4.str()},
               {"c6", inv.c6.str()},
               {"discriminant", inv.discriminant.str()},
               {"j", nv::to_string(*inv.j)},
               {"point", pt.str()}};
    j["point_order"] = order ? json(*order) : json(nullptr);
    std::ostringstream os;
    switch (nv::report::parse_format(cfg.format)) {
        case nv::report::Format::json: os << j.dump(2) << "\n"; break;
        case nv::report::Format::csv:
            os << "t,a1,a2,a3,a4,a6,discriminant,j,point_order\n"
               << j["t"].get<std::string>() << "," << e.a1() << "," << e.a2() << "," << e.a3() << "," << e.a4() << ","
               << e.a6() << "," << inv.discriminant << "," << j["j"].get<std::string>() << ","
               << (order ? std::to_string(*order) : "") << "\n";
            break;
        case nv::report::Format::text:
            os << e.describe() << "\nj = " << j["j"].get<std::string>() << ", discriminant = " << inv.discriminant
               << "\npoint " << pt.str() << " has order " << (order ? std::to_string(*order) : "> " + std::to_string(max_order))
               << "\n";
            break;
    }
    emit(cfg, os.str());
    return order == 4u ? kPass : kFalse;
}

int cmd_verify_paper(const Config& cfg, u64 certificate_bound) {
    auto fx = nv::fixtures::load_fixtures(cfg.fixtures);
    nv::verify::Options opt;
    opt.jobs = cfg.jobs;
    opt.certificate_bound = certificate_bound;
    auto summary = nv::verify::run_all(fx, opt);
    emit(cfg, nv::verify::render(summary));
    return summary.passed() ? kPass : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier coefficient non-vanishing toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    app.add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--output", cfg.output, "write the report here instead of stdout");
    app.add_option("--fixtures", cfg.fixtures, "fixture directory");
    app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1u, 256u));

    std::function<int()> run;

    // ap
    auto* ap = app.add_subcommand("ap", "a_p and reduction type for a fixture curve");
    std::string ap_label;
    u64 ap_bound = 100;
    ap->add_option("label", ap_label)->required();
    ap->add_option("--bound", ap_bound, "prime limit")->check(CLI::Range(u64{2}, nv::elliptic::kMaxCountingPrime));
    ap->callback([&] { run = [&] { return cmd_ap(cfg, ap_label, ap_bound); }; });

    // qexp
    auto* qe = app.add_subcommand("qexp", "print a q-expansion");
    std::string qe_form;
    u64 qe_bound = 100;
    qe->add_option("form", qe_form, "curve:<label>, fixture form label or file")->required();
    qe->add_option("--bound", qe_bound)->check(CLI::PositiveNumber);
    qe->callback([&] { run = [&] { return cmd_qexp(cfg, qe_form, qe_bound); }; });

    // sturm
    auto* st = app.add_subcommand("sturm", "Sturm bound for two weights at level N");
    unsigned st_w1 = 0, st_w2 = 0;
    u64 st_level = 0;
    st->add_option("weight1", st_w1)->required();
    st->add_option("weight2", st_w2)->required();
    st->add_option("level", st_level)->required();
    st->callback([&] { run = [&] { return cmd_sturm(cfg, st_w1, st_w2, st_level); }; });

    // congr
    auto* co = app.add_subcommand("congr", "coefficient congruence modulo 2^m");
    std::string co_f1, co_f2;
    unsigned co_m = 2;
    std::optional<u64> co_bound;
    bool co_sturm = false;
    co->add_option("form1", co_f1)->required();
    co->add_option("form2", co_f2)->required();
    co->add_option("--modulus-exp", co_m)->check(CLI::Range(1u, 4096u));
    auto* co_b = co->add_option("--bound", co_bound, "check indices up to B");
    co->add_flag("--sturm", co_sturm, "check up to the Sturm bound")->excludes(co_b);
    co->callback([&] { run = [&] { return cmd_congr(cfg, co_f1, co_f2, co_m, co_bound, co_sturm); }; });

    // close
    auto* cl = app.add_subcommand("close", "2-adic closeness of two eigenforms");
    std::string cl_f1, cl_f2;
    unsigned cl_m = 2, cl_s = 1, cl_e = 1;
    std::optional<u64> cl_bound;
    cl->add_option("form1", cl_f1)->required();
    cl->add_option("form2", cl_f2)->required();
    cl->add_option("--modulus-exp", cl_m)->check(CLI::Range(1u, 4096u));
    cl->add_option("--s", cl_s, "weight precision");
    cl->add_option("--ramification", cl_e);
    cl->add_option("--bound", cl_bound, "largest prime index");
    cl->callback([&] { run = [&] { return cmd_close(cfg, cl_f1, cl_f2, cl_m, cl_s, cl_bound, cl_e); }; });

    // scan
    auto* sc = app.add_subcommand("scan", "short-interval scan");
    std::string sc_kind, sc_delta = "1/4";
    u64 sc_n = 1, sc_xmin = 0, sc_xmax = 0;
    std::optional<std::string> sc_c;
    bool sc_estimate = false, sc_strict = false;
    sc->add_option("kind", sc_kind, "s2s or hypothesis")->required();
    sc->add_option("N", sc_n)->required()->check(CLI::PositiveNumber);
    sc->add_option("x_min", sc_xmin)->required();
    sc->add_option("x_max", sc_xmax)->required();
    sc->add_option("c", sc_c);
    sc->add_option("delta", sc_delta);
    sc->add_flag("--estimate", sc_estimate, "fit the constant instead of testing a given c");
    sc->add_flag("--require-prime-factor", sc_strict, "hypothesis form with j >= 1");
    sc->callback([&] {
        run = [&] { return cmd_scan(cfg, sc_kind, sc_n, sc_xmin, sc_xmax, sc_c, sc_delta, sc_estimate, sc_strict); };
    });

    // gaps
    auto* ga = app.add_subcommand("gaps", "zero runs and certificate cross-check");
    std::string ga_form, ga_conv = "run-after", ga_cert = "none";
    u64 ga_from = 1, ga_to = 1000;
    std::optional<u64> ga_bound, ga_n;
    std::optional<std::string> ga_curve;
    ga->add_option("form", ga_form)->required();
    ga->add_option("--from", ga_from)->check(CLI::PositiveNumber);
    ga->add_option("--to", ga_to)->check(CLI::PositiveNumber);
    ga->add_option("--bound", ga_bound, "coefficient bound for curve forms");
    ga->add_option("--convention", ga_conv, "run-after or run-starting-at");
    ga->add_option("--certificate", ga_cert, "none, weight2 or hypothesis");
    ga->add_option("--curve", ga_curve, "fixture curve behind the certificate");
    ga->add_option("--modulus-n", ga_n, "N for the hypothesis certificate");
    ga->callback([&] {
        run = [&] { return cmd_gaps(cfg, ga_form, ga_from, ga_to, ga_bound, ga_conv, ga_cert, ga_curve, ga_n); };
    });

    // et-family
    auto* et = app.add_subcommand("et-family", "member E_t of the 4-torsion family");
    std::string et_t;
    unsigned et_max = 12;
    et->add_option("t", et_t)->required();
    et->add_option("--max-order", et_max);
    et->callback([&] { run = [&] { return cmd_et_family(cfg, et_t, et_max); }; });

    // verify-paper
    auto* vp = app.add_subcommand("verify-paper", "run every reproduction check over the fixtures");
    u64 vp_bound = 100'000;
    vp->add_option("--bound", vp_bound, "coefficient bound for the certificate check")->check(CLI::Range(u64{100}, u64{10'000'000}));
    vp->callback([&] { run = [&] { return cmd_verify_paper(cfg, vp_bound); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kInput;
    }
    try {
        return run();
    } catch (const nv::EmptyDataError& e) {
        std::cerr << "empty data: " << e.what() << "\n";
        return kEmpty;
    } catch (const nv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
}
