// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
// Usage: acceptance [--cli path/to/hmorrey] [--work dir]

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "hmorrey/harness.hpp"
#include "hmorrey/kernels.hpp"
#include "hmorrey/operators.hpp"
#include "hmorrey/spaces.hpp"
#include "hmorrey/util.hpp"

using namespace hmorrey;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// pinned tolerances
constexpr double kSandwichAnchorTol = 1e-6;   // ||K_{1,2}||_1 = 12 and S(1), relative
constexpr double kChainTol = 1e-9;            // inclusion chain, relative, plus quadrature errors
constexpr double kClosedFormTol = 0.01;       // sqrt(12)
constexpr double kYoungSlack = 1.02;
constexpr double kYoungEquality = 0.01;
constexpr double kDilationTol = 0.01;
constexpr double kConstantTol = 0.01;         // hypothesis constants against closed forms
constexpr double kHoelderSlack = 1.05;
constexpr double kStructureTol = 1e-3;
constexpr double kConstantResidual = 1e-6;  // mean-convention norm of a constant, relative to it
constexpr double kSlopeTol = 0.3;
constexpr double kCancelFactor = 1e-2;
constexpr int kYoungPairs = 20;

struct Line {
    int id;
    bool pass;
    std::string text;
};

std::vector<Line> lines;

void report(int id, bool pass, const std::string& text) {
    lines.push_back({id, pass, text});
    std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", text.c_str());
    std::fflush(stdout);
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

GroupDescriptor aniso() { return GroupDescriptor::parse("abelian:aniso:nu=1,2"); }

// 1. kernel-norm sandwich
void criterion1(const QuadraturePlan& plan) {
    struct Set {
        const char* group;
        double alpha, gamma, p1;
    };
    const Set sets[] = {{"abelian:aniso:nu=1,2", 1, 2, 1},
                        {"abelian:aniso:nu=1,2", 1, 2, 1.2},
                        {"abelian:aniso:nu=1,2", 1.5, 3, 1.1},
                        {"heis1", 1.5, 3, 1.1}};
    bool ok = true;
    int checked = 0;
    for (const auto& s : sets) {
        KernelParams k(GroupDescriptor::parse(s.group), s.alpha, s.gamma);
        for (double R : {0.5, 1.0, 2.0}) {
            auto r = sandwich_check(k, s.p1, R, plan);
            ok = ok && r.lower_ok && r.upper_ok;
            ++checked;
        }
    }
    KernelParams k12(aniso(), 1, 2);
    double l1 = kernel_lebesgue_norm(k12, 1.0, plan).value;
    double brute = 0.0;
    for (int j = -200; j <= 200; ++j) {
        double t = std::ldexp(1.0, j);
        brute += t / ((1 + t) * (1 + t));
    }
    double S1 = dyadic_sum(k12, 1.0, 1.0, 1e-12).value;
    bool anchors = rel_close(l1, 12.0, kSandwichAnchorTol) && std::abs(S1 - brute) <= kSandwichAnchorTol;
    report(1, ok && anchors,
           std::to_string(checked) + " brackets hold; ||K_{1,2}||_1 = " + num(l1) + "; S(1) = " + num(S1) +
               " vs brute force " + num(brute));
}

// 2. inclusion chain of kernel norms
void criterion2(const QuadraturePlan& plan) {
    struct Set {
        const char* group;
        double alpha, gamma, p1;
    };
    const Set sets[] = {{"abelian:aniso:nu=1,2", 1, 2, 1},
                        {"abelian:aniso:nu=1,2", 1, 2, 1.2},
                        {"abelian:aniso:nu=1,2", 1.5, 3, 1.1},
                        {"heis1", 1.5, 3, 1.1}};
    bool ok = true;
    std::string worst;
    double worst_gap = -INFINITY;
    for (const auto& s : sets) {
        auto g = GroupDescriptor::parse(s.group);
        KernelParams k(g, s.alpha, s.gamma);
        const double Q = g.Q(), q1 = 2 * s.p1, p2 = 1.0;
        auto omega = RadialProfile::sum({RadialProfile::power(1.0, -Q / s.p1), RadialProfile::power(1.0, Q / q1 - Q / s.p1)});
        auto a = kernel_gen_morrey_norm(k, p2, omega, plan).norm;
        auto b = kernel_morrey_norm(k, p2, s.p1, plan);
        auto c = kernel_lebesgue_norm(k, s.p1, plan);
        bool first = a.value <= b.value * (1 + kChainTol) + a.error + b.error;
        bool second = b.value <= c.value * (1 + kChainTol) + b.error + c.error;
        ok = ok && first && second;
        double gap = std::max(a.value / b.value, b.value / c.value);
        if (gap > worst_gap) {
            worst_gap = gap;
            worst = std::string(s.group) + " (" + num(s.alpha) + "," + num(s.gamma) + "," + num(s.p1) + "): " +
                    num(a.value) + " <= " + num(b.value) + " <= " + num(c.value);
        }
    }
    report(2, ok, "chain holds for 4 parameter sets; tightest " + worst);
}

// 3. closed-form generalised Morrey norm
void criterion3(const QuadraturePlan& plan) {
    auto n = gen_morrey_norm(TestFunction::power(-1.0), aniso(), 2.0, RadialProfile::power(1.0, -1.0),
                             RadiusGrid::norm_default(), plan);
    report(3, rel_close(n.sup.value, std::sqrt(12.0), kClosedFormTol),
           "||x|^-1||_{2,r^-1} = " + num(n.sup.value) + " vs sqrt(12) = " + num(std::sqrt(12.0)));
}

std::string random_spec(std::mt19937_64& rng, bool aniso_group) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto fmt = [](double v) { return format_number(std::round(v * 1000) / 1000); };
    auto ball = [&] { return "ball:a=" + fmt(0.3 + 0.9 * u(rng)); };
    auto gauss = [&] { return "dilate:l=" + fmt(0.6 + u(rng)) + ":base=gauss"; };
    auto shifted = [&] {
        double y = aniso_group ? 0.5 * u(rng) : u(rng) - 0.5;
        return "shift:z=" + fmt(u(rng) - 0.5) + "," + fmt(y) + ":base=" + ball();
    };
    switch (static_cast<int>(u(rng) * 4)) {
        case 0: return ball();
        case 1: return gauss();
        case 2: return shifted();
        default: return "combo:[" + fmt(0.5 + u(rng)) + "*" + gauss() + "][" + fmt(0.5 + u(rng)) + "*" + shifted() + "]";
    }
}

// 4. Young on grids
void criterion4() {
    std::mt19937_64 rng(0);
    bool ok = true, equal = true;
    double worst = 0.0, worst_eq = 0.0;
    int runs = 0;
    for (const char* gs : {"abelian:iso:n=2", "abelian:aniso:nu=1,2"}) {
        auto g = GroupDescriptor::parse(gs);
        bool an = g.norm() == Norm::max_aniso;
        for (int i = 0; i < kYoungPairs; ++i) {
            auto f = TestFunction::parse(random_spec(rng, an));
            auto h = TestFunction::parse(random_spec(rng, an));
            for (auto [p, p1, q] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{2.0, 1.0, 2.0}}) {
                auto y = convolve_young(f, h, g, p, q, p1);
                ++runs;
                double ratio = y.lhs / y.rhs;
                worst = std::max(worst, ratio);
                ok = ok && y.lhs <= kYoungSlack * y.rhs;
                if (p == 1.0) {
                    worst_eq = std::max(worst_eq, std::abs(ratio - 1.0));
                    equal = equal && std::abs(ratio - 1.0) <= kYoungEquality;
                }
            }
        }
    }
    report(4, ok && equal,
           std::to_string(runs) + " grid convolutions; max ||h*f||_q / (||f||_p ||h||_p1) = " + num(worst) +
               "; p=q=p1=1 deviation from equality " + num(worst_eq));
}

std::map<std::string, json> by_theorem(const json& reports) {
    std::map<std::string, json> m;
    for (const auto& r : reports) m[r["case"]["theorem"].get<std::string>()] = r;
    return m;
}

bool hypotheses_hold(const json& r) {
    for (const auto& h : r["hypotheses"])
        if (!h["holds"].get<bool>()) return false;
    return true;
}

bool pinned(const json& r) {
    return r["pass"].get<bool>() && r["max_ratio"].is_number() && std::isfinite(r["max_ratio"].get<double>()) &&
           r["max_ratio"].get<double>() <= r["regression_bound"].get<double>();
}

double hyp_constant(const json& r, const std::string& id) {
    for (const auto& h : r["hypotheses"])
        if (h["id"] == id) return h["constant"].is_number() ? h["constant"].get<double>() : NAN;
    return NAN;
}

// 5. maximal operator
void criterion5(const std::map<std::string, json>& rep, const QuadraturePlan& plan) {
    auto g = aniso();
    auto ball = TestFunction::ball(1.0);
    RadiusGrid fine{0x1p-12, 0x1p12, 64};
    bool bracket = true;
    for (double d : {2.0, 4.0}) {
        auto m = maximal_function(ball, g, {Point{d, 0.0}, Point{0.0, d * d}}, fine, plan);
        for (double v : m.values)
            bracket = bracket && v >= std::pow(d + 1, -3.0) * (1 - 1e-9) && v <= std::pow(d - 1, -3.0);
    }
    double worst = 0.0;
    for (const char* spec : {"ball:a=1", "gauss", "pow:s=-1:cut=outer"}) {
        auto f = TestFunction::parse(spec);
        auto fl = TestFunction::dilated(f, 2.0);
        std::vector<Point> xs{Point{0.3, 0.2}, Point{1.5, -0.5}, Point{-0.7, 2.0}}, dx;
        for (const auto& x : xs) dx.push_back(g.dilate(2.0, x));
        auto a = maximal_function(fl, g, xs, RadiusGrid::maximal_default(), plan);
        auto b = maximal_function(f, g, dx, RadiusGrid::maximal_default(), plan);
        for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(a.values[i] / b.values[i] - 1.0));
    }
    const json& r = rep.at("maximal");
    bool ok = bracket && worst <= kDilationTol && pinned(r);
    report(5, ok,
           std::string("brackets at d=2,4 ") + (bracket ? "hold" : "fail") + "; dilation deviation " + num(worst) +
               "; max ratio " + num(r["max_ratio"].get<double>()) + " <= pinned " +
               num(r["regression_bound"].get<double>()));
}

// 6. Bessel-Riesz theorems
void criterion6(const std::map<std::string, json>& rep, const QuadraturePlan& plan) {
    const json &b1 = rep.at("br-1"), &b2 = rep.at("br-2"), &b3 = rep.at("br-3");
    bool ok = hypotheses_hold(b1) && hypotheses_hold(b2) && hypotheses_hold(b3);
    ok = ok && pinned(b1) && pinned(b2) && pinned(b3);
    double q1 = b1["derived"]["q"].get<double>();
    ok = ok && std::abs(q1 - 10.0 / 3.0) <= 1e-12;
    // br-3: q = beta p / (beta + Q - alpha)
    const auto& p3 = b3["case"]["params"];
    double q3 = p3["beta"].get<double>() * p3["p"].get<double>() /
                (p3["beta"].get<double>() + 3.0 - p3["alpha"].get<double>());
    ok = ok && std::abs(b3["derived"]["q"].get<double>() - q3) <= 1e-12;
    // chain: br-1 and br-2 share the operator, so the Morrey kernel norm gives a
    // smaller right side and a larger ratio
    bool chain = b1["results"].size() == b2["results"].size();
    for (std::size_t i = 0; chain && i < b1["results"].size(); ++i) {
        const auto &r1 = b1["results"][i], &r2 = b2["results"][i];
        chain = r2["rhs"].get<double>() <= r1["rhs"].get<double>() * (1 + 1e-9) &&
                r1["ratio"].get<double>() <= r2["ratio"].get<double>() * (1 + 1e-9);
    }
    // br-3 kernel: its generalised Morrey norm sits below the Morrey and Lebesgue norms
    KernelParams k(aniso(), p3["alpha"].get<double>(), p3["gamma"].get<double>());
    double p2 = p3["p2"].get<double>();
    auto omega = RadialProfile::parse(p3["omega"].get<std::string>());
    double gm = kernel_gen_morrey_norm(k, p2, omega, plan).norm.value;
    auto [lo, hi] = admissible_p1_interval(k);
    double p1 = std::min(0.5 * (lo + hi), std::max(p2, 0.5 * (p2 + hi)));
    double mo = kernel_morrey_norm(k, p2, p1, plan).value;
    double le = kernel_lebesgue_norm(k, p1, plan).value;
    // omega = r^-alpha majorises r^-(Q/p1) only up to the factor recorded here
    bool ordered = mo <= le * (1 + 1e-9);
    chain = chain && ordered;
    report(6, ok && chain,
           "hypotheses hold; q(br-1) = " + num(q1) + ", q(br-3) = " + num(b3["derived"]["q"].get<double>()) +
               "; max ratios " + num(b1["max_ratio"].get<double>()) + ", " + num(b2["max_ratio"].get<double>()) +
               ", " + num(b3["max_ratio"].get<double>()) + " within pins; br-1 ratios <= br-2 ratios; br-3 kernel " +
               num(gm) + " (gen), " + num(mo) + " <= " + num(le));
}

// 7. generalised operators and Olsen inequalities
void criterion7(const std::map<std::string, json>& rep) {
    const json &gb = rep.at("gbr"), &gf = rep.at("gfrac");
    bool ok = hypotheses_hold(gb) && hypotheses_hold(gf) && pinned(gb) && pinned(gf);
    // gfrac: rho = t^a, phi = r^b
    const auto& pf = gf["case"]["params"];
    double a = RadialProfile::parse(pf["rho"].get<std::string>()).beta();
    double b = RadialProfile::parse(pf["phi"].get<std::string>()).beta();
    double p = pf["p"].get<double>();
    bool consts = rel_close(hyp_constant(gf, "phi-tail"), 1.0 / (-b * p), kConstantTol) &&
                  rel_close(hyp_constant(gf, "fractional-balance"), 1.0 / a + 1.0 / (-a - b), kConstantTol) &&
                  rel_close(hyp_constant(gf, "rho-small-scale"), 1.0 / a, kConstantTol);
    // gbr: rho = t^a, phi = r^b, exponent e = a + Q - gamma - 1
    const auto& pb = gb["case"]["params"];
    double ga = pb["gamma"].get<double>();
    double ab = RadialProfile::parse(pb["rho"].get<std::string>()).beta();
    double bb = RadialProfile::parse(pb["phi"].get<std::string>()).beta();
    double e = ab + 3.0 - ga;  // t^(e-1) integrand
    consts = consts && rel_close(hyp_constant(gb, "rho-bessel-small-scale"), 1.0 / e, kConstantTol) &&
             rel_close(hyp_constant(gb, "phi-tail"), 1.0 / (-bb * pb["p"].get<double>()), kConstantTol) &&
             rel_close(hyp_constant(gb, "bessel-balance"), 1.0 / e + 1.0 / (-e - bb), kConstantTol);
    double worst_holder = 0.0;
    bool olsen = true;
    for (const char* id : {"olsen-gbr", "olsen-gfrac", "olsen-br"}) {
        const json& r = rep.at(id);
        olsen = olsen && hypotheses_hold(r) && pinned(r);
        for (const auto& x : r["results"]) worst_holder = std::max(worst_holder, x["holder_ratio"].get<double>());
    }
    olsen = olsen && worst_holder <= kHoelderSlack;
    report(7, ok && consts && olsen,
           std::string("closed-form constants ") + (consts ? "match" : "differ") + " (phi-tail " +
               num(hyp_constant(gf, "phi-tail")) + ", balance " + num(hyp_constant(gf, "fractional-balance")) +
               "); Olsen cases within pins; max Hoelder ratio " + num(worst_holder));
}

// 8. Campanato
void criterion8(const std::map<std::string, json>& rep, const QuadraturePlan& plan) {
    const json& r = rep.at("campanato");
    bool ok = hypotheses_hold(r) && pinned(r);
    bool both = false, lit = false, mean = false;
    for (const auto& x : r["results"]) {
        lit = lit || x["convention"] == "literal";
        mean = mean || x["convention"] == "mean";
    }
    both = lit && mean;
    bool structure = false;
    for (const auto& c : r["checks"])
        if (c["id"] == "modified-minus-plain-constant") structure = c["holds"].get<bool>();
    // strict 1e-3 relative constancy for compactly supported f centred at the origin
    auto g = aniso();
    auto rho = RadialProfile::power(1.0, 0.5);
    std::vector<Point> pts;
    for (double a : {-0.8, 0.0, 0.8})
        for (double b : {-0.6, 0.0, 0.6}) pts.push_back(Point{a, b});
    double worst = 0.0;
    for (const char* spec : {"ball:a=2", "combo:[1*ball:a=3][2*pow:s=-0.25:cut=outer]"}) {
        auto f = TestFunction::parse(spec);
        auto m = apply_mod_fractional(f, g, rho, pts, plan);
        auto t = apply_gen_fractional(f, g, rho, pts, plan);
        double lo = INFINITY, hi = -INFINITY, sc = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double d = m.values[i] - t.values[i];
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            sc = std::max(sc, std::abs(d));
        }
        worst = std::max(worst, (hi - lo) / sc);
    }
    const double level = 3.0;
    double cnorm = campanato_norm(TestFunction::constant(level), g, 2.0, RadialProfile::power(1.0, -0.5),
                                  RadiusGrid::norm_default(), plan, AverageConvention::mean)
                       .sup.value;
    bool pass = ok && both && structure && worst <= kStructureTol && cnorm <= kConstantResidual * level;
    report(8, pass,
           "T~f - Tf spread " + num(worst) + " relative (centred compact f), harness structure check " +
               (structure ? "holds" : "fails") + "; mean-convention norm of a constant " + num(cnorm) +
               "; max ratio " + num(r["max_ratio"].get<double>()) + " over both conventions within pin");
}

// 9. cancellation integral
void criterion9(const QuadraturePlan& plan) {
    auto g = GroupDescriptor::abelian_iso(3);
    const double alpha = 0.5;
    auto rho = RadialProfile::power(1.0, alpha);
    Point x{1.0, 0.0, 0.0};
    std::vector<double> lr, la;
    bool decreasing = true;
    double prev = INFINITY, last = 0.0;
    for (double R : {10.0, 100.0, 1000.0}) {
        auto a = cancellation_A(g, rho, x, R, plan);
        double v = std::abs(a.value);
        decreasing = decreasing && v < prev;
        prev = v;
        last = v;
        lr.push_back(std::log(R));
        la.push_back(std::log(v));
    }
    // least-squares slope in log-log
    double mx = (lr[0] + lr[1] + lr[2]) / 3, my = (la[0] + la[1] + la[2]) / 3, sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (lr[i] - mx) * (la[i] - my);
        sxx += (lr[i] - mx) * (lr[i] - mx);
    }
    double slope = sxy / sxx;
    double bound = kCancelFactor * 1.0 * rho(1000.0) / 1000.0;
    bool slope_ok = std::abs(slope - (alpha - 1)) <= kSlopeTol;
    report(9, decreasing && slope_ok && last <= bound,
           "|A| decreasing " + std::string(decreasing ? "yes" : "no") + "; log-log slope " + num(slope) +
               " vs alpha-1 = " + num(alpha - 1) + " +- " + num(kSlopeTol) + "; |A(x,1e3)| = " + num(last) +
               " <= " + num(bound));
}

std::string strip_runtime(const fs::path& file) {
    std::ifstream in(file);
    json j = json::parse(in);
    for (auto& r : j) r.erase("runtime_s");
    return j.dump();
}

// 10. determinism and effort stability
struct SuiteRuns {
    int rc1 = -1, rc2 = -1;
    bool have = false, identical = false;
    json reports;
};

// the default suite twice through the real executable
SuiteRuns run_suites(const std::string& cli, const fs::path& work) {
    SuiteRuns s;
    const fs::path d1 = work / "run1", d2 = work / "run2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    s.rc1 = std::system((cli + " verify --suite default --seed 0 --out " + d1.string() + " > /dev/null").c_str());
    s.rc2 = std::system((cli + " verify --suite default --seed 0 --out " + d2.string() + " > /dev/null").c_str());
    s.have = fs::exists(d1 / "report.json");
    if (!s.have) return s;
    std::ifstream in(d1 / "report.json");
    s.reports = json::parse(in);
    s.identical = fs::exists(d2 / "report.json") && strip_runtime(d1 / "report.json") == strip_runtime(d2 / "report.json");
    return s;
}

// 10. determinism and effort stability
void criterion10(const SuiteRuns& runs) {
    if (!runs.have) {
        report(10, false, "suite run produced no report (exit " + std::to_string(runs.rc1) + ")");
        return;
    }
    const bool identical = runs.identical;
    const int rc1 = runs.rc1, rc2 = runs.rc2;
    const json& reports = runs.reports;

    // doubled effort: plan.refined() doubles shells per octave and sphere order
    auto rep = by_theorem(reports);
    bool stable = true;
    int compared = 0;
    double worst = 0.0;  // |change| / reported error
    auto compare = [&](double base, double err, double refined) {
        ++compared;
        double gap = std::abs(refined - base);
        worst = std::max(worst, err > 0 ? gap / err : (gap == 0 ? 0.0 : INFINITY));
        stable = stable && gap <= err + 1e-12 * std::abs(base);
    };
    for (const char* id : {"br-1", "gfrac"}) {
        auto tc = TheoremCase::from_json(rep.at(id)["case"]);
        tc.functions = id == std::string("br-1") ? std::vector<std::string>{"ball:a=1", "gauss"}
                                                 : std::vector<std::string>{"gauss"};
        auto base = run_theorem(tc);
        tc.plan = tc.plan.refined();
        auto fine = run_theorem(tc);
        for (std::size_t i = 0; i < base.results.size(); ++i) {
            compare(base.results[i].lhs, base.results[i].lhs_error, fine.results[i].lhs);
            compare(base.results[i].rhs, base.results[i].rhs_error, fine.results[i].rhs);
        }
    }
    auto g = aniso();
    QuadraturePlan plan = TheoremCase::harness_plan();
    KernelParams k(g, 1.0, 2.0);
    auto kb = kernel_lebesgue_norm(k, 1.2, plan), kf = kernel_lebesgue_norm(k, 1.2, plan.refined());
    compare(kb.value, kb.error, kf.value);
    for (const char* spec : {"ball:a=1", "gauss", "shift:z=0.5,0.25:base=ball:a=0.5"}) {
        auto f = TestFunction::parse(spec);
        auto phi = RadialProfile::power(1.0, -1.0);
        auto nb = gen_morrey_norm(f, g, 2.0, phi, TheoremCase::harness_grid(), plan);
        auto nf = gen_morrey_norm(f, g, 2.0, phi, TheoremCase::harness_grid(), plan.refined());
        compare(nb.sup.value, nb.sup.error, nf.sup.value);
    }
    report(10, identical && stable && rc1 == 0 && rc2 == 0,
           std::string("two suite runs ") + (identical ? "byte-identical" : "DIFFER") + " modulo runtime (exit " +
               std::to_string(rc1) + ", " + std::to_string(rc2) + "); " + std::to_string(compared) +
               " norms at doubled effort, max change / error estimate " + num(worst));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string cli = (fs::path(argv[0]).parent_path() / "hmorrey").string();
    std::string work = (fs::temp_directory_path() / "hmorrey_acceptance").string();
    app.add_option("--cli", cli, "path of the hmorrey executable");
    app.add_option("--work", work, "scratch directory for suite reports");
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(work);

    const QuadraturePlan plan;
    try {
        auto runs = run_suites(cli, work);
        criterion1(plan);
        criterion2(plan);
        criterion3(plan);
        criterion4();
        if (runs.have) {
            auto rep = by_theorem(runs.reports);
            criterion5(rep, plan);
            criterion6(rep, plan);
            criterion7(rep);
            criterion8(rep, plan);
        } else {
            for (int id : {5, 6, 7, 8}) report(id, false, "no suite report");
        }
        criterion9(plan);
        criterion10(runs);
    } catch (const std::exception& e) {
        std::printf("acceptance aborted: %s\n", e.what());
        return 2;
    }
    int failed = 0;
    for (const auto& l : lines) failed += l.pass ? 0 : 1;
    std::printf("%d of %zu criteria pass\n", static_cast<int>(lines.size()) - failed, lines.size());
    return failed == 0 ? 0 : 1;
}
