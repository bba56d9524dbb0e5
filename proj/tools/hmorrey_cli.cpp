#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "hmorrey/errors.hpp"
#include "hmorrey/harness.hpp"
#include "hmorrey/kernels.hpp"
#include "hmorrey/operators.hpp"
#include "hmorrey/parallel.hpp"
#include "hmorrey/spaces.hpp"
#include "hmorrey/util.hpp"

using namespace hmorrey;
using nlohmann::json;

namespace {

struct Common {
    std::uint64_t seed = 0;
    double tol = 1e-3;
    int threads = 0;
    std::string out;
    std::string plan;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "Monte-Carlo seed")->capture_default_str();
    app->add_option("--tol", c.tol, "quadrature tolerance")->capture_default_str();
    app->add_option("--threads", c.threads, "parallel width (0: all cores)");
    app->add_option("--out", c.out, "output path (default stdout)");
    app->add_option("--plan", c.plan, "quadrature plan, e.g. spo=2,nodes=4,sphere=8");
}

QuadraturePlan make_plan(const Common& c, QuadraturePlan base = {}) {
    QuadraturePlan p = c.plan.empty() ? base : QuadraturePlan::parse(c.plan, base);
    p.tol = c.tol;
    p.mc_seed = c.seed;
    p.validate();
    return p;
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty() || c.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    f << text;
    if (!f) throw IoError("cannot write " + c.out);
}

void emit_json(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

json sup_json(const SupNorm& s, double tol) {
    return {{"value", s.value},         {"error", s.error}, {"tolerance", tol}, {"argmax", s.argmax},
            {"boundary_attained", s.boundary_attained}, {"bounded", s.bounded}};
}

// "grid:L=4:res=17" (nodes -L + 2Lk/(res-1) per axis) or "pts:x,y;x,y"
std::vector<Point> parse_points(const std::string& spec, const GroupDescriptor& g) {
    std::vector<Point> pts;
    if (spec.rfind("pts:", 0) == 0) {
        for (const auto& item : split(spec.substr(4), ';')) {
            auto v = parse_doubles(item, ',', "point");
            if (v.size() != g.n()) throw InputError("point '" + item + "' has the wrong dimension");
            pts.emplace_back(v);
        }
        return pts;
    }
    if (spec.rfind("grid:", 0) != 0) throw InputError("points must be grid:L=..:res=.. or pts:x,y;...");
    double L = 1.0;
    long res = 2;
    for (const auto& kv : split(spec.substr(5), ':')) {
        auto parts = split(kv, '=');
        if (parts.size() != 2) throw InputError("bad points field '" + kv + "'");
        if (parts[0] == "L") L = parse_double(parts[1], "grid L");
        else if (parts[0] == "res") res = parse_long(parts[1], "grid res");
        else throw InputError("unknown points field '" + parts[0] + "'");
    }
    if (!(L > 0.0) || res < 1) throw InputError("grid needs L > 0 and res >= 1");
    std::size_t total = 1;
    for (std::size_t i = 0; i < g.n(); ++i) total *= static_cast<std::size_t>(res);
    if (total > (std::size_t{1} << 22)) throw ResourceError("point grid too large");
    for (std::size_t k = 0; k < total; ++k) {
        Point x(g.n());
        std::size_t rest = k;
        for (std::size_t i = g.n(); i-- > 0;) {
            long j = static_cast<long>(rest % res);
            rest /= res;
            x[i] = res == 1 ? 0.0 : -L + 2.0 * L * j / (res - 1);
        }
        pts.push_back(x);
    }
    return pts;
}

int run_group(const std::string& spec, const Common& c) {
    auto g = GroupDescriptor::parse(spec);
    auto plan = make_plan(c);
    auto s = sphere_measure(g, plan);
    std::vector<double> w = g.weights();
    json j{{"group", g.spec()},
           {"law", g.law_name()},
           {"norm", g.norm_name()},
           {"n", g.n()},
           {"weights", w},
           {"Q", g.Q()},
           {"sigma", g.sigma()},
           {"vol1", g.vol1()},
           {"sigma_estimate", s.value},
           {"sigma_std_error", s.std_error},
           {"exact", s.exact},
           {"tolerance", plan.tol}};
    emit_json(c, j);
    return 0;
}

struct KernelArgs {
    std::string group = "abelian:aniso:nu=1,2";
    double alpha = NAN, gamma = NAN, p1 = NAN, p2 = NAN, R = 1.0;
    std::string omega, method = "quadrature";
};

int run_kernel(const KernelArgs& a, const Common& c) {
    auto g = GroupDescriptor::parse(a.group);
    auto plan = make_plan(c);
    KernelParams k(g, a.alpha, a.gamma);
    json j{{"method", a.method}, {"tolerance", plan.tol}, {"group", g.spec()}};
    json constants{{"alpha", a.alpha}, {"gamma", a.gamma}, {"p1", a.p1}, {"Q", g.Q()}, {"sigma", g.sigma()}};
    if (a.method == "dyadic") {
        auto d = dyadic_sum(k, a.p1, a.R, plan.tol);
        auto s = sandwich_check(k, a.p1, a.R, plan);
        j["value"] = d.value;
        j["error"] = d.truncation_error;
        j["quantity"] = "S(R)";
        constants["R"] = a.R;
        constants["a"] = d.a;
        constants["b"] = d.b;
        constants["C_lower"] = s.C_lower;
        constants["C_upper"] = s.C_upper;
        constants["norm_p1"] = s.norm_p1;
        constants["slack"] = s.slack;
        constants["lower_ok"] = s.lower_ok;
        constants["upper_ok"] = s.upper_ok;
    } else if (a.method == "quadrature") {
        if (!a.omega.empty()) {
            auto omega = RadialProfile::parse(a.omega);
            auto n = kernel_gen_morrey_norm(k, a.p2, omega, plan);
            j["value"] = n.norm.value;
            j["error"] = n.norm.error;
            j["quantity"] = "gen-morrey";
            constants["p2"] = a.p2;
            constants["omega"] = omega.spec();
            constants["argmax"] = n.norm.argmax;
            constants["bounded"] = n.norm.bounded;
            constants["omega_hypothesis_holds"] = n.hypothesis_holds;
            constants["omega_hypothesis_constant"] = n.hypothesis_constant;
        } else if (!std::isnan(a.p2)) {
            auto n = kernel_morrey_norm(k, a.p2, a.p1, plan);
            j["value"] = n.value;
            j["error"] = n.error;
            j["quantity"] = "morrey";
            constants["p2"] = a.p2;
            constants["argmax"] = n.argmax;
            constants["bounded"] = n.bounded;
        } else {
            auto n = kernel_lebesgue_norm(k, a.p1, plan);
            j["value"] = n.value;
            j["error"] = n.error;
            j["quantity"] = "lebesgue";
        }
    } else {
        throw InputError("method must be quadrature or dyadic");
    }
    j["constants"] = constants;
    emit_json(c, j);
    return 0;
}

struct OpArgs {
    std::string op, group = "abelian:aniso:nu=1,2", f, rho;
    double alpha = NAN, gamma = NAN;
    std::string points = "grid:L=4:res=17";
    std::string format = "csv";
};

int run_op(const OpArgs& a, const Common& c) {
    auto g = GroupDescriptor::parse(a.group);
    auto plan = make_plan(c);
    auto f = TestFunction::parse(a.f);
    auto pts = parse_points(a.points, g);
    auto rho = [&] {
        if (a.rho.empty()) throw InputError("--op " + a.op + " needs --rho");
        return RadialProfile::parse(a.rho);
    };
    OperatorResult r;
    if (a.op == "maximal") r = maximal_function(f, g, pts, RadiusGrid::maximal_default(), plan);
    else if (a.op == "br") r = apply_bessel_riesz(f, g, KernelParams(g, a.alpha, a.gamma), pts, plan);
    else if (a.op == "gbr") r = apply_gen_bessel_riesz(f, g, rho(), a.gamma, pts, plan);
    else if (a.op == "gfrac") r = apply_gen_fractional(f, g, rho(), pts, plan);
    else if (a.op == "modfrac") r = apply_mod_fractional(f, g, rho(), pts, plan);
    else throw InputError("unknown operator '" + a.op + "'");
    if (a.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < pts.size(); ++i)
            rows.push_back({{"point", pts[i].to_vector()}, {"value", r.values[i]}, {"err_estimate", r.errors[i]}});
        emit_json(c, {{"op", a.op}, {"function", f.spec()}, {"plan", plan.describe()}, {"tolerance", plan.tol},
                      {"results", rows}});
        return 0;
    }
    if (a.format != "csv") throw InputError("format must be csv or json");
    std::ostringstream out;
    for (std::size_t i = 0; i < g.n(); ++i) out << "x" << i << ",";
    out << "value,err_estimate\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (double x : pts[i]) out << format_number(x) << ",";
        out << format_number(r.values[i]) << "," << format_number(r.errors[i]) << "\n";
    }
    emit(c, out.str());
    return 0;
}

struct SpaceArgs {
    std::string space, group = "abelian:aniso:nu=1,2", f, phi, avg = "literal";
    double p = NAN, q = NAN, r = INFINITY;
};

int run_space(const SpaceArgs& a, const Common& c) {
    auto g = GroupDescriptor::parse(a.group);
    auto plan = make_plan(c);
    auto f = TestFunction::parse(a.f);
    auto need_phi = [&] {
        if (a.phi.empty()) throw InputError("--space " + a.space + " needs --phi");
        return RadialProfile::parse(a.phi);
    };
    json j{{"space", a.space}, {"function", f.spec()}, {"p", a.p}};
    SpaceNorm n;
    if (a.space == "lp") {
        auto v = lebesgue_ball_norm(f, g, a.p, a.r, plan);
        j["value"] = v.value;
        j["error"] = v.error;
        j["tolerance"] = plan.tol;
        j["r"] = std::isfinite(a.r) ? json(a.r) : json("inf");
        emit_json(c, j);
        return 0;
    }
    if (a.space == "morrey") {
        if (std::isnan(a.q)) throw InputError("--space morrey needs --q");
        n = morrey_norm(f, g, a.p, a.q, RadiusGrid::norm_default(), plan);
        j["q"] = a.q;
    } else if (a.space == "gmorrey") {
        auto phi = need_phi();
        n = gen_morrey_norm(f, g, a.p, phi, RadiusGrid::norm_default(), plan);
        j["phi"] = phi.spec();
    } else if (a.space == "campanato") {
        auto phi = need_phi();
        auto conv = parse_average_convention(a.avg);
        n = campanato_norm(f, g, a.p, phi, RadiusGrid::norm_default(), plan, conv);
        j["phi"] = phi.spec();
        j["avg"] = convention_name(conv);
    } else {
        throw InputError("unknown space '" + a.space + "'");
    }
    j.update(sup_json(n.sup, plan.tol));
    j["warnings"] = n.warnings;
    emit_json(c, j);
    return 0;
}

struct VerifyArgs {
    std::string theorem, config, suite;
};

TheoremCase default_case(const std::string& theorem) {
    for (auto& c : default_suite())
        if (c.theorem == theorem) return c;
    throw ConfigError("unknown theorem id '" + theorem + "'");
}

void apply_overrides(TheoremCase& tc, const Common& c, bool tol_given) {
    if (!c.plan.empty()) tc.plan = QuadraturePlan::parse(c.plan, tc.plan);
    if (tol_given) tc.plan.tol = c.tol;
    tc.plan.mc_seed = c.seed;
    tc.plan.validate();
}

int run_verify(const VerifyArgs& a, const Common& c, bool tol_given) {
    std::vector<TheoremCase> cases;
    if (!a.suite.empty()) {
        if (a.suite != "default") throw InputError("the only bundled suite is 'default'");
        cases = default_suite();
    } else if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in) throw IoError("cannot read " + a.config);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad case JSON: ") + e.what());
        }
        if (j.is_array()) {
            for (const auto& e : j) cases.push_back(TheoremCase::from_json(e));
        } else {
            if (!a.theorem.empty() && !j.contains("theorem")) j["theorem"] = a.theorem;
            cases.push_back(TheoremCase::from_json(j));
        }
        if (!a.theorem.empty())
            for (const auto& tc : cases)
                if (tc.theorem != a.theorem) throw ConfigError("config theorem differs from --theorem");
    } else if (!a.theorem.empty()) {
        cases.push_back(default_case(a.theorem));
    } else {
        throw InputError("verify needs --theorem, --config or --suite");
    }
    for (auto& tc : cases) apply_overrides(tc, c, tol_given);
    if (!a.suite.empty()) {
        if (c.out.empty()) {
            auto s = run_suite(cases);
            json arr = json::array();
            for (const auto& r : s.reports) arr.push_back(r.to_json());
            std::cout << arr.dump(2) << "\n";
            return s.all_pass ? 0 : 1;
        }
        auto s = run_suite(cases, c.out);
        std::cout << summary_csv(s);
        return s.all_pass ? 0 : 1;
    }
    // single cases propagate numerical errors with their own exit codes
    json arr = json::array();
    bool pass = true;
    for (const auto& tc : cases) {
        auto r = run_theorem(tc);
        pass = pass && r.pass;
        arr.push_back(r.to_json());
    }
    emit_json(c, arr.size() == 1 ? arr[0] : arr);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operators and Morrey-type norms on homogeneous groups"};
    app.require_subcommand(1);
    Common common;

    auto* group = app.add_subcommand("group", "group descriptors");
    auto* group_info = group->add_subcommand("info", "Q, |sigma| and vol1");
    group->require_subcommand(1);
    std::string group_spec;
    group_info->add_option("--group", group_spec, "group spec")->required();
    add_common(group_info, common);

    auto* kernel = app.add_subcommand("kernel", "Bessel-Riesz kernel norms");
    auto* kernel_norm = kernel->add_subcommand("norm", "Lebesgue, Morrey or generalised Morrey norm");
    kernel->require_subcommand(1);
    KernelArgs ka;
    kernel_norm->add_option("--group", ka.group)->capture_default_str();
    kernel_norm->add_option("--alpha", ka.alpha)->required();
    kernel_norm->add_option("--gamma", ka.gamma)->required();
    kernel_norm->add_option("--p1", ka.p1)->required();
    kernel_norm->add_option("--p2", ka.p2);
    kernel_norm->add_option("--omega", ka.omega, "profile spec");
    kernel_norm->add_option("--method", ka.method)->check(CLI::IsMember({"quadrature", "dyadic"}))->capture_default_str();
    kernel_norm->add_option("--R", ka.R)->capture_default_str();
    add_common(kernel_norm, common);

    auto* op = app.add_subcommand("op", "operator application");
    auto* op_apply = op->add_subcommand("apply", "evaluate an operator at points");
    op->require_subcommand(1);
    OpArgs oa;
    op_apply->add_option("--op", oa.op)->required()->check(CLI::IsMember({"maximal", "br", "gbr", "gfrac", "modfrac"}));
    op_apply->add_option("--group", oa.group)->capture_default_str();
    op_apply->add_option("--f", oa.f, "catalog function spec")->required();
    op_apply->add_option("--rho", oa.rho, "profile spec");
    op_apply->add_option("--alpha", oa.alpha);
    op_apply->add_option("--gamma", oa.gamma);
    op_apply->add_option("--points", oa.points)->capture_default_str();
    op_apply->add_option("--format", oa.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    add_common(op_apply, common);

    auto* space = app.add_subcommand("space", "function space norms");
    auto* space_norm = space->add_subcommand("norm", "Lebesgue, Morrey, generalised Morrey or Campanato norm");
    space->require_subcommand(1);
    SpaceArgs sa;
    space_norm->add_option("--space", sa.space)->required()->check(CLI::IsMember({"lp", "morrey", "gmorrey", "campanato"}));
    space_norm->add_option("--group", sa.group)->capture_default_str();
    space_norm->add_option("--f", sa.f)->required();
    space_norm->add_option("--p", sa.p)->required();
    space_norm->add_option("--q", sa.q);
    space_norm->add_option("--phi", sa.phi, "profile spec");
    space_norm->add_option("--avg", sa.avg)->check(CLI::IsMember({"literal", "mean"}))->capture_default_str();
    space_norm->add_option("--r", sa.r, "ball radius for lp (default: whole group)");
    add_common(space_norm, common);

    auto* verify = app.add_subcommand("verify", "theorem verification");
    VerifyArgs va;
    verify->add_option("--theorem", va.theorem)->check(CLI::IsMember(theorem_ids()));
    verify->add_option("--config", va.config, "case JSON (object or array)");
    verify->add_option("--suite", va.suite, "bundled suite name");
    add_common(verify, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::usage);
    }

    try {
        set_threads(common.threads);
        if (group_info->parsed()) return run_group(group_spec, common);
        if (kernel_norm->parsed()) return run_kernel(ka, common);
        if (op_apply->parsed()) return run_op(oa, common);
        if (space_norm->parsed()) return run_space(sa, common);
        if (verify->parsed()) return run_verify(va, common, verify->count("--tol") > 0);
    } catch (const Error& e) {
        json err{{"error", e.what()}, {"category", e.category()}};
        std::cerr << err.dump() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        json err{{"error", e.what()}, {"category", "internal"}};
        std::cerr << err.dump() << "\n";
        return static_cast<int>(ExitCode::divergence);
    }
    return static_cast<int>(ExitCode::usage);
}
