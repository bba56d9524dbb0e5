#include "hmorrey/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "hmorrey/errors.hpp"
#include "hmorrey/parallel.hpp"
#include "hmorrey/quadrature.hpp"
#include "hmorrey/util.hpp"

namespace hmorrey {

AverageConvention parse_average_convention(const std::string& name) {
    if (name == "literal") return AverageConvention::literal;
    if (name == "mean") return AverageConvention::mean;
    throw InputError("unknown averaging convention '" + name + "' (literal|mean)");
}

std::string convention_name(AverageConvention c) {
    return c == AverageConvention::literal ? "literal" : "mean";
}

BallSampler::BallSampler(const GroupDescriptor& g, std::vector<double> radii, const QuadraturePlan& plan,
                         std::vector<double> breaks, bool coarse)
    : g_(g), radii_(std::move(radii)), coarse_(coarse) {
    plan.validate();
    if (radii_.empty()) throw InputError("ball sampler needs at least one radius");
    std::sort(radii_.begin(), radii_.end());
    radii_.erase(std::unique(radii_.begin(), radii_.end()), radii_.end());
    if (!(radii_.front() > 0.0) || !std::isfinite(radii_.back())) throw InputError("ball radii must be positive");
    const double r_in = radii_.front() / 16;
    breaks.insert(breaks.end(), radii_.begin(), radii_.end());
    breaks.push_back(2 * r_in);
    breaks.push_back(4 * r_in);
    auto edges = shell_edges(r_in, radii_.back(), plan.shells_per_octave, breaks);

    const double Q = g.Q();
    auto add_family = [&](int nodes, const SphereRule& rule, bool fine_set, std::size_t e) {
        const GaussRule& gl = gauss_legendre(nodes);
        const double u0 = std::log(edges[e]), u1 = std::log(edges[e + 1]);
        const double half = 0.5 * (u1 - u0), mid = 0.5 * (u0 + u1);
        for (int i = 0; i < nodes; ++i) {
            double t = std::exp(mid + half * gl.x[i]);
            double radial_w = gl.w[i] * half * std::pow(t, Q);
            auto j = static_cast<std::size_t>(std::lower_bound(radii_.begin(), radii_.end(), t) - radii_.begin());
            int oct = t < 2 * r_in ? 1 : (t < 4 * r_in ? 2 : 0);
            for (std::size_t k = 0; k < rule.size(); ++k) {
                points_.push_back(g.dilate(t, rule.nodes[k]));
                w_fine_.push_back(fine_set ? radial_w * rule.weights[k] : 0.0);
                w_coarse_.push_back(fine_set ? 0.0 : radial_w * rule.weights[k]);
                ball_.push_back(j);
                octave_.push_back(oct);
            }
        }
    };
    SphereRule fine = g.sphere_rule(plan.sphere_order);
    SphereRule crude = g.sphere_rule(std::max(1, plan.sphere_order / 2));
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        add_family(plan.nodes_per_shell, fine, true, e);
        if (coarse_) add_family(std::max(1, plan.nodes_per_shell / 2), crude, false, e);
    }
}

// Adds the extrapolated inner ball: the two innermost octaves fix the local
// power law t^kappa of the cumulative integral.
Integral BallSampler::finish(double fine, double coarse, double i1f, double i2f, double i1c, double i2c) const {
    auto inner = [](double i1, double i2) {
        if (i1 == 0.0) return 0.0;
        double kappa = std::log2(i2 / i1);
        if (!(kappa > 0.05)) throw DivergenceError("ball integral diverges at the origin");
        return i1 / (std::exp2(kappa) - 1.0);
    };
    double f = fine + inner(i1f, i2f);
    if (!coarse_) return {f, 0.0};
    double c = coarse + inner(i1c, i2c);
    return {f, 2 * std::abs(f - c)};
}

std::vector<Integral> BallSampler::cumulative(const std::vector<double>& values,
                                              const std::function<double(double)>& F) const {
    if (values.size() != points_.size()) throw InputError("sample count does not match the sampler");
    const std::size_t J = radii_.size();
    std::vector<KahanSum> bf(J), bc(J);
    double i1f = 0, i2f = 0, i1c = 0, i2c = 0;
    for (std::size_t n = 0; n < points_.size(); ++n) {
        if (w_fine_[n] == 0.0 && w_coarse_[n] == 0.0) continue;
        double v = F(values[n]);
        if (!std::isfinite(v)) throw DivergenceError("ball integrand is not finite");
        double vf = w_fine_[n] * v, vc = w_coarse_[n] * v;
        bf[ball_[n]].add(vf);
        bc[ball_[n]].add(vc);
        if (octave_[n] == 1) i1f += vf, i1c += vc;
        if (octave_[n] == 2) i2f += vf, i2c += vc;
    }
    std::vector<Integral> out(J);
    double af = 0.0, ac = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        af += bf[j].value();
        ac += bc[j].value();
        out[j] = finish(af, ac, i1f, i2f, i1c, i2c);
    }
    return out;
}

std::vector<Integral> BallSampler::per_ball(const std::vector<double>& values,
                                            const std::function<double(double, std::size_t)>& F) const {
    if (values.size() != points_.size()) throw InputError("sample count does not match the sampler");
    std::vector<Integral> out(radii_.size());
    for (std::size_t j = 0; j < radii_.size(); ++j) {
        KahanSum sf, sc;
        double i1f = 0, i2f = 0, i1c = 0, i2c = 0;
        for (std::size_t n = 0; n < points_.size() && ball_[n] <= j; ++n) {
            double v = F(values[n], j);
            if (!std::isfinite(v)) throw DivergenceError("ball integrand is not finite");
            double vf = w_fine_[n] * v, vc = w_coarse_[n] * v;
            sf.add(vf);
            sc.add(vc);
            if (octave_[n] == 1) i1f += vf, i1c += vc;
            if (octave_[n] == 2) i2f += vf, i2c += vc;
        }
        out[j] = finish(sf.value(), sc.value(), i1f, i2f, i1c, i2c);
    }
    return out;
}

std::vector<double> sample(const TestFunction& f, const GroupDescriptor& g, const BallSampler& s) {
    auto terms = f.terms(g);
    const auto& pts = s.points();
    std::vector<double> v(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { v[i] = eval_terms(terms, g, pts[i]); });
    return v;
}

std::vector<double> sampler_breaks(const TestFunction& f, const GroupDescriptor& g) {
    std::vector<double> out;
    for (const auto& t : f.terms(g)) {
        double m = g.quasi_norm(t.center);
        if (m > 0.0) out.push_back(m);
        for (double a : t.base.breakpoints()) {
            a /= t.scale;
            out.push_back(a + m);
            if (std::abs(a - m) > 0.0) out.push_back(std::abs(a - m));
        }
    }
    return out;
}

namespace {

// Radial catalog functions integrate exactly in one dimension.
struct RadialRoute {
    const GroupDescriptor& g;
    std::vector<RadialTerm> terms;
    std::vector<double> breaks;
    const QuadraturePlan& plan;

    RadialRoute(const TestFunction& f, const GroupDescriptor& g_, const QuadraturePlan& plan_)
        : g(g_), terms(f.terms(g_)), plan(plan_) {
        for (const auto& t : terms) {
            for (double a : t.base.breakpoints()) breaks.push_back(a / t.scale);
        }
    }

    double value(double t) const {
        KahanSum s;
        for (const auto& term : terms) s.add(term.coef * term.base(term.scale * t));
        return s.value();
    }

    std::vector<Integral> cumulative(const std::vector<double>& radii, const std::function<double(double)>& F) const {
        std::vector<Integral> out(radii.size());
        auto h = [&](double t) { return F(value(t)); };
        Integral acc;
        double lo = 0.0;
        for (std::size_t j = 0; j < radii.size(); ++j) {
            Integral seg = radial_integrate(g, h, lo, radii[j], plan, breaks);
            acc.value += seg.value;
            acc.error += seg.error;
            out[j] = acc;
            lo = radii[j];
        }
        return out;
    }

    // int_{B(0,r)} |f - a|^p, split where f crosses a
    Integral oscillation(double r, double a, double p) const {
        std::vector<double> br = breaks;
        const int scan = 64;
        double lo = r * 1e-12;
        double prev_t = lo, prev = value(lo) - a;
        for (int i = 1; i <= scan; ++i) {
            double t = lo * std::pow(r / lo, static_cast<double>(i) / scan);
            double cur = value(t) - a;
            if ((prev < 0.0) != (cur < 0.0) && std::isfinite(prev) && std::isfinite(cur)) {
                double x0 = prev_t, x1 = t;
                for (int k = 0; k < 100 && x1 - x0 > 1e-15 * x1; ++k) {
                    double xm = 0.5 * (x0 + x1);
                    if ((value(xm) - a < 0.0) == (prev < 0.0)) x0 = xm;
                    else x1 = xm;
                }
                br.push_back(0.5 * (x0 + x1));
            }
            prev_t = t;
            prev = cur;
        }
        auto h = [&](double t) { return std::pow(std::abs(value(t) - a), p); };
        return radial_integrate(g, h, 0.0, r, plan, br);
    }
};

void check_p(double p, const char* what) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InputError(std::string(what) + " needs 1 <= p < inf");
}

SpaceNorm sup_with_errors(const std::vector<double>& r, const std::vector<double>& v, const std::vector<double>& e) {
    SpaceNorm out;
    out.sup = sup_over_grid(r, v, 0.0);
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] == out.sup.argmax) out.sup.error = e[i];
    return out;
}

std::vector<double> checked_profile(const RadialProfile& phi, const std::vector<double>& r, const char* name) {
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        out[i] = phi(r[i]);
        if (!(out[i] > 0.0) || !std::isfinite(out[i]))
            throw DomainError(std::string(name) + " is not positive at r=" + format_number(r[i]));
    }
    return out;
}

void warn_unless(SpaceNorm& n, const RadialProfile& phi, Condition c, double Q, double p) {
    ConditionParams cp;
    cp.Q = Q;
    cp.p = p;
    auto res = check_condition(phi, c, cp, QuadraturePlan{});
    if (!res.holds) n.warnings.push_back(condition_name(c) + ": " + res.note);
}

// |f|^p integrals over every ball of the grid
std::vector<Integral> power_integrals(const TestFunction& f, const GroupDescriptor& g, double p,
                                      const std::vector<double>& r, const QuadraturePlan& plan) {
    auto F = [p](double v) { return std::pow(std::abs(v), p); };
    if (f.radial()) return RadialRoute(f, g, plan).cumulative(r, F);
    BallSampler s(g, r, plan, sampler_breaks(f, g));
    return s.cumulative(sample(f, g, s), F);
}

// value and error of phi^-1 (r^-Q I)^(1/p)
void scaled_root(const Integral& I, double r, double phi, double p, double Q, double& v, double& e) {
    double base = std::pow(std::max(I.value, 0.0) / std::pow(r, Q), 1.0 / p);
    v = base / phi;
    e = I.value > 0.0 ? v * I.error / (p * I.value) : std::pow(I.error / std::pow(r, Q), 1.0 / p) / phi;
}

double average_norm(const GroupDescriptor& g, double r, AverageConvention conv) {
    double n = std::pow(r, g.Q());
    return conv == AverageConvention::mean ? n * g.vol1() : n;
}

SpaceNorm campanato_from(const std::vector<double>& r, const std::vector<Integral>& avg_integrals,
                         const std::function<Integral(std::size_t, double)>& osc, const GroupDescriptor& g,
                         double p, const RadialProfile& phi, AverageConvention conv) {
    auto ph = checked_profile(phi, r, "phi");
    const double Q = g.Q();
    std::vector<double> v(r.size()), e(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        double n = average_norm(g, r[j], conv);
        double a = avg_integrals[j].value / n;
        double a_err = avg_integrals[j].error / n;
        Integral I = osc(j, a);
        scaled_root(I, r[j], ph[j], p, Q, v[j], e[j]);
        // Minkowski: moving a by da moves the L^p norm by at most da |B|^(1/p)
        e[j] += a_err * std::pow(g.vol1(), 1.0 / p) / ph[j];
    }
    auto out = sup_with_errors(r, v, e);
    warn_unless(out, phi, Condition::campanato_monotone, Q, p);
    return out;
}

}  // namespace

Integral lebesgue_ball_norm(const TestFunction& f, const GroupDescriptor& g, double p, double r,
                            const QuadraturePlan& plan) {
    check_p(p, "lebesgue_ball_norm");
    if (!(r > 0.0)) throw InputError("lebesgue_ball_norm needs r > 0");
    Integral I = power_integrals(f, g, p, {r}, plan)[0];
    double v = std::pow(I.value, 1.0 / p);
    return {v, I.value > 0.0 ? v * I.error / (p * I.value) : 0.0};
}

SpaceNorm morrey_norm(const TestFunction& f, const GroupDescriptor& g, double p, double q, const RadiusGrid& grid,
                      const QuadraturePlan& plan) {
    check_p(p, "morrey_norm");
    if (p > q) throw InputError("morrey_norm needs p <= q");
    auto r = grid.points();
    auto I = power_integrals(f, g, p, r, plan);
    const double Q = g.Q();
    std::vector<double> v(r.size()), e(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        // r^(Q(1/q-1/p)) ||f||_p = (r^-Q I)^(1/p) / r^(-Q/q)
        scaled_root(I[j], r[j], std::pow(r[j], -Q / q), p, Q, v[j], e[j]);
    }
    return sup_with_errors(r, v, e);
}

SpaceNorm gen_morrey_norm(const TestFunction& f, const GroupDescriptor& g, double p, const RadialProfile& phi,
                          const RadiusGrid& grid, const QuadraturePlan& plan) {
    check_p(p, "gen_morrey_norm");
    auto r = grid.points();
    auto ph = checked_profile(phi, r, "phi");
    auto I = power_integrals(f, g, p, r, plan);
    std::vector<double> v(r.size()), e(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) scaled_root(I[j], r[j], ph[j], p, g.Q(), v[j], e[j]);
    auto out = sup_with_errors(r, v, e);
    warn_unless(out, phi, Condition::morrey_monotone, g.Q(), p);
    return out;
}

SpaceNorm gen_morrey_norm(const BallSampler& s, const std::vector<double>& values, double p,
                          const RadialProfile& phi) {
    check_p(p, "gen_morrey_norm");
    const auto& r = s.radii();
    auto ph = checked_profile(phi, r, "phi");
    auto I = s.cumulative(values, [p](double v) { return std::pow(std::abs(v), p); });
    std::vector<double> v(r.size()), e(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) scaled_root(I[j], r[j], ph[j], p, s.group().Q(), v[j], e[j]);
    auto out = sup_with_errors(r, v, e);
    warn_unless(out, phi, Condition::morrey_monotone, s.group().Q(), p);
    return out;
}

Integral ball_average(const TestFunction& f, const GroupDescriptor& g, double r, const QuadraturePlan& plan,
                      AverageConvention conv) {
    if (!(r > 0.0)) throw InputError("ball_average needs r > 0");
    auto id = [](double v) { return v; };
    Integral I;
    if (f.radial()) {
        I = RadialRoute(f, g, plan).cumulative({r}, id)[0];
    } else {
        BallSampler s(g, {r}, plan, sampler_breaks(f, g));
        I = s.cumulative(sample(f, g, s), id)[0];
    }
    double n = average_norm(g, r, conv);
    return {I.value / n, I.error / n};
}

SpaceNorm campanato_norm(const TestFunction& f, const GroupDescriptor& g, double p, const RadialProfile& phi,
                         const RadiusGrid& grid, const QuadraturePlan& plan, AverageConvention conv) {
    check_p(p, "campanato_norm");
    auto r = grid.points();
    auto id = [](double v) { return v; };
    if (f.radial()) {
        RadialRoute route(f, g, plan);
        auto A = route.cumulative(r, id);
        return campanato_from(
            r, A, [&](std::size_t j, double a) { return route.oscillation(r[j], a, p); }, g, p, phi, conv);
    }
    BallSampler s(g, r, plan, sampler_breaks(f, g));
    return campanato_norm(s, sample(f, g, s), p, phi, conv);
}

SpaceNorm campanato_norm(const BallSampler& s, const std::vector<double>& values, double p,
                         const RadialProfile& phi, AverageConvention conv) {
    check_p(p, "campanato_norm");
    const auto& r = s.radii();
    auto A = s.cumulative(values, [](double v) { return v; });
    std::vector<double> a(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) a[j] = A[j].value / average_norm(s.group(), r[j], conv);
    auto O = s.per_ball(values, [&](double v, std::size_t j) { return std::pow(std::abs(v - a[j]), p); });
    return campanato_from(
        r, A, [&](std::size_t j, double) { return O[j]; }, s.group(), p, phi, conv);
}

Integral sigma_limit(const TestFunction& f, const GroupDescriptor& g, const RadialProfile& phi,
                     const QuadraturePlan& plan, AverageConvention conv) {
    ConditionParams cp;
    cp.Q = g.Q();
    try {
        check_condition(phi, Condition::phi_tail_finite, cp, plan);
    } catch (const DivergenceError&) {
        throw HypothesisError("sigma_limit needs int_1^inf phi(t)/t dt finite");
    }
    const int K = 60;
    std::vector<double> r(K + 1);
    for (int k = 0; k <= K; ++k) r[k] = std::ldexp(1.0, k);
    auto id = [](double v) { return v; };
    std::vector<Integral> I;
    if (f.radial()) {
        I = RadialRoute(f, g, plan).cumulative(r, id);
    } else {
        BallSampler s(g, r, plan, sampler_breaks(f, g));
        I = s.cumulative(sample(f, g, s), id);
    }
    std::vector<double> a(r.size()), ae(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        double n = average_norm(g, r[k], conv);
        a[k] = I[k].value / n;
        ae[k] = I[k].error / n;
    }
    std::vector<double> pb = phi.breakpoints();
    auto tilde = [&](double x) {
        return integrate_log([&](double t) { return phi(t) / t; }, x, INFINITY, pb, 1e-8, "phi tail").value;
    };
    double C = 0.0, scale = std::abs(a[0]);
    for (int k = 0; k < K; ++k) {
        // tolerance relative to the averages seen so far
        scale = std::max(scale, std::abs(a[k + 1]));
        if (scale == 0.0) continue;
        double pt = tilde(r[k]);
        double d = std::abs(a[k + 1] - a[k]);
        C = std::max(C, d / pt);
        if (k >= 3 && d <= plan.tol * scale && C * tilde(r[k + 1]) <= plan.tol * scale)
            return {a[k + 1], C * tilde(r[k + 1]) + ae[k + 1]};
    }
    if (scale == 0.0) return {0.0, 0.0};
    throw ConvergenceError("ball averages do not settle below r=2^60 (f=" + f.spec() + ", phi=" + phi.spec() + ")");
}

}  // namespace hmorrey
