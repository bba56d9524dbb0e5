#include "hmorrey/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "hmorrey/errors.hpp"
#include "hmorrey/parallel.hpp"
#include "hmorrey/quadrature.hpp"
#include "hmorrey/util.hpp"

namespace hmorrey {

ConvolutionKernel::ConvolutionKernel(std::function<double(double)> k, std::string name, bool subtract)
    : k_(std::move(k)), name_(std::move(name)), subtract_(subtract) {
    double prev = INFINITY;
    for (int i = 0; i <= 160; ++i) {
        double t = std::pow(10.0, -8.0 + 0.1 * i);
        double v = k_(t);
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("kernel " + name_ + " is not positive and finite at t=" + format_number(t));
        if (v > prev * (1 + 1e-12)) throw DomainError("kernel " + name_ + " is not nonincreasing near t=" + format_number(t));
        prev = v;
    }
}

double ConvolutionKernel::inner_mass(const GroupDescriptor& g, double delta) const {
    QuadraturePlan plan;
    return radial_integrate(g, k_, 0.0, delta, plan).value;
}

ConvolutionKernel bessel_riesz_kernel(const KernelParams& k) {
    KernelParams kc = k;
    return ConvolutionKernel([kc](double t) { return kc.radial(t); },
                             "bessel-riesz(alpha=" + format_number(k.alpha()) + ",gamma=" + format_number(k.gamma()) + ")");
}

ConvolutionKernel gen_bessel_riesz_kernel(const RadialProfile& rho, double gamma, double /*Q*/) {
    if (!(gamma >= 0.0)) throw InputError("gamma must be >= 0");
    return ConvolutionKernel([rho, gamma](double t) { return rho(t) / std::pow(1.0 + t, gamma); },
                             "gen-bessel-riesz(rho=" + rho.spec() + ",gamma=" + format_number(gamma) + ")");
}

ConvolutionKernel gen_fractional_kernel(const RadialProfile& rho, double Q, bool modified) {
    return ConvolutionKernel([rho, Q](double t) { return rho(t) / std::pow(t, Q); },
                             std::string(modified ? "mod-fractional" : "gen-fractional") + "(rho=" + rho.spec() + ")",
                             modified);
}

namespace {

// 1 on [0, 1/2], 0 on [1, inf), smooth in between
double cutoff(double t) {
    if (t <= 0.5) return 1.0;
    if (t >= 1.0) return 0.0;
    double u = 2.0 * t - 1.0;
    double a = std::exp(-1.0 / (1.0 - u));
    double b = std::exp(-1.0 / u);
    return a / (a + b);
}

// Sphere rules at the plan order and at 2, 4 and 8 times it; the boosted
// ones resolve the kernel peak in centre-polar shells.
struct Rules {
    static constexpr int levels = 4;
    int nodes = 4;
    int nodes_coarse = 2;
    std::vector<SphereRule> fine;
    std::vector<SphereRule> coarse;
    bool with_coarse = true;

    Rules(const GroupDescriptor& g, const QuadraturePlan& plan, bool estimate)
        : nodes(plan.nodes_per_shell), nodes_coarse(std::max(1, plan.nodes_per_shell / 2)), with_coarse(estimate) {
        for (int l = 0; l < levels; ++l) {
            const int order = std::min(128, plan.sphere_order << l);
            fine.push_back(g.sphere_rule(order));
            coarse.push_back(g.sphere_rule(std::max(1, order / 2)));
        }
    }
};

// fine value plus two coarse variants: fewer radial nodes, lower sphere order
struct Pair {
    double fine = 0.0;
    double coarse = 0.0;
    double coarse_angle = 0.0;
};

// int_{t0}^{t1} t^(Q-1) G(t, rule) dt with Gauss nodes in ln t.
template <class G>
double shell(double t0, double t1, double Q, int nodes, const SphereRule& rule, G& sphere_sum) {
    const GaussRule& gl = gauss_legendre(nodes);
    const double u0 = std::log(t0), u1 = std::log(t1);
    const double half = 0.5 * (u1 - u0), mid = 0.5 * (u0 + u1);
    KahanSum s;
    for (int i = 0; i < nodes; ++i) {
        double t = std::exp(mid + half * gl.x[i]);
        double v = sphere_sum(t, rule);
        if (v != 0.0) s.add(gl.w[i] * half * std::pow(t, Q) * v);
    }
    return s.value();
}

template <class G>
Pair shells(const std::vector<double>& edges, double Q, const Rules& R, G& sphere_sum,
            const std::function<int(double, double)>& level = {}) {
    KahanSum f, c, a;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const int l = level ? level(edges[i], edges[i + 1]) : 0;
        f.add(shell(edges[i], edges[i + 1], Q, R.nodes, R.fine[l], sphere_sum));
        if (R.with_coarse) {
            c.add(shell(edges[i], edges[i + 1], Q, R.nodes_coarse, R.fine[l], sphere_sum));
            a.add(shell(edges[i], edges[i + 1], Q, R.nodes, R.coarse[l], sphere_sum));
        }
    }
    return {f.value(), c.value(), a.value()};
}

// max - min of b over [t1, t2]
double variation(const RadialBase& b, double t1, double t2) {
    t1 = std::max(t1, 0.0);
    double hi = std::max(b(t1), b(t2)), lo = std::min(b(t1), b(t2));
    for (double bp : b.breakpoints()) {
        if (bp > t1 && bp < t2) {
            for (double v : {b(bp * (1 - 1e-12)), b(bp)}) {
                hi = std::max(hi, v);
                lo = std::min(lo, v);
            }
        }
    }
    if (b.kind == RadialBase::Kind::power && b.s > 0.0 && b.cut == PowerCut::outer && t2 >= 1.0) hi = std::max(hi, 1.0);
    return hi - lo;
}

struct TermValue {
    double fine = 0.0;
    double coarse = 0.0;
    double coarse_angle = 0.0;
    double bound = 0.0;

    void add(double v) {
        fine += v;
        coarse += v;
        coarse_angle += v;
    }
    void add(double coef, const Pair& p) {
        fine += coef * p.fine;
        coarse += coef * p.coarse;
        coarse_angle += coef * p.coarse_angle;
    }
};

struct Engine {
    const ConvolutionKernel& k;
    const GroupDescriptor& g;
    const QuadraturePlan& plan;
    const Rules& rules;
    double mass_at_delta;

    double S(double norm_y) const { return k.subtract() && norm_y >= 1.0 ? k(norm_y) : 0.0; }

    double inner_mass(double delta) const {
        return delta == plan.inner_cutoff ? mass_at_delta : k.inner_mass(g, delta);
    }

    // decreasing envelope of the kernel part at c-distance s from the centre
    double kernel_envelope(double s, double m) const {
        double u = s - m;
        if (!k.subtract()) return k(u);
        if (m / s > 1e-4) return k(u) - k(s + m);
        const double h = 1e-3;
        return 2 * m * (k(u * (1 - h)) - k(u)) / (u * h);
    }

    double tail_bound(const RadialTerm& term, double R, double m, const std::string& fspec) const {
        const double Q = g.Q();
        const double sc = term.scale;
        auto F = [&](double s) {
            double e = term.base.envelope(sc * s);
            if (e == 0.0) return 0.0;
            return kernel_envelope(s, m) * e * std::pow(s, Q - 1);
        };
        try {
            Integral I = integrate_log(F, R, INFINITY, {}, 1e-3, "operator tail");
            return std::abs(term.coef) * g.sigma() * (I.value + I.error);
        } catch (const DivergenceError&) {
            throw DivergenceError("operator integral diverges at infinity: kernel " + k.name() + ", f=" + fspec);
        }
    }

    TermValue eval(const RadialTerm& term, const Point& x, const std::string& fspec) const {
        TermValue out;
        if (term.coef == 0.0) return out;
        if (term.base.kind == RadialBase::Kind::constant && term.base.c == 0.0) return out;
        const double Q = g.Q();
        const double delta = plan.inner_cutoff;
        const double sc = term.scale;
        const RadialBase& b = term.base;
        const Point& c = term.center;
        const bool c_origin = c.is_origin();
        const double d = g.quasi_norm(g.multiply(g.inverse(c), x));
        const double c_norm = g.quasi_norm(c);
        const double x_norm = g.quasi_norm(x);
        const double support = b.support() / sc;
        std::vector<double> bps;
        for (double v : b.breakpoints()) bps.push_back(v / sc);

        if (d <= delta && (c_origin || g.law() == Law::abelian) && (!k.subtract() || c_origin)) {
            // x sits on the centre: the integral is one-dimensional
            double upper = k.subtract() ? std::min(1.0, support) : support;
            auto h = [&](double t) {
                double v = b(sc * t);
                return v == 0.0 ? 0.0 : k(t) * v;
            };
            std::vector<double> br = bps;
            Integral I = radial_integrate(g, h, 0.0, upper, plan, br);
            out.add(term.coef * I.value);
            out.bound = std::abs(term.coef) * I.error;
            return out;
        }

        // The x-polar piece covers B(x, rho), chosen clear of the nonsmooth
        // set of the term where possible: its centre for powers, its jump
        // spheres otherwise.
        // A steep kernel costs the centre-polar piece more than a jump costs
        // the x-polar one, so rho is at least d/2.
        double rho = INFINITY;
        for (double a : bps) rho = std::min(rho, std::abs(d - a));
        if (!std::isfinite(rho)) rho = 2 * (d + (b.kind == RadialBase::Kind::gauss ? 6.0 : 1.0) / sc);
        rho = std::max(rho, d / 2);
        if (b.kind == RadialBase::Kind::power && b.cut != PowerCut::inner) rho = d / 2;
        rho = std::max(rho, 2 * delta);

        // near piece, polar about x
        bool near_empty = std::isfinite(support) && d - support >= rho;
        if (!near_empty) {
            const double delta_in = std::min(delta, rho / 2);
            double s_start = delta_in;
            if (std::isfinite(support)) s_start = std::max(s_start, d - support);
            std::vector<double> br{rho / 2, d};
            for (double a : bps) {
                br.push_back(std::abs(d - a));
                br.push_back(d + a);
            }
            auto edges = shell_edges(s_start, rho, plan.shells_per_octave, br);
            auto sphere_sum = [&](double s, const SphereRule& rule) {
                double kv = k(s) * cutoff(s / rho);
                if (kv == 0.0) return 0.0;
                KahanSum acc;
                for (std::size_t j = 0; j < rule.size(); ++j) {
                    Point y = g.multiply(g.inverse(g.dilate(s, rule.nodes[j])), x);
                    double v = b(sc * g.quasi_norm(g.multiply(g.inverse(c), y)));
                    if (v != 0.0) acc.add(rule.weights[j] * v);
                }
                return kv * acc.value();
            };
            out.add(term.coef, shells(edges, Q, rules, sphere_sum));
            if (s_start == delta_in) {
                double M = inner_mass(delta_in);
                out.add(term.coef * b(sc * d) * M);
                out.bound += std::abs(term.coef) * variation(b, sc * (d - delta_in), sc * (d + delta_in)) * M;
            }
        }

        // far piece, polar about the centre
        const double m = x_norm + c_norm;
        auto sphere_far = [&](double t, const SphereRule& rule) {
            double bv = b(sc * t);
            if (bv == 0.0) return 0.0;
            KahanSum acc;
            for (std::size_t j = 0; j < rule.size(); ++j) {
                Point y = g.multiply(c, g.dilate(t, rule.nodes[j]));
                double s = g.kernel_distance(x, y);
                double eta = cutoff(s / rho);
                double v = eta < 1.0 ? k(s) * (1.0 - eta) : 0.0;
                if (k.subtract()) v -= S(g.quasi_norm(y));
                if (v != 0.0) acc.add(rule.weights[j] * v);
            }
            return bv * acc.value();
        };
        double abs_mass = b.mass(sc * delta, g, true) / std::pow(sc, Q);
        double signed_mass = b.mass(sc * delta, g, false) / std::pow(sc, Q);
        double s_var = 0.0;
        if (k.subtract()) {
            if (c_norm - delta < 1.0 && c_norm + delta >= 1.0) s_var = k(1.0);
            else if (c_norm - delta >= 1.0) s_var = k(c_norm - delta) - k(c_norm + delta);
        }
        double kernel_part = 0.0, kernel_var = 0.0;
        if (d - delta >= rho) {
            kernel_part = k(d);
            kernel_var = k(d - delta) - k(d + delta);
        } else if (d + delta > rho / 2) {
            double lo = std::max(d - delta, rho / 2);
            kernel_part = k(d) * (1.0 - cutoff(d / rho));
            kernel_var = k(lo);
        }
        out.add((kernel_part - S(c_norm)) * term.coef * signed_mass);
        out.bound += std::abs(term.coef) * (kernel_var + s_var) * abs_mass;
        if (std::isfinite(support) && support <= delta) return out;

        std::vector<double> br = bps;
        // grade the shells towards the kernel peak at distance d
        for (double w = rho / 2; w < 4 * d; w *= 2) {
            if (d - w > delta) br.push_back(d - w);
            br.push_back(d + w);
        }
        if (k.subtract()) {
            if (c_origin) {
                br.push_back(1.0);
            } else {
                br.push_back(std::abs(1.0 - c_norm));
                br.push_back(1.0 + c_norm);
            }
        }
        double end = support;
        if (!std::isfinite(end)) {
            end = 2 * (m + rho + 1);
            for (double v : br)
                if (std::isfinite(v)) end = std::max(end, v);
        }
        // the peak near x has width about max(rho, |t - d|) on a sphere of
        // radius t, which spans (t / width)^nu_max times more in the steepest
        // chart direction
        double nu_max = 1.0;
        for (double w : g.weights()) nu_max = std::max(nu_max, w);
        auto level = [&](double t0, double t1) {
            double gap = std::max(0.0, std::max(t0 - d, d - t1));
            double ratio = std::pow(t1 / std::max(rho, gap), nu_max);
            int l = 0;
            while (l + 1 < Rules::levels && ratio > std::exp2(l + 0.5)) ++l;
            return l;
        };
        auto edges = shell_edges(delta, end, plan.shells_per_octave, br);
        out.add(term.coef, shells(edges, Q, rules, sphere_far, level));
        if (std::isfinite(support)) return out;

        // march octaves until the analytic tail is negligible
        double T = end;
        int octaves = 0;
        double total = std::abs(out.fine);
        while (true) {
            std::vector<double> oct{T};
            for (int i = 1; i <= plan.shells_per_octave; ++i)
                oct.push_back(T * std::exp2(static_cast<double>(i) / plan.shells_per_octave));
            Pair q = shells(oct, Q, rules, sphere_far);
            out.add(term.coef, q);
            T = oct.back();
            ++octaves;
            total = std::abs(out.fine);
            double step = std::abs(term.coef * q.fine);
            bool last = T >= plan.outer_radius;
            if (step <= 1e-2 * plan.tol * total || octaves % 8 == 0 || last) {
                double tail = tail_bound(term, T, m, fspec);
                if (tail <= 0.1 * plan.tol * total || tail == 0.0 || last) {
                    out.bound += tail;
                    return out;
                }
            }
        }
    }
};

Integral evaluate_at(const Engine& e, const std::vector<RadialTerm>& terms, const Point& x, const std::string& fspec) {
    KahanSum fine, coarse, coarse_angle;
    double bound = 0.0;
    for (const auto& t : terms) {
        TermValue v = e.eval(t, x, fspec);
        fine.add(v.fine);
        coarse.add(v.coarse);
        coarse_angle.add(v.coarse_angle);
        bound += v.bound;
    }
    double err = bound;
    if (e.rules.with_coarse)
        err += 2 * std::max(std::abs(fine.value() - coarse.value()), std::abs(fine.value() - coarse_angle.value()));
    return {fine.value(), err};
}

void check_terms(const std::vector<RadialTerm>& terms, double Q) {
    for (const auto& t : terms) t.base.check_integrable(Q);
}

}  // namespace

Integral apply_kernel_at(const ConvolutionKernel& k, const TestFunction& f, const GroupDescriptor& g, const Point& x,
                         const QuadraturePlan& plan, bool error_estimate) {
    auto r = apply_kernel(k, f, g, {x}, plan, {error_estimate, false});
    return {r.values[0], r.errors[0]};
}

OperatorResult apply_kernel(const ConvolutionKernel& k, const TestFunction& f, const GroupDescriptor& g,
                            const std::vector<Point>& points, const QuadraturePlan& plan, ApplyOptions opts) {
    plan.validate();
    for (const auto& x : points) g.check(x);
    auto terms = f.terms(g);
    check_terms(terms, g.Q());
    Rules rules(g, plan, opts.error_estimate);
    Engine e{k, g, plan, rules, k.inner_mass(g, plan.inner_cutoff)};
    OperatorResult res;
    res.points = points;
    res.plan = plan;
    res.values.assign(points.size(), 0.0);
    res.errors.assign(points.size(), 0.0);
    const std::string fspec = f.spec();
    parallel_for(
        points.size(),
        [&](std::size_t i) {
            Integral v = evaluate_at(e, terms, points[i], fspec);
            res.values[i] = v.value;
            res.errors[i] = v.error;
        },
        opts.parallel);
    return res;
}

namespace {

// Adaptive Gauss-Legendre in u = ln t on [a, b], a > 0, for F >= 0.
double gauss_piece(const std::function<double(double)>& F, double ua, double ub) {
    const auto& rule = gauss_legendre(10);
    double h = 0.5 * (ub - ua), m = 0.5 * (ub + ua), s = 0.0;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
        double t = std::exp(m + h * rule.x[k]);
        s += rule.w[k] * F(t) * t;
    }
    return s * h;
}

// Adaptive Gauss-Legendre in u = ln t on [a, b], a > 0, for F >= 0; leaves
// below the absolute floor are accepted.
void gauss_log(const std::function<double(double)>& F, double a, double b, double rel, double floor, KahanSum& acc,
               double& err, int depth = 0) {
    auto G = [&](double ua, double ub) { return gauss_piece(F, ua, ub); };
    double ua = std::log(a), ub = std::log(b), um = 0.5 * (ua + ub);
    double whole = G(ua, ub), halves = G(ua, um) + G(um, ub);
    double diff = std::abs(whole - halves);
    if (diff <= rel * std::abs(halves) + floor || depth >= 30 || ub - ua < 1e-9) {
        acc.add(halves);
        err += diff;
        return;
    }
    double mid = std::exp(um);
    gauss_log(F, a, mid, rel, floor, acc, err, depth + 1);
    gauss_log(F, mid, b, rel, floor, acc, err, depth + 1);
}

// int_{B(x,r)} term for abelian max-aniso groups, where balls are boxes: the
// overlap volume V(t) = |B(x,r) \cap B(c,t)| is a product of interval lengths and
// the integral is the Stieltjes integral of b(sc t) against V. Requires b >= 0.
Integral box_ball_integral(const GroupDescriptor& g, const RadialTerm& term, const Point& x, double r) {
    const std::size_t n = g.n();
    const auto& nu = g.weights();
    std::array<double, kMaxDim> dist{}, half{};
    std::vector<double> br;
    double t_full = 0.0, t_first = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dist[i] = std::abs(x[i] - term.center[i]);
        half[i] = std::pow(r, nu[i]);
        // B(c,t) misses the box below this radius
        if (dist[i] > half[i]) t_first = std::max(t_first, std::pow(dist[i] - half[i], 1.0 / nu[i]));
        br.push_back(std::pow(std::abs(dist[i] - half[i]), 1.0 / nu[i]));
        double full = std::pow(dist[i] + half[i], 1.0 / nu[i]);
        br.push_back(full);
        t_full = std::max(t_full, full);
    }
    for (double a : term.base.breakpoints()) br.push_back(a / term.scale);
    double upper = std::min(t_full, term.base.support() / term.scale);
    if (!(upper > t_first)) return {};
    auto dV = [&](double t) {
        std::array<double, kMaxDim> len{}, dlen{};
        for (std::size_t i = 0; i < n; ++i) {
            double w = std::pow(t, nu[i]);
            double dw = nu[i] * w / t;
            double lo = std::max(term.center[i] - w, x[i] - half[i]);
            double hi = std::min(term.center[i] + w, x[i] + half[i]);
            if (hi <= lo) return 0.0;
            len[i] = hi - lo;
            bool lo_moves = term.center[i] - w > x[i] - half[i];
            bool hi_moves = term.center[i] + w < x[i] + half[i];
            dlen[i] = dw * ((lo_moves ? 1.0 : 0.0) + (hi_moves ? 1.0 : 0.0));
        }
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (dlen[i] == 0.0) continue;
            double prod = dlen[i];
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) prod *= len[j];
            total += prod;
        }
        return total;
    };
    std::function<double(double)> F = [&](double t) {
        double v = std::abs(term.base(term.scale * t));
        return v == 0.0 ? 0.0 : v * dV(t);
    };
    constexpr double rel = 1e-8;
    br.push_back(t_first);
    br.push_back(upper);
    std::sort(br.begin(), br.end());
    std::vector<double> edges;
    for (double b : br)
        if (b >= t_first && b <= upper && b > 0.0 && (edges.empty() || b > edges.back() * (1 + 1e-12)))
            edges.push_back(b);
    // octave pieces keep the local rule well resolved
    std::vector<std::pair<double, double>> pieces;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        double a = edges[k];
        while (a < edges[k + 1]) {
            double b = std::min(2 * a, edges[k + 1]);
            if (b > a * (1 + 1e-12)) pieces.emplace_back(a, b);
            a = b;
        }
    }
    double rough = 0.0;
    for (auto [a, b] : pieces) rough += gauss_piece(F, std::log(a), std::log(b));
    const double floor = 1e-13 * rough;
    KahanSum acc;
    double err = 0.0;
    for (auto [a, b] : pieces) gauss_log(F, a, b, rel, floor, acc, err);
    if (t_first == 0.0) {
        // march down octave by octave; the contributions decay geometrically
        double hi = edges.front(), prev = INFINITY;
        for (int k = 0;; ++k) {
            KahanSum piece;
            double perr = 0.0;
            gauss_log(F, hi / 2, hi, rel, floor, piece, perr);
            double v = piece.value();
            acc.add(v);
            err += perr;
            double ratio = std::isfinite(prev) && prev > 0.0 ? v / prev : 1.0;
            if (v == 0.0 || (ratio < 0.9 && v <= 1e-12 * acc.value())) {
                err += v * ratio / (1.0 - ratio);
                break;
            }
            if (k > 4000) throw DivergenceError("ball integral: no decay towards the centre");
            prev = v;
            hi /= 2;
        }
    }
    return {term.coef * acc.value(), std::abs(term.coef) * (err + rel * acc.value())};
}

}  // namespace

OperatorResult maximal_function(const TestFunction& f, const GroupDescriptor& g, const std::vector<Point>& points,
                                const RadiusGrid& r_grid, const QuadraturePlan& plan, ApplyOptions opts) {
    return maximal_function(f, g, points, r_grid.points(), plan, opts);
}

OperatorResult maximal_function(const TestFunction& f, const GroupDescriptor& g, const std::vector<Point>& points,
                                const std::vector<double>& radii_in, const QuadraturePlan& plan, ApplyOptions opts) {
    if (radii_in.empty()) throw InputError("maximal function needs a non-empty radius grid");
    plan.validate();
    std::vector<double> radii = radii_in;
    std::sort(radii.begin(), radii.end());
    if (!(radii.front() > 0.0)) throw InputError("maximal function radii must be positive");
    for (const auto& x : points) g.check(x);
    auto terms = f.terms(g);
    check_terms(terms, g.Q());
    const double Q = g.Q();
    bool boxes = g.law() == Law::abelian && (g.norm() == Norm::max_aniso || g.n() == 1);
    for (const auto& t : terms)
        if (t.coef < 0.0 || (t.base.kind == RadialBase::Kind::constant && t.base.c < 0.0)) boxes = false;
    if (boxes) {
        OperatorResult res;
        res.points = points;
        res.plan = plan;
        res.values.assign(points.size(), 0.0);
        res.errors.assign(points.size(), 0.0);
        parallel_for(
            points.size(),
            [&](std::size_t i) {
                for (double r : radii) {
                    KahanSum acc;
                    double err = 0.0;
                    for (const auto& t : terms) {
                        Integral I = box_ball_integral(g, t, points[i], r);
                        acc.add(I.value);
                        err += I.error;
                    }
                    double vol = g.vol1() * std::pow(r, Q);
                    if (acc.value() / vol > res.values[i]) {
                        res.values[i] = acc.value() / vol;
                        res.errors[i] = err / vol;
                    }
                }
            },
            opts.parallel);
        return res;
    }
    Rules rules(g, plan, opts.error_estimate);
    const double s0 = std::min(plan.inner_cutoff, radii.front() / 2);

    OperatorResult res;
    res.points = points;
    res.plan = plan;
    res.values.assign(points.size(), 0.0);
    res.errors.assign(points.size(), 0.0);
    parallel_for(
        points.size(),
        [&](std::size_t i) {
            const Point& x = points[i];
            std::vector<double> br = radii;
            double inner = 0.0;
            for (const auto& t : terms) {
                double d = g.quasi_norm(g.multiply(g.inverse(t.center), x));
                br.push_back(d);
                for (double a : t.base.breakpoints()) {
                    br.push_back(std::abs(d - a / t.scale));
                    br.push_back(d + a / t.scale);
                }
                double sQ = std::pow(t.scale, Q);
                if (d < 2 * s0)
                    inner += std::abs(t.coef) * t.base.mass(t.scale * (d + s0), g, true) / sQ;
                else
                    inner += std::abs(t.coef) * t.base.envelope(t.scale * (d - s0)) * g.vol1() * std::pow(s0, Q);
            }
            auto edges = shell_edges(s0, radii.back(), plan.shells_per_octave, br);
            auto sphere_sum = [&](double s, const SphereRule& rule) {
                KahanSum acc;
                for (std::size_t j = 0; j < rule.size(); ++j) {
                    Point y = g.multiply(g.inverse(g.dilate(s, rule.nodes[j])), x);
                    double v = std::abs(eval_terms(terms, g, y));
                    if (v != 0.0) acc.add(rule.weights[j] * v);
                }
                return acc.value();
            };
            KahanSum cf, cc;
            cf.add(inner);
            cc.add(inner);
            double best_f = 0.0, best_c = 0.0, best_r = radii.front();
            std::size_t next = 0;
            for (std::size_t e = 0; e + 1 < edges.size() && next < radii.size(); ++e) {
                cf.add(shell(edges[e], edges[e + 1], Q, rules.nodes, rules.fine[0], sphere_sum));
                if (rules.with_coarse)
                    cc.add(shell(edges[e], edges[e + 1], Q, rules.nodes_coarse, rules.coarse[0], sphere_sum));
                while (next < radii.size() && edges[e + 1] >= radii[next] * (1 - 1e-9)) {
                    double vol = g.vol1() * std::pow(radii[next], Q);
                    if (cf.value() / vol > best_f) {
                        best_f = cf.value() / vol;
                        best_r = radii[next];
                    }
                    best_c = std::max(best_c, cc.value() / vol);
                    ++next;
                }
            }
            res.values[i] = best_f;
            double err = inner / (g.vol1() * std::pow(best_r, Q));
            if (rules.with_coarse) err += 2 * std::abs(best_f - best_c);
            res.errors[i] = err;
        },
        opts.parallel);
    return res;
}

OperatorResult apply_bessel_riesz(const TestFunction& f, const GroupDescriptor& g, const KernelParams& k,
                                  const std::vector<Point>& points, const QuadraturePlan& plan, ApplyOptions opts) {
    if (k.Q() != g.Q()) throw InputError("kernel and group disagree on the homogeneous dimension");
    return apply_kernel(bessel_riesz_kernel(k), f, g, points, plan, opts);
}

void check_operator_hypotheses(const std::string& op, const RadialProfile& rho, const GroupDescriptor& g, double gamma,
                               const QuadraturePlan& plan) {
    ConditionParams cp;
    cp.Q = g.Q();
    cp.gamma = gamma;
    std::vector<Condition> conds;
    if (op == "gbr") conds = {Condition::bessel_small_scale};
    else if (op == "gfrac") conds = {Condition::fractional_small_scale};
    else if (op == "modfrac") conds = {Condition::fractional_small_scale, Condition::rho_tail, Condition::rho_lipschitz};
    else throw InputError("unknown operator '" + op + "'");
    for (Condition c : conds) {
        ConditionResult r;
        try {
            r = check_condition(rho, c, cp, plan);
        } catch (const DivergenceError& e) {
            throw HypothesisError(op + ": rho=" + rho.spec() + " fails " + condition_name(c) + " (" + e.what() + ")");
        }
        if (!r.holds)
            throw HypothesisError(op + ": rho=" + rho.spec() + " fails " + condition_name(c) + " (constant " +
                                  format_number(r.constant) + ")");
    }
}

OperatorResult apply_gen_bessel_riesz(const TestFunction& f, const GroupDescriptor& g, const RadialProfile& rho,
                                      double gamma, const std::vector<Point>& points, const QuadraturePlan& plan,
                                      ApplyOptions opts) {
    check_operator_hypotheses("gbr", rho, g, gamma, plan);
    return apply_kernel(gen_bessel_riesz_kernel(rho, gamma, g.Q()), f, g, points, plan, opts);
}

OperatorResult apply_gen_fractional(const TestFunction& f, const GroupDescriptor& g, const RadialProfile& rho,
                                    const std::vector<Point>& points, const QuadraturePlan& plan, ApplyOptions opts) {
    check_operator_hypotheses("gfrac", rho, g, 0.0, plan);
    return apply_kernel(gen_fractional_kernel(rho, g.Q()), f, g, points, plan, opts);
}

OperatorResult apply_mod_fractional(const TestFunction& f, const GroupDescriptor& g, const RadialProfile& rho,
                                    const std::vector<Point>& points, const QuadraturePlan& plan, ApplyOptions opts) {
    check_operator_hypotheses("modfrac", rho, g, 0.0, plan);
    return apply_kernel(gen_fractional_kernel(rho, g.Q(), true), f, g, points, plan, opts);
}

CancellationResult cancellation_A(const GroupDescriptor& g, const RadialProfile& rho, const Point& x, double R,
                                  const QuadraturePlan& plan) {
    if (!(R > 0.0)) throw InputError("cancellation needs R > 0");
    g.check(x);
    CancellationResult res;
    if (x.is_origin()) return res;
    const double Q = g.Q();
    ConditionParams cp;
    cp.Q = Q;
    for (Condition c : {Condition::fractional_small_scale, Condition::rho_tail}) {
        try {
            if (!check_condition(rho, c, cp, plan).holds) throw HypothesisError("rho fails " + condition_name(c));
        } catch (const DivergenceError& e) {
            throw DivergenceError(std::string("cancellation integral: ") + e.what());
        }
    }
    auto k = [&](double t) { return rho(t) / std::pow(t, Q); };
    const double r = g.quasi_norm(x);
    const double Rp = R + r;
    // radius where the ray through theta leaves B(x, R + r)
    auto exit_radius = [&](const Point& theta) {
        double lo = std::max(Rp - r, 0.0), hi = Rp + r;
        for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * Rp; ++it) {
            double mid = 0.5 * (lo + hi);
            if (g.kernel_distance(x, g.dilate(mid, theta)) < Rp) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    const GaussRule& gl = gauss_legendre(8);
    auto segment = [&](double a, double b) {
        double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        KahanSum s;
        for (int i = 0; i < 8; ++i) {
            double t = mid + half * gl.x[i];
            s.add(gl.w[i] * half * k(t) * std::pow(t, Q - 1));
        }
        return s.value();
    };
    auto sweep = [&](int order) {
        SphereRule rule = g.sphere_rule(order);
        KahanSum acc;
        for (std::size_t j = 0; j < rule.size(); ++j) acc.add(rule.weights[j] * segment(exit_radius(rule.nodes[j]), Rp));
        return acc.value();
    };
    const int order = std::min(128, 4 * plan.sphere_order);
    double fine = sweep(order);
    double coarse = sweep(order / 2);
    res.A1 = 0.0;
    res.A2 = fine;
    res.value = res.A1 + res.A2;
    res.error = 2 * std::abs(fine - coarse);
    return res;
}

std::vector<double> grid_convolve(const GridFunction& f, const GridFunction& h, bool parallel) {
    const std::size_t n = f.res.size();
    if (h.res.size() != n) throw InputError("convolution grids differ in dimension");
    std::vector<std::size_t> nf(n), nh(n), no(n);
    std::size_t total = 1;
    for (std::size_t a = 0; a < n; ++a) {
        nf[a] = static_cast<std::size_t>(f.res[a]);
        nh[a] = static_cast<std::size_t>(h.res[a]);
        no[a] = nf[a] + nh[a] - 1;
        total *= no[a];
    }
    if (total > kGridBudget) throw ResourceError("convolution output exceeds the memory budget");
    const double dv = f.cell_volume();
    std::vector<double> out(total, 0.0);
    parallel_for(
        total,
        [&](std::size_t idx) {
            std::array<std::size_t, kMaxDim> k{}, lo{}, hi{}, j{};
            std::size_t rem = idx;
            for (std::size_t a = n; a-- > 0;) {
                k[a] = rem % no[a];
                rem /= no[a];
                lo[a] = k[a] >= nh[a] - 1 ? k[a] - (nh[a] - 1) : 0;
                hi[a] = std::min(nf[a] - 1, k[a]);
                j[a] = lo[a];
            }
            KahanSum acc;
            while (true) {
                std::size_t fi = 0, hi_idx = 0;
                for (std::size_t a = 0; a < n; ++a) {
                    fi = fi * nf[a] + j[a];
                    hi_idx = hi_idx * nh[a] + (k[a] - j[a]);
                }
                double v = f.values[fi] * h.values[hi_idx];
                if (v != 0.0) acc.add(v);
                std::size_t a = n;
                while (a-- > 0) {
                    if (j[a] < hi[a]) {
                        ++j[a];
                        break;
                    }
                    j[a] = lo[a];
                }
                if (a == static_cast<std::size_t>(-1)) break;
            }
            out[idx] = acc.value() * dv;
        },
        parallel);
    return out;
}

namespace {

double grid_norm(const std::vector<double>& v, double p, double dv) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    KahanSum s;
    for (double x : v)
        if (x != 0.0) s.add(std::pow(std::abs(x), p));
    return std::pow(s.value() * dv, 1.0 / p);
}

double analytic_norm(const TestFunction& f, const GroupDescriptor& g, double p, const QuadraturePlan& plan) {
    auto terms = f.terms(g);
    if (terms.size() != 1) return NAN;
    const auto& t = terms[0];
    if (std::isinf(p)) return std::abs(t.coef) * t.base.envelope(0.0);
    auto bp = t.base.breakpoints();
    Integral I;
    try {
        I = radial_integrate(g, [&](double r) { return std::pow(std::abs(t.base(r)), p); }, 0.0, t.base.support(),
                             plan, bp);
    } catch (const DivergenceError&) {
        return NAN;
    }
    return std::abs(t.coef) * std::pow(I.value / std::pow(t.scale, g.Q()), 1.0 / p);
}

}  // namespace

YoungResult convolve_young(const TestFunction& f, const TestFunction& h, const GroupDescriptor& g, double p, double q,
                           double p1, const YoungGrid& grid, const QuadraturePlan& plan, bool parallel) {
    for (double e : {p, q, p1})
        if (!(e >= 1.0)) throw InputError("Young exponents must be >= 1");
    auto inv = [](double e) { return std::isinf(e) ? 0.0 : 1.0 / e; };
    if (std::abs(inv(q) + 1.0 - inv(p) - inv(p1)) > 1e-12)
        throw InputError("Young exponents need 1/q + 1 = 1/p + 1/p1");
    if (grid.res < 2) throw InputError("Young grid needs at least 2 cells per axis");
    std::vector<int> res(g.n(), grid.res);
    GridFunction F = sample_to_grid(f, g, grid.L, res);
    GridFunction H = sample_to_grid(h, g, grid.L, res);
    const double dv = F.cell_volume();
    YoungResult out;
    out.f_norm = grid_norm(F.values, p, dv);
    out.h_norm = grid_norm(H.values, p1, dv);
    out.rhs = out.f_norm * out.h_norm;
    std::vector<double> conv;
    if (g.law() == Law::abelian) {
        conv = grid_convolve(F, H, parallel);
    } else {
        // direct sum over the f grid with h evaluated exactly
        const std::size_t m = static_cast<std::size_t>(2 * grid.res - 1);
        std::size_t total = 1;
        for (std::size_t a = 0; a < g.n(); ++a) total *= m;
        if (static_cast<double>(total) * static_cast<double>(F.size()) > 1e11)
            throw ResourceError("direct group convolution exceeds the work budget");
        conv.assign(total, 0.0);
        auto hterms = h.terms(g);
        const double step = F.spacing(0);
        parallel_for(
            total,
            [&](std::size_t idx) {
                Point x(g.n());
                std::size_t rem = idx;
                for (std::size_t a = g.n(); a-- > 0;) {
                    x[a] = -2 * grid.L + static_cast<double>(rem % m + 1) * step;
                    rem /= m;
                }
                KahanSum acc;
                for (std::size_t j = 0; j < F.size(); ++j) {
                    if (F.values[j] == 0.0) continue;
                    Point y = F.center(g, j);
                    acc.add(eval_terms(hterms, g, g.multiply(x, g.inverse(y))) * F.values[j]);
                }
                conv[idx] = acc.value() * dv;
            },
            parallel);
    }
    out.cells = conv.size();
    out.lhs = grid_norm(conv, q, dv);
    double fa = analytic_norm(f, g, p, plan), ha = analytic_norm(h, g, p1, plan);
    out.rhs_analytic = std::isfinite(fa) && std::isfinite(ha) ? fa * ha : out.rhs;
    return out;
}

}  // namespace hmorrey
