#include "hmorrey/kernels.hpp"

#include <cmath>

#include "hmorrey/errors.hpp"
#include "hmorrey/quadrature.hpp"
#include "hmorrey/util.hpp"

namespace hmorrey {

KernelParams::KernelParams(const GroupDescriptor& g, double alpha, double gamma) : g_(g), alpha_(alpha), gamma_(gamma) {
    if (!(alpha > 0.0) || !(alpha < g.Q())) throw InputError("kernel needs 0 < alpha < Q");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InputError("kernel needs gamma >= 0");
}

double KernelParams::radial(double t) const {
    double v = std::pow(t, alpha_ - g_.Q());
    return gamma_ == 0.0 ? v : v / std::pow(1.0 + t, gamma_);
}

double kernel_eval(const KernelParams& k, const Point& x) {
    double t = k.group().quasi_norm(x);
    if (t == 0.0) throw SingularityError("the kernel is singular at the origin");
    return k.radial(t);
}

std::pair<double, double> admissible_p1_interval(const KernelParams& k) {
    if (k.gamma() == 0.0) throw DivergenceError("gamma = 0: the Riesz kernel lies in no global Lebesgue space");
    const double Q = k.Q();
    return {Q / (Q + k.gamma() - k.alpha()), Q / (Q - k.alpha())};
}

namespace {

void require_admissible(const KernelParams& k, double p1) {
    auto [lo, hi] = admissible_p1_interval(k);
    if (!(p1 < hi)) throw DivergenceError("p1 = " + format_number(p1) + " >= Q/(Q-alpha): the integral diverges at the origin");
    if (!(p1 > lo)) throw DivergenceError("p1 = " + format_number(p1) + " <= Q/(Q+gamma-alpha): the integral diverges at infinity");
}

}  // namespace

DyadicSum dyadic_sum(const KernelParams& k, double p1, double R, double tol) {
    if (!(R > 0.0)) throw InputError("dyadic_sum needs R > 0");
    if (!(tol > 0.0)) throw InputError("dyadic_sum needs tol > 0");
    DyadicSum s;
    s.a = (k.alpha() - k.Q()) * p1 + k.Q();
    s.b = k.gamma() * p1;
    if (!(s.a > 0.0)) throw DivergenceError("dyadic sum: lower tail diverges (a = " + format_number(s.a) + " <= 0)");
    if (!(s.b > s.a)) throw DivergenceError("dyadic sum: upper tail diverges (b <= a)");
    const double a = s.a, c = s.a - s.b;
    // lower tail: sum_{k < k_lo} (2^k R)^a = (2^k_lo R)^a / (2^a - 1)
    double x_lo = std::pow(0.5 * tol * (std::exp2(a) - 1.0), 1.0 / a);
    s.k_lo = static_cast<long>(std::floor(std::log2(x_lo / R)));
    // upper tail: sum_{k > k_hi} (2^k R)^c = (2^k_hi R)^c 2^c / (1 - 2^c)
    double x_hi = std::pow(0.5 * tol * (1.0 - std::exp2(c)) / std::exp2(c), 1.0 / c);
    s.k_hi = static_cast<long>(std::ceil(std::log2(x_hi / R)));
    if (s.k_hi < s.k_lo) s.k_hi = s.k_lo;
    KahanSum sum;
    for (long kk = s.k_lo; kk <= s.k_hi; ++kk) {
        double x = std::ldexp(R, static_cast<int>(kk));
        sum.add(std::pow(x, a) / std::pow(1.0 + x, s.b));
    }
    s.value = sum.value();
    double lower = std::pow(std::ldexp(R, static_cast<int>(s.k_lo)), a) / (std::exp2(a) - 1.0);
    double upper = std::pow(std::ldexp(R, static_cast<int>(s.k_hi)), c) * std::exp2(c) / (1.0 - std::exp2(c));
    s.truncation_error = lower + upper;
    return s;
}

namespace {

Integral kernel_power_integral(const KernelParams& k, double p, double r_hi, const QuadraturePlan& plan) {
    std::vector<double> br{1.0};
    return radial_integrate(k.group(), [&](double r) { return std::pow(k.radial(r), p); }, 0.0, r_hi, plan, br);
}

}  // namespace

Integral kernel_lebesgue_norm(const KernelParams& k, double p1, const QuadraturePlan& plan) {
    if (!(p1 >= 1.0)) throw InputError("kernel_lebesgue_norm needs p1 >= 1");
    require_admissible(k, p1);
    Integral I = kernel_power_integral(k, p1, INFINITY, plan);
    double v = std::pow(I.value, 1.0 / p1);
    return {v, v / (p1 * I.value) * I.error};
}

SandwichResult sandwich_check(const KernelParams& k, double p1, double R, const QuadraturePlan& plan) {
    require_admissible(k, p1);
    Integral I = kernel_power_integral(k, p1, INFINITY, plan);
    DyadicSum S = dyadic_sum(k, p1, R, 1e-12);
    SandwichResult res;
    res.norm_p1 = I.value;
    res.S = S.value;
    const double a = S.a;
    res.C_upper = k.group().sigma() * (std::exp2(a) - 1.0) / a;
    res.C_lower = res.C_upper / std::exp2(k.gamma() * p1);
    res.slack = 0.005 + I.error / I.value + S.truncation_error / S.value;
    res.lower_ok = res.C_lower * res.S <= res.norm_p1 * (1.0 + res.slack);
    res.upper_ok = res.norm_p1 <= res.C_upper * res.S * (1.0 + res.slack);
    return res;
}

SupNorm sup_over_grid(const std::vector<double>& r, const std::vector<double>& v, double rel_error) {
    if (r.empty() || r.size() != v.size()) throw InputError("sup over an empty grid");
    SupNorm s;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double x = std::isfinite(v[i]) ? v[i] : INFINITY;
        if (x > s.value || i == 0) {
            s.value = x;
            arg = i;
        }
    }
    s.argmax = r[arg];
    s.error = s.value * rel_error;
    const std::size_t last = v.size() - 1;
    s.boundary_attained = v.size() > 1 && (arg == 0 || arg == last);
    bool growing = false;
    if (v.size() > 1 && arg == 0) growing = v[0] > v[1] * (1 + 1e-3);
    if (v.size() > 1 && arg == last) growing = v[last] > v[last - 1] * (1 + 1e-3);
    s.bounded = s.value < kOverflowGuard && !growing;
    return s;
}

namespace {

// |sigma| int_0^{R_j} K^p r^(Q-1) dr for every grid radius
std::vector<double> cumulative_kernel(const KernelParams& k, double p, const std::vector<double>& R,
                                      const QuadraturePlan& plan, double& rel_err) {
    std::vector<double> out(R.size());
    std::vector<double> br{1.0};
    auto h = [&](double r) { return std::pow(k.radial(r), p); };
    Integral acc = radial_integrate(k.group(), h, 0.0, R[0], plan, br);
    out[0] = acc.value;
    double err = acc.error;
    for (std::size_t i = 1; i < R.size(); ++i) {
        Integral seg = radial_integrate(k.group(), h, R[i - 1], R[i], plan, br);
        acc.value += seg.value;
        err += seg.error;
        out[i] = acc.value;
    }
    rel_err = err / out.back();
    return out;
}

}  // namespace

SupNorm kernel_morrey_norm(const KernelParams& k, double p2, double p1, const QuadraturePlan& plan,
                           const RadiusGrid& grid) {
    if (!(p2 >= 1.0)) throw InputError("kernel_morrey_norm needs p2 >= 1");
    if (p2 > p1) throw InputError("kernel_morrey_norm needs p2 <= p1");
    require_admissible(k, p1);
    auto R = grid.points();
    double rel = 0.0;
    auto C = cumulative_kernel(k, p2, R, plan, rel);
    std::vector<double> v(R.size());
    const double Q = k.Q();
    for (std::size_t i = 0; i < R.size(); ++i)
        v[i] = std::pow(R[i], Q * (1.0 / p1 - 1.0 / p2)) * std::pow(C[i], 1.0 / p2);
    return sup_over_grid(R, v, rel / p2);
}

GenMorreyKernelNorm kernel_gen_morrey_norm(const KernelParams& k, double p2, const RadialProfile& omega,
                                           const QuadraturePlan& plan, const RadiusGrid& grid) {
    if (!(p2 >= 1.0)) throw InputError("kernel_gen_morrey_norm needs p2 >= 1");
    GenMorreyKernelNorm res;
    ConditionParams cp;
    cp.Q = k.Q();
    cp.alpha = k.alpha();
    cp.p2 = p2;
    auto hyp = check_condition(omega, Condition::kernel_morrey, cp, plan);
    res.hypothesis_holds = hyp.holds;
    res.hypothesis_constant = hyp.constant;

    auto R = grid.points();
    double rel = 0.0;
    auto C = cumulative_kernel(k, p2, R, plan, rel);
    std::vector<double> v(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) {
        double w = omega(R[i]);
        if (!(w > 0.0)) throw DomainError("omega is not positive at R=" + format_number(R[i]));
        v[i] = std::pow(C[i], 1.0 / p2) / (w * std::pow(R[i], k.Q() / p2));
    }
    res.norm = sup_over_grid(R, v, rel / p2);
    return res;
}

}  // namespace hmorrey
