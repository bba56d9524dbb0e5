#include "hmorrey/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hmorrey/errors.hpp"
#include "hmorrey/quadrature.hpp"
#include "hmorrey/util.hpp"

namespace hmorrey {

Point::Point(std::size_t n) : n_(n) {
    if (n == 0 || n > kMaxDim) throw InputError("point dimension must be in 1.." + std::to_string(kMaxDim));
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

Point::Point(const std::vector<double>& coords) : Point(coords.size()) {
    std::copy(coords.begin(), coords.end(), c_.begin());
}

bool Point::is_origin() const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
        if (c_[i] != 0.0) return false;
    return true;
}

GroupDescriptor::GroupDescriptor(Law law, Norm norm, std::vector<double> weights)
    : law_(law), norm_(norm), weights_(std::move(weights)) {
    if (weights_.empty() || weights_.size() > kMaxDim)
        throw InputError("group dimension must be in 1.." + std::to_string(kMaxDim));
    for (double w : weights_)
        if (!(w >= 1.0) || !std::isfinite(w)) throw InputError("dilation weights must be finite and >= 1");
    if (law_ == Law::heisenberg1) {
        if (weights_ != std::vector<double>{1.0, 1.0, 2.0})
            throw ConfigError("the Heisenberg group requires n=3 and weights (1,1,2)");
    }
    unit_weights_ = std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 1.0; });
    if (norm_ == Norm::euclidean && !unit_weights_)
        throw ConfigError("the euclidean norm is only homogeneous for unit weights");
    if (norm_ == Norm::koranyi && law_ != Law::heisenberg1)
        throw ConfigError("the Koranyi gauge is only defined on the Heisenberg group");
    if (law_ == Law::heisenberg1 && norm_ == Norm::euclidean)
        throw ConfigError("the euclidean norm is not homogeneous on the Heisenberg group");

    for (double w : weights_) {
        inv_weights_.push_back(1.0 / w);
        Q_ += w;
    }
    const double n = static_cast<double>(weights_.size());
    switch (norm_) {
    case Norm::euclidean:
        vol1_ = std::pow(std::numbers::pi, n / 2) / std::tgamma(n / 2 + 1);
        break;
    case Norm::max_aniso:
        vol1_ = std::exp2(n);
        break;
    case Norm::koranyi:
        // The sphere chart in sphere_rule has the constant density 1/4 over
        // [-pi/2, pi/2] x [0, 2pi), so |sigma| = pi^2/2.
        vol1_ = std::numbers::pi * std::numbers::pi / 8;
        break;
    }
    sigma_ = Q_ * vol1_;

    if (law_ == Law::heisenberg1) {
        spec_ = norm_ == Norm::koranyi ? "heis1" : "heis1:norm=max";
    } else if (norm_ == Norm::euclidean) {
        spec_ = "abelian:iso:n=" + std::to_string(weights_.size());
    } else {
        spec_ = "abelian:aniso:nu=";
        for (std::size_t i = 0; i < weights_.size(); ++i)
            spec_ += (i ? "," : "") + format_number(weights_[i]);
    }
}

GroupDescriptor GroupDescriptor::abelian_iso(std::size_t n) {
    return {Law::abelian, Norm::euclidean, std::vector<double>(n, 1.0)};
}

GroupDescriptor GroupDescriptor::abelian_aniso(std::vector<double> weights) {
    return {Law::abelian, Norm::max_aniso, std::move(weights)};
}

GroupDescriptor GroupDescriptor::heisenberg1(Norm norm) {
    return {Law::heisenberg1, norm, {1.0, 1.0, 2.0}};
}

namespace {

Norm parse_norm(const std::string& v) {
    if (v == "euclidean" || v == "iso") return Norm::euclidean;
    if (v == "max" || v == "max-aniso") return Norm::max_aniso;
    if (v == "koranyi") return Norm::koranyi;
    throw InputError("unknown norm '" + v + "'");
}

}  // namespace

GroupDescriptor GroupDescriptor::parse(const std::string& spec) {
    auto parts = split(trim(spec), ':');
    if (parts.empty() || parts[0].empty()) throw InputError("empty group specification");
    std::vector<double> weights;
    Law law;
    Norm norm;
    std::size_t next = 1;
    if (parts[0] == "heis1") {
        law = Law::heisenberg1;
        norm = Norm::koranyi;
        weights = {1.0, 1.0, 2.0};
    } else if (parts[0] == "abelian") {
        law = Law::abelian;
        if (parts.size() < 3) throw InputError("abelian group needs 'iso:n=..' or 'aniso:nu=..': " + spec);
        if (parts[1] == "iso" && parts[2].rfind("n=", 0) == 0) {
            long n = parse_long(parts[2].substr(2), "group dimension");
            if (n < 1 || n > static_cast<long>(kMaxDim)) throw InputError("group dimension out of range: " + spec);
            weights.assign(static_cast<std::size_t>(n), 1.0);
            norm = Norm::euclidean;
        } else if (parts[1] == "aniso" && parts[2].rfind("nu=", 0) == 0) {
            weights = parse_doubles(parts[2].substr(3), ',', "dilation weights");
            norm = Norm::max_aniso;
        } else {
            throw InputError("malformed abelian group specification: " + spec);
        }
        next = 3;
    } else {
        throw InputError("unknown group '" + parts[0] + "'");
    }
    for (; next < parts.size(); ++next) {
        if (parts[next].rfind("norm=", 0) != 0) throw InputError("unexpected group option '" + parts[next] + "'");
        norm = parse_norm(parts[next].substr(5));
    }
    return {law, norm, std::move(weights)};
}

std::string GroupDescriptor::law_name() const {
    return law_ == Law::abelian ? "abelian" : "heisenberg1";
}

std::string GroupDescriptor::norm_name() const {
    switch (norm_) {
    case Norm::euclidean: return "euclidean";
    case Norm::max_aniso: return "max-aniso";
    case Norm::koranyi: return "koranyi";
    }
    return {};
}

void GroupDescriptor::check(const Point& x) const {
    if (x.size() != n())
        throw InputError("point has dimension " + std::to_string(x.size()) + ", group has " + std::to_string(n()));
}

Point GroupDescriptor::multiply(const Point& x, const Point& y) const {
    check(x);
    check(y);
    Point z(n());
    for (std::size_t i = 0; i < n(); ++i) z[i] = x[i] + y[i];
    if (law_ == Law::heisenberg1) z[2] += 0.5 * (x[0] * y[1] - x[1] * y[0]);
    return z;
}

Point GroupDescriptor::inverse(const Point& x) const {
    check(x);
    Point z(n());
    for (std::size_t i = 0; i < n(); ++i) z[i] = -x[i];
    return z;
}

Point GroupDescriptor::dilate(double lambda, const Point& x) const {
    if (!(lambda > 0.0)) throw InputError("dilation factor must be positive");
    check(x);
    Point z(n());
    if (unit_weights_) {
        for (std::size_t i = 0; i < n(); ++i) z[i] = lambda * x[i];
    } else {
        for (std::size_t i = 0; i < n(); ++i) {
            double w = weights_[i];
            z[i] = (w == 1.0 ? lambda : w == 2.0 ? lambda * lambda : std::pow(lambda, w)) * x[i];
        }
    }
    return z;
}

double GroupDescriptor::quasi_norm(const Point& x) const {
    check(x);
    switch (norm_) {
    case Norm::euclidean: {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    }
    case Norm::max_aniso: {
        double m = 0.0;
        for (std::size_t i = 0; i < n(); ++i) {
            double a = std::abs(x[i]);
            double w = weights_[i];
            double r = w == 1.0 ? a : w == 2.0 ? std::sqrt(a) : std::pow(a, inv_weights_[i]);
            m = std::max(m, r);
        }
        return m;
    }
    case Norm::koranyi: {
        double h = x[0] * x[0] + x[1] * x[1];
        return std::sqrt(std::sqrt(h * h + 16.0 * x[2] * x[2]));
    }
    }
    return 0.0;
}

double GroupDescriptor::kernel_distance(const Point& x, const Point& y) const {
    return quasi_norm(multiply(x, inverse(y)));
}

SphereRule GroupDescriptor::sphere_rule(int order) const {
    if (order < 1 || order > 128) throw InputError("sphere order must be in 1..128");
    SphereRule rule;
    const std::size_t dim = n();
    if (norm_ == Norm::koranyi) {
        // theta = (sqrt(cos psi) cos phi, sqrt(cos psi) sin phi, sin(psi)/4)
        const GaussRule& gl = gauss_legendre(order);
        const int nphi = 2 * order;
        const double half = std::numbers::pi / 2;
        const double dphi = 2 * std::numbers::pi / nphi;
        for (int i = 0; i < order; ++i) {
            double psi = half * gl.x[i];
            double c = std::sqrt(std::cos(psi));
            for (int j = 0; j < nphi; ++j) {
                double phi = dphi * (j + 0.5);
                rule.nodes.push_back(Point{c * std::cos(phi), c * std::sin(phi), std::sin(psi) / 4});
                rule.weights.push_back(0.25 * half * gl.w[i] * dphi);
            }
        }
        return rule;
    }
    if (dim == 1) {
        rule.nodes = {Point{-1.0}, Point{1.0}};
        rule.weights = {weights_[0], weights_[0]};
        return rule;
    }
    // Faces of the cube [-1,1]^n, tensor Gauss-Legendre on each face.
    const GaussRule& gl = gauss_legendre(order);
    const std::size_t m = dim - 1;
    std::size_t per_face = 1;
    for (std::size_t k = 0; k < m; ++k) per_face *= static_cast<std::size_t>(order);
    double total = 0.0;
    for (std::size_t axis = 0; axis < dim; ++axis) {
        for (int sign : {-1, 1}) {
            for (std::size_t idx = 0; idx < per_face; ++idx) {
                Point u(dim);
                u[axis] = sign;
                double w = 1.0;
                std::size_t rem = idx;
                for (std::size_t j = 0, k = 0; j < dim; ++j) {
                    if (j == axis) continue;
                    std::size_t t = rem % static_cast<std::size_t>(order);
                    rem /= static_cast<std::size_t>(order);
                    u[j] = gl.x[t];
                    w *= gl.w[t];
                    ++k;
                }
                if (norm_ == Norm::euclidean) {
                    double len = 0.0;
                    for (double v : u) len += v * v;
                    len = std::sqrt(len);
                    for (std::size_t j = 0; j < dim; ++j) u[j] /= len;
                    w /= std::pow(len, static_cast<double>(dim));
                } else {
                    w *= weights_[axis];
                }
                rule.nodes.push_back(u);
                rule.weights.push_back(w);
                total += w;
            }
        }
    }
    if (norm_ == Norm::euclidean) {
        // The projected face rule converges to |sigma|; pin its sum exactly.
        for (double& w : rule.weights) w *= sigma_ / total;
    }
    return rule;
}

MeasureEstimate unit_ball_volume_mc(const GroupDescriptor& g, std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw InputError("Monte-Carlo sample count must be positive");
    std::vector<double> half(g.n(), 1.0);
    if (g.norm() == Norm::koranyi) half[2] = 0.25;
    else if (g.norm() == Norm::max_aniso && g.law() == Law::heisenberg1) half[2] = 1.0;
    double box = 1.0;
    for (double h : half) box *= 2 * h;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::size_t hits = 0;
    Point x(g.n());
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < g.n(); ++i) x[i] = half[i] * unif(rng);
        if (g.quasi_norm(x) < 1.0) ++hits;
    }
    double p = static_cast<double>(hits) / static_cast<double>(samples);
    MeasureEstimate est;
    est.value = box * p;
    est.std_error = box * std::sqrt(p * (1 - p) / static_cast<double>(samples));
    est.samples = samples;
    return est;
}

MeasureEstimate sphere_measure(const GroupDescriptor& g, const QuadraturePlan& plan) {
    plan.validate();
    if (g.norm() != Norm::koranyi) return {g.sigma(), 0.0, true, 0};
    constexpr std::size_t pilot = 20000;
    constexpr std::size_t budget = 100'000'000;
    MeasureEstimate p0 = unit_ball_volume_mc(g, pilot, plan.mc_seed);
    double rel = p0.std_error / p0.value * std::sqrt(static_cast<double>(pilot));
    double need = std::ceil(1.2 * (rel / plan.tol) * (rel / plan.tol));
    std::size_t samples = std::max<std::size_t>(pilot, static_cast<std::size_t>(std::min(need, 1e18)));
    if (samples > budget) {
        MeasureEstimate at_budget = unit_ball_volume_mc(g, budget, plan.mc_seed);
        throw PrecisionError("sphere measure estimate reached relative error " +
                             format_number(at_budget.std_error / at_budget.value) + " within the sample budget, target " +
                             format_number(plan.tol));
    }
    MeasureEstimate v = unit_ball_volume_mc(g, samples, plan.mc_seed);
    return {g.Q() * v.value, g.Q() * v.std_error, false, samples};
}

Integral radial_integrate(const GroupDescriptor& g, const std::function<double(double)>& h, double r_lo,
                          double r_hi, const QuadraturePlan& plan, std::span<const double> breaks) {
    if (!(r_lo >= 0.0) || !(r_hi > r_lo)) throw InputError("radial_integrate needs 0 <= r_lo < r_hi");
    const double Qm1 = g.Q() - 1.0;
    auto F = [&](double r) { return h(r) * std::pow(r, Qm1); };
    Integral in = integrate_log(F, r_lo, r_hi, breaks, std::min(plan.tol, 1e-3) * 1e-7, "radial integral");
    return {g.sigma() * in.value, g.sigma() * in.error};
}

}  // namespace hmorrey
