#include "hmorrey/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>

#include "hmorrey/errors.hpp"
#include "hmorrey/quadrature.hpp"
#include "hmorrey/util.hpp"

namespace hmorrey {

RadialProfile RadialProfile::power(double c, double beta) {
    if (!(c > 0.0) || !std::isfinite(c) || !std::isfinite(beta))
        throw DomainError("power profile needs c > 0 and finite beta");
    RadialProfile p;
    p.kind_ = Kind::power;
    p.c_ = c;
    p.beta_ = beta;
    return p;
}

RadialProfile RadialProfile::broken_power(double c, double beta, double beta2, double rb) {
    if (!(c > 0.0) || !(rb > 0.0) || !std::isfinite(beta) || !std::isfinite(beta2))
        throw DomainError("broken power profile needs c > 0, rb > 0 and finite exponents");
    RadialProfile p;
    p.kind_ = Kind::power_truncated;
    p.c_ = c;
    p.beta_ = beta;
    p.beta2_ = beta2;
    p.rb_ = rb;
    return p;
}

RadialProfile RadialProfile::table(std::vector<double> r, std::vector<double> values, std::string source) {
    if (r.size() < 2 || r.size() != values.size()) throw InputError("table profile needs at least two (r, value) rows");
    RadialProfile p;
    p.kind_ = Kind::table;
    p.source_ = std::move(source);
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0)) throw DomainError("table profile radii must be positive");
        if (i && !(r[i] > r[i - 1])) throw InputError("table profile radii must be strictly increasing");
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) throw DomainError("table profile values must be positive");
        p.log_r_.push_back(std::log(r[i]));
        p.log_v_.push_back(std::log(values[i]));
    }
    return p;
}

RadialProfile RadialProfile::table_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile table '" + path + "'");
    std::vector<double> r, v;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cols = split(t, ',');
        if (cols.size() < 2) throw InputError("profile table row needs two columns: '" + t + "'");
        if (first) {
            first = false;
            std::string c0 = trim(cols[0]);
            if (!c0.empty() && (std::isalpha(static_cast<unsigned char>(c0[0])) != 0)) continue;  // header
        }
        r.push_back(parse_double(cols[0], "table radius"));
        v.push_back(parse_double(cols[1], "table value"));
    }
    return table(std::move(r), std::move(v), "table:@" + path);
}

RadialProfile RadialProfile::sum(std::vector<RadialProfile> parts) {
    if (parts.empty()) throw InputError("sum profile needs at least one part");
    RadialProfile p;
    p.kind_ = Kind::sum;
    p.parts_ = std::move(parts);
    return p;
}

RadialProfile RadialProfile::parse(const std::string& spec) {
    std::string s = trim(spec);
    if (s.rfind("sum:", 0) == 0) {
        std::vector<RadialProfile> parts;
        for (const auto& item : split(s.substr(4), '|')) parts.push_back(parse(item));
        return sum(std::move(parts));
    }
    if (s.rfind("table:@", 0) == 0) return table_from_csv(s.substr(7));
    auto fields = split(s, ':');
    double c = 1.0, beta = 0.0, beta2 = 0.0, rb = 1.0, e = 1.0;
    bool has_beta = false, has_beta2 = false;
    for (std::size_t i = 1; i < fields.size(); ++i) {
        auto eq = fields[i].find('=');
        if (eq == std::string::npos) throw InputError("profile field '" + fields[i] + "' is not key=value");
        std::string key = fields[i].substr(0, eq), val = fields[i].substr(eq + 1);
        if (key == "c") c = parse_double(val, "profile c");
        else if (key == "beta") { beta = parse_double(val, "profile beta"); has_beta = true; }
        else if (key == "beta2") { beta2 = parse_double(val, "profile beta2"); has_beta2 = true; }
        else if (key == "rb") rb = parse_double(val, "profile rb");
        else if (key == "exp") e = parse_double(val, "profile exponent");
        else throw InputError("unknown profile field '" + key + "'");
    }
    RadialProfile p;
    if (fields[0] == "pow") {
        if (!has_beta) throw InputError("power profile needs beta: " + s);
        p = power(c, beta);
    } else if (fields[0] == "bpow") {
        if (!has_beta || !has_beta2) throw InputError("broken power profile needs beta and beta2: " + s);
        p = broken_power(c, beta, beta2, rb);
    } else {
        throw InputError("unknown profile '" + s + "'");
    }
    return e == 1.0 ? p : p.pow(e);
}

double RadialProfile::operator()(double r) const {
    double v = 0.0;
    switch (kind_) {
    case Kind::power:
        return c_ * std::pow(r, beta_);
    case Kind::power_truncated:
        v = r <= rb_ ? c_ * std::pow(r, beta_) : c_ * std::pow(rb_, beta_ - beta2_) * std::pow(r, beta2_);
        break;
    case Kind::table: {
        double lr = std::log(r);
        std::size_t n = log_r_.size();
        std::size_t i;
        if (lr <= log_r_[0]) i = 0;
        else if (lr >= log_r_[n - 1]) i = n - 2;
        else i = static_cast<std::size_t>(std::upper_bound(log_r_.begin(), log_r_.end(), lr) - log_r_.begin()) - 1;
        double t = (lr - log_r_[i]) / (log_r_[i + 1] - log_r_[i]);
        v = std::exp(log_v_[i] + t * (log_v_[i + 1] - log_v_[i]));
        break;
    }
    case Kind::sum:
        for (const auto& part : parts_) v += part(r);
        break;
    }
    return exponent_ == 1.0 ? v : std::pow(v, exponent_);
}

bool RadialProfile::surjective() const {
    if (exponent_ == 0.0) return false;
    switch (kind_) {
    case Kind::power: return beta_ != 0.0;
    case Kind::power_truncated: return beta_ * beta2_ > 0.0;
    case Kind::table: return false;
    case Kind::sum: {
        bool neg = true, pos = true;
        for (const auto& part : parts_) {
            if (part.kind_ != Kind::power) return false;
            neg = neg && part.beta_ < 0;
            pos = pos && part.beta_ > 0;
        }
        return neg || pos;
    }
    }
    return false;
}

std::vector<double> RadialProfile::breakpoints() const {
    std::vector<double> out;
    if (kind_ == Kind::power_truncated) out.push_back(rb_);
    if (kind_ == Kind::table)
        for (double lr : log_r_) out.push_back(std::exp(lr));
    for (const auto& part : parts_) {
        auto b = part.breakpoints();
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

std::string RadialProfile::spec() const {
    std::string s;
    switch (kind_) {
    case Kind::power:
        return "pow:c=" + format_number(c_) + ":beta=" + format_number(beta_);
    case Kind::power_truncated:
        s = "bpow:c=" + format_number(c_) + ":beta=" + format_number(beta_) + ":beta2=" + format_number(beta2_) +
            ":rb=" + format_number(rb_);
        break;
    case Kind::table:
        s = source_;
        break;
    case Kind::sum:
        s = "sum:";
        for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "|" : "") + parts_[i].spec();
        break;
    }
    if (exponent_ != 1.0) s += ":exp=" + format_number(exponent_);
    return s;
}

RadialProfile RadialProfile::pow(double e) const {
    if (kind_ == Kind::power) return power(std::pow(c_, e), beta_ * e);
    RadialProfile p = *this;
    p.exponent_ *= e;
    return p;
}

DoublingResult doubling_constant(const RadialProfile& p, const std::vector<double>& r_grid) {
    if (r_grid.empty()) throw InputError("doubling_constant needs a nonempty grid");
    auto val = [&](double r) {
        double v = p(r);
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("profile is not positive at r=" + format_number(r));
        return v;
    };
    DoublingResult res;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        double r = r_grid[i], pr = val(r);
        auto consider = [&](double s) {
            double ps = val(s);
            res.empirical = std::max({res.empirical, pr / ps, ps / pr});
        };
        consider(2 * r);
        consider(r / 2);
        for (std::size_t j = i + 1; j < r_grid.size() && r_grid[j] <= 2 * r; ++j) consider(r_grid[j]);
    }
    if (p.is_power()) res.analytic = std::exp2(std::abs(p.beta()));
    return res;
}

std::string condition_name(Condition c) {
    switch (c) {
    case Condition::bessel_small_scale: return "bessel-small-scale";
    case Condition::fractional_small_scale: return "fractional-small-scale";
    case Condition::phi_tail: return "phi-tail";
    case Condition::bessel_balance: return "bessel-balance";
    case Condition::fractional_balance: return "fractional-balance";
    case Condition::rho_tail: return "rho-tail";
    case Condition::rho_lipschitz: return "rho-lipschitz";
    case Condition::campanato_balance: return "campanato-balance";
    case Condition::phi_tail_finite: return "phi-tail-finite";
    case Condition::doubling: return "doubling";
    case Condition::morrey_monotone: return "morrey-monotone";
    case Condition::campanato_monotone: return "campanato-monotone";
    case Condition::power_bound: return "power-bound";
    case Condition::kernel_morrey: return "kernel-morrey";
    case Condition::surjective: return "surjective";
    }
    return "unknown";
}

Condition parse_condition(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(Condition::surjective); ++i) {
        auto c = static_cast<Condition>(i);
        if (condition_name(c) == name) return c;
    }
    throw InputError("unknown condition '" + name + "'");
}

namespace {

constexpr double kRel = 1e-10;

struct Sweep {
    std::vector<double> r;
    std::size_t lo = 0, hi = 0;  // base range [1e-3, 1e3] inside the extended one
};

Sweep make_sweep(int grid_points) {
    if (grid_points < 7) throw InputError("condition grid needs at least 7 points");
    const int per_decade = (grid_points - 1) / 6;
    Sweep s;
    for (int k = -4 * per_decade; k <= 4 * per_decade; ++k)
        s.r.push_back(std::pow(10.0, static_cast<double>(k) / per_decade));
    s.lo = static_cast<std::size_t>(per_decade);
    s.hi = static_cast<std::size_t>(7 * per_decade);
    return s;
}

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<double> from_zero(const std::function<double(double)>& F, const std::vector<double>& r,
                              const std::vector<double>& breaks, const char* what) {
    std::vector<double> out(r.size());
    double acc = integrate_log(F, 0.0, r[0], breaks, kRel, what).value;
    out[0] = acc;
    for (std::size_t i = 1; i < r.size(); ++i) {
        acc += integrate_log(F, r[i - 1], r[i], breaks, kRel, what).value;
        out[i] = acc;
    }
    return out;
}

std::vector<double> to_inf(const std::function<double(double)>& F, const std::vector<double>& r,
                            const std::vector<double>& breaks, const char* what) {
    std::vector<double> out(r.size());
    std::size_t n = r.size();
    double acc = integrate_log(F, r[n - 1], INFINITY, breaks, kRel, what).value;
    out[n - 1] = acc;
    for (std::size_t i = n - 1; i-- > 0;) {
        acc += integrate_log(F, r[i], r[i + 1], breaks, kRel, what).value;
        out[i] = acc;
    }
    return out;
}

ConditionResult sup_ratio(const std::vector<double>& ratio, const Sweep& s) {
    double base = 0.0, ext = 0.0;
    for (std::size_t i = 0; i < ratio.size(); ++i) {
        double v = ratio[i];
        if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
        ext = std::max(ext, v);
        if (i >= s.lo && i <= s.hi) base = std::max(base, v);
    }
    ConditionResult res;
    res.constant = base;
    if (!(base < kOverflowGuard)) {
        res.note = "ratio exceeds the overflow guard";
    } else if (ext > base * 1.01 + 1e-300) {
        res.note = "ratio keeps growing beyond the sampled range";
    } else {
        res.holds = true;
    }
    return res;
}

double checked(const RadialProfile& p, double r) {
    double v = p(r);
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("profile is not positive at r=" + format_number(r));
    return v;
}

const RadialProfile& need(const RadialProfile* p, const char* what) {
    if (!p) throw InputError(std::string("condition needs the profile ") + what);
    return *p;
}

ConditionResult evaluate(const RadialProfile& prof, Condition cond, const ConditionParams& k) {
    const Sweep s = make_sweep(k.grid_points);
    const auto& r = s.r;
    const std::string name = condition_name(cond);
    const char* what = name.c_str();
    std::vector<double> ratio(r.size());
    const auto pb = prof.breakpoints();

    switch (cond) {
    case Condition::bessel_small_scale: {
        double e = k.Q - k.gamma - 1;
        auto F = [&](double t) { return checked(prof, t) * std::pow(t, e); };
        double v = integrate_log(F, 0.0, 1.0, pb, kRel, what).value;
        return {true, v, {}};
    }
    case Condition::fractional_small_scale: {
        auto F = [&](double t) { return checked(prof, t) / t; };
        return {true, integrate_log(F, 0.0, 1.0, pb, kRel, what).value, {}};
    }
    case Condition::phi_tail_finite: {
        auto F = [&](double t) { return checked(prof, t) / t; };
        return {true, integrate_log(F, 1.0, INFINITY, pb, kRel, what).value, {}};
    }
    case Condition::phi_tail: {
        if (!(k.p >= 1)) throw InputError("phi-tail needs p >= 1");
        auto F = [&](double t) { return std::pow(checked(prof, t), k.p) / t; };
        auto T = to_inf(F, r, pb, what);
        for (std::size_t i = 0; i < r.size(); ++i) ratio[i] = T[i] / std::pow(checked(prof, r[i]), k.p);
        return sup_ratio(ratio, s);
    }
    case Condition::bessel_balance:
    case Condition::fractional_balance: {
        const RadialProfile& phi = need(k.phi, "phi");
        if (!(k.q > 0) || !(k.p > 0)) throw InputError(name + " needs p and q");
        double e = cond == Condition::bessel_balance ? k.Q - k.gamma - 1 : -1.0;
        auto br = merged(pb, phi.breakpoints());
        auto A = from_zero([&](double t) { return checked(prof, t) * std::pow(t, e); }, r, br, what);
        auto B = to_inf([&](double t) { return checked(prof, t) * checked(phi, t) * std::pow(t, e); }, r, br, what);
        for (std::size_t i = 0; i < r.size(); ++i) {
            double f = checked(phi, r[i]);
            ratio[i] = (f * A[i] + B[i]) / std::pow(f, k.p / k.q);
        }
        return sup_ratio(ratio, s);
    }
    case Condition::rho_tail: {
        auto T = to_inf([&](double t) { return checked(prof, t) / (t * t); }, r, pb, what);
        for (std::size_t i = 0; i < r.size(); ++i) ratio[i] = T[i] / (checked(prof, r[i]) / r[i]);
        return sup_ratio(ratio, s);
    }
    case Condition::rho_lipschitz: {
        // 40 values of s across [1e-3, 1e3], 25 ratios r/s in [1/2, 2]
        double sup = 0.0;
        for (int i = 0; i < 40; ++i) {
            double sv = std::pow(10.0, -3.0 + 6.0 * i / 39.0);
            double ps = checked(prof, sv);
            for (int j = 0; j < 25; ++j) {
                double rv = sv * std::exp2(-1.0 + (j + 0.5) * 2.0 / 25.0);
                double num = std::abs(checked(prof, rv) / std::pow(rv, k.Q) - ps / std::pow(sv, k.Q));
                sup = std::max(sup, num * std::pow(sv, k.Q + 1) / (std::abs(rv - sv) * ps));
            }
        }
        ConditionResult res{sup < kOverflowGuard, sup, {}};
        if (!res.holds) res.note = "ratio exceeds the overflow guard";
        return res;
    }
    case Condition::campanato_balance: {
        const RadialProfile& phi = need(k.phi, "phi");
        const RadialProfile& psi = need(k.psi, "psi");
        auto br = merged(pb, phi.breakpoints());
        auto P = to_inf([&](double t) { return checked(phi, t) / t; }, r, br, what);
        auto A = from_zero([&](double t) { return checked(prof, t) / t; }, r, br, what);
        auto B = to_inf([&](double t) { return checked(prof, t) * checked(phi, t) / (t * t); }, r, br, what);
        for (std::size_t i = 0; i < r.size(); ++i) ratio[i] = (P[i] * A[i] + r[i] * B[i]) / checked(psi, r[i]);
        return sup_ratio(ratio, s);
    }
    case Condition::doubling: {
        std::vector<double> base(r.begin() + static_cast<long>(s.lo), r.begin() + static_cast<long>(s.hi) + 1);
        auto d = doubling_constant(prof, base);
        ConditionResult res{d.empirical < kOverflowGuard, d.empirical, {}};
        if (!res.holds) res.note = "doubling constant exceeds the overflow guard";
        return res;
    }
    case Condition::morrey_monotone: {
        if (!(k.p >= 1) || !(k.Q > 0)) throw InputError("morrey-monotone needs Q and p");
        for (std::size_t i = s.lo + 1; i <= s.hi; ++i) {
            double a = checked(prof, r[i - 1]), b = checked(prof, r[i]);
            if (b > a * (1 + 1e-12)) return {false, 0.0, "phi increases near r=" + format_number(r[i])};
            if (std::pow(r[i], k.Q / k.p) * b < std::pow(r[i - 1], k.Q / k.p) * a * (1 - 1e-12))
                return {false, 0.0, "t^(Q/p) phi decreases near r=" + format_number(r[i])};
        }
        return {true, 1.0, {}};
    }
    case Condition::campanato_monotone: {
        for (std::size_t i = s.lo + 1; i <= s.hi; ++i)
            if (checked(prof, r[i]) / r[i] > checked(prof, r[i - 1]) / r[i - 1] * (1 + 1e-12))
                return {false, 0.0, "phi(r)/r increases near r=" + format_number(r[i])};
        return {true, 1.0, {}};
    }
    case Condition::power_bound: {
        for (std::size_t i = 0; i < r.size(); ++i) ratio[i] = checked(prof, r[i]) / std::pow(r[i], k.beta);
        return sup_ratio(ratio, s);
    }
    case Condition::kernel_morrey: {
        if (!(k.p2 >= 1)) throw InputError("kernel-morrey needs p2 >= 1");
        double e = (k.alpha - k.Q) * k.p2 + k.Q - 1;
        auto I = from_zero([&](double t) { return std::pow(t, e); }, r, pb, what);
        for (std::size_t i = 0; i < r.size(); ++i)
            ratio[i] = I[i] / (std::pow(checked(prof, r[i]), k.p2) * std::pow(r[i], k.Q));
        return sup_ratio(ratio, s);
    }
    case Condition::surjective: {
        bool ok = prof.surjective();
        return {ok, ok ? 1.0 : 0.0, ok ? std::string{} : "surjectivity is not certified for this profile"};
    }
    }
    throw InputError("unhandled condition");
}

}  // namespace

ConditionResult check_condition(const RadialProfile& p, Condition cond, const ConditionParams& params,
                                const QuadraturePlan& plan) {
    plan.validate();
    try {
        return evaluate(p, cond, params);
    } catch (const DivergenceError& e) {
        throw DivergenceError("condition " + condition_name(cond) + ": " + e.what());
    }
}

}  // namespace hmorrey
