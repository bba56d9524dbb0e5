#include "hmorrey/functions.hpp"

#include <algorithm>
#include <cmath>

#include "hmorrey/errors.hpp"
#include "hmorrey/quadrature.hpp"
#include "hmorrey/util.hpp"

namespace hmorrey {

double RadialBase::operator()(double t) const {
    switch (kind) {
    case Kind::ball:
        return t < a ? 1.0 : 0.0;
    case Kind::power:
        if (cut == PowerCut::inner && t < 1.0) return 0.0;
        if (cut == PowerCut::outer && t >= 1.0) return 0.0;
        return std::pow(std::max(t, kPowerCap), s);
    case Kind::gauss:
        return std::exp(-t * t);
    case Kind::constant:
        return c;
    }
    return 0.0;
}

double RadialBase::envelope(double t) const {
    switch (kind) {
    case Kind::ball:
        return t < a ? 1.0 : 0.0;
    case Kind::power:
        if (s <= 0.0) {
            if (cut == PowerCut::inner && t < 1.0) return 1.0;
            if (cut == PowerCut::outer && t >= 1.0) return 0.0;
            return std::pow(std::max(t, kPowerCap), s);
        }
        if (cut == PowerCut::outer) return t < 1.0 ? 1.0 : 0.0;
        return INFINITY;
    case Kind::gauss:
        return std::exp(-t * t);
    case Kind::constant:
        return std::abs(c);
    }
    return INFINITY;
}

bool RadialBase::decays() const {
    switch (kind) {
    case Kind::ball:
    case Kind::gauss:
        return true;
    case Kind::power:
        return s < 0.0 || cut == PowerCut::outer;
    case Kind::constant:
        return c == 0.0;
    }
    return false;
}

double RadialBase::support() const {
    if (kind == Kind::ball) return a;
    if (kind == Kind::power && cut == PowerCut::outer) return 1.0;
    if (kind == Kind::constant && c == 0.0) return 0.0;
    return INFINITY;
}

std::vector<double> RadialBase::breakpoints() const {
    if (kind == Kind::ball) return {a};
    if (kind == Kind::power && cut != PowerCut::none) return {1.0};
    return {};
}

double RadialBase::mass(double D, const GroupDescriptor& g, bool abs) const {
    const double Q = g.Q();
    if (!(D > 0.0)) return 0.0;
    switch (kind) {
    case Kind::ball:
        return g.vol1() * std::pow(std::min(D, a), Q);
    case Kind::constant:
        return (abs ? std::abs(c) : c) * g.vol1() * std::pow(D, Q);
    case Kind::gauss: {
        auto F = [Q](double u) { return std::exp(-u * u) * std::pow(u, Q - 1); };
        return g.sigma() * integrate_log(F, 0.0, D, {}, 1e-8, "gaussian mass").value;
    }
    case Kind::power: {
        double lo = cut == PowerCut::inner ? 1.0 : 0.0;
        double hi = cut == PowerCut::outer ? std::min(D, 1.0) : D;
        if (hi <= lo) return 0.0;
        double e = s + Q;
        if (e == 0.0) return lo > 0.0 ? g.sigma() * std::log(hi / lo) : INFINITY;
        if (e < 0.0 && lo == 0.0) return INFINITY;
        return g.sigma() * (std::pow(hi, e) - (lo > 0.0 ? std::pow(lo, e) : 0.0)) / e;
    }
    }
    return INFINITY;
}

void RadialBase::check_integrable(double Q, double p) const {
    if (kind == Kind::power && cut != PowerCut::inner && s * p + Q <= 0.0)
        throw DivergenceError("power singularity |x|^" + format_number(s) + " is not locally integrable to the power " +
                              format_number(p) + " in homogeneous dimension " + format_number(Q));
}

TestFunction TestFunction::ball(double a) {
    if (!(a > 0.0)) throw InputError("ball radius must be positive");
    TestFunction f;
    f.base_ = {RadialBase::Kind::ball, a, 0.0, PowerCut::none, 1.0};
    return f;
}

TestFunction TestFunction::power(double s, PowerCut cut) {
    if (!std::isfinite(s)) throw InputError("power exponent must be finite");
    TestFunction f;
    f.base_ = {RadialBase::Kind::power, 1.0, s, cut, 1.0};
    return f;
}

TestFunction TestFunction::gauss() {
    TestFunction f;
    f.base_ = {RadialBase::Kind::gauss, 1.0, 0.0, PowerCut::none, 1.0};
    return f;
}

TestFunction TestFunction::constant(double c) {
    if (!std::isfinite(c)) throw InputError("constant must be finite");
    TestFunction f;
    f.base_ = {RadialBase::Kind::constant, 1.0, 0.0, PowerCut::none, c};
    return f;
}

TestFunction TestFunction::shifted(TestFunction base, Point z) {
    TestFunction f;
    f.kind_ = Kind::shifted;
    f.shift_ = z;
    f.parts_.emplace_back(1.0, std::move(base));
    return f;
}

TestFunction TestFunction::dilated(TestFunction base, double lambda) {
    if (!(lambda > 0.0)) throw InputError("dilation factor must be positive");
    TestFunction f;
    f.kind_ = Kind::dilated;
    f.lambda_ = lambda;
    f.parts_.emplace_back(1.0, std::move(base));
    return f;
}

TestFunction TestFunction::combo(std::vector<std::pair<double, TestFunction>> parts) {
    for (const auto& [c, p] : parts)
        if (!std::isfinite(c)) throw InputError("combination coefficients must be finite");
    TestFunction f;
    f.kind_ = Kind::combo;
    f.parts_ = std::move(parts);
    return f;
}

namespace {

std::string after_base(const std::string& s, std::string& head) {
    auto pos = s.find(":base=");
    if (pos == std::string::npos) throw InputError("missing ':base=' in '" + s + "'");
    head = s.substr(0, pos);
    return s.substr(pos + 6);
}

}  // namespace

TestFunction TestFunction::parse(const std::string& spec_in) {
    std::string s = trim(spec_in);
    if (s.rfind("shift:", 0) == 0) {
        std::string head;
        std::string base = after_base(s, head);
        auto fields = split(head, ':');
        if (fields.size() != 2 || fields[1].rfind("z=", 0) != 0) throw InputError("shift needs 'z=...': " + s);
        return shifted(parse(base), Point(parse_doubles(fields[1].substr(2), ',', "shift point")));
    }
    if (s.rfind("dilate:", 0) == 0) {
        std::string head;
        std::string base = after_base(s, head);
        auto fields = split(head, ':');
        if (fields.size() != 2 || fields[1].rfind("l=", 0) != 0) throw InputError("dilate needs 'l=...': " + s);
        return dilated(parse(base), parse_double(fields[1].substr(2), "dilation factor"));
    }
    if (s.rfind("combo:", 0) == 0) {
        std::vector<std::pair<double, TestFunction>> parts;
        std::string body = s.substr(6);
        std::size_t i = 0;
        while (i < body.size()) {
            if (body[i] != '[') throw InputError("combo items must be bracketed: " + s);
            int depth = 0;
            std::size_t j = i;
            for (; j < body.size(); ++j) {
                if (body[j] == '[') ++depth;
                if (body[j] == ']' && --depth == 0) break;
            }
            if (j == body.size()) throw InputError("unbalanced brackets in '" + s + "'");
            std::string item = body.substr(i + 1, j - i - 1);
            double coef = 1.0;
            auto star = item.find('*');
            auto colon = item.find(':');
            if (star != std::string::npos && (colon == std::string::npos || star < colon)) {
                coef = parse_double(item.substr(0, star), "combo coefficient");
                item = item.substr(star + 1);
            }
            parts.emplace_back(coef, parse(item));
            i = j + 1;
        }
        return combo(std::move(parts));
    }
    auto fields = split(s, ':');
    auto value = [&](const std::string& key, double def) {
        for (std::size_t k = 1; k < fields.size(); ++k)
            if (fields[k].rfind(key + "=", 0) == 0) return parse_double(fields[k].substr(key.size() + 1), key);
        return def;
    };
    for (std::size_t k = 1; k < fields.size(); ++k) {
        auto eq = fields[k].find('=');
        std::string key = fields[k].substr(0, eq);
        bool known = (fields[0] == "ball" && key == "a") || (fields[0] == "pow" && (key == "s" || key == "cut")) ||
                     (fields[0] == "const" && key == "c");
        if (eq == std::string::npos || !known) throw InputError("unexpected field '" + fields[k] + "' in '" + s + "'");
    }
    if (fields[0] == "ball") return ball(value("a", 1.0));
    if (fields[0] == "gauss" && fields.size() == 1) return gauss();
    if (fields[0] == "const") return constant(value("c", 1.0));
    if (fields[0] == "pow") {
        PowerCut cut = PowerCut::none;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            if (fields[k] == "cut=inner") cut = PowerCut::inner;
            else if (fields[k] == "cut=outer") cut = PowerCut::outer;
            else if (fields[k].rfind("cut=", 0) == 0) throw InputError("cut must be inner or outer: " + s);
        }
        bool has_s = std::any_of(fields.begin() + 1, fields.end(), [](const std::string& f) { return f.rfind("s=", 0) == 0; });
        if (!has_s) throw InputError("power function needs 's=': " + s);
        return power(value("s", 0.0), cut);
    }
    throw InputError("unknown test function '" + s + "'");
}

double TestFunction::eval(const GroupDescriptor& g, const Point& x) const {
    switch (kind_) {
    case Kind::radial:
        return base_(g.quasi_norm(x));
    case Kind::shifted:
        return parts_[0].second.eval(g, g.multiply(g.inverse(shift_), x));
    case Kind::dilated:
        return parts_[0].second.eval(g, g.dilate(lambda_, x));
    case Kind::combo: {
        double v = 0.0;
        for (const auto& [c, f] : parts_) v += c * f.eval(g, x);
        return v;
    }
    }
    return 0.0;
}

void TestFunction::collect(const GroupDescriptor& g, double coef, const Point& center, double scale,
                           std::vector<RadialTerm>& out) const {
    switch (kind_) {
    case Kind::radial:
        out.push_back({coef, center, scale, base_});
        return;
    case Kind::shifted:
        parts_[0].second.collect(g, coef, g.multiply(center, g.dilate(1.0 / scale, shift_)), scale, out);
        return;
    case Kind::dilated:
        parts_[0].second.collect(g, coef, center, scale * lambda_, out);
        return;
    case Kind::combo:
        for (const auto& [c, f] : parts_) f.collect(g, coef * c, center, scale, out);
        return;
    }
}

std::vector<RadialTerm> TestFunction::terms(const GroupDescriptor& g) const {
    if (kind_ == Kind::shifted) g.check(shift_);
    std::vector<RadialTerm> out;
    collect(g, 1.0, g.origin(), 1.0, out);
    std::erase_if(out, [](const RadialTerm& t) {
        return t.coef == 0.0 || (t.base.kind == RadialBase::Kind::constant && t.base.c == 0.0);
    });
    return out;
}

bool TestFunction::radial() const {
    switch (kind_) {
    case Kind::radial: return true;
    case Kind::shifted: return shift_.is_origin() && parts_[0].second.radial();
    case Kind::dilated: return parts_[0].second.radial();
    case Kind::combo:
        return std::all_of(parts_.begin(), parts_.end(), [](const auto& p) { return p.second.radial(); });
    }
    return false;
}

bool TestFunction::nonnegative() const {
    switch (kind_) {
    case Kind::radial: return base_.kind != RadialBase::Kind::constant || base_.c >= 0.0;
    case Kind::shifted:
    case Kind::dilated: return parts_[0].second.nonnegative();
    case Kind::combo:
        return std::all_of(parts_.begin(), parts_.end(),
                           [](const auto& p) { return p.first >= 0.0 && p.second.nonnegative(); });
    }
    return false;
}

bool TestFunction::zero() const {
    switch (kind_) {
    case Kind::radial: return base_.kind == RadialBase::Kind::constant && base_.c == 0.0;
    case Kind::shifted:
    case Kind::dilated: return parts_[0].second.zero();
    case Kind::combo:
        return std::all_of(parts_.begin(), parts_.end(),
                           [](const auto& p) { return p.first == 0.0 || p.second.zero(); });
    }
    return false;
}

std::string TestFunction::spec() const {
    switch (kind_) {
    case Kind::radial:
        switch (base_.kind) {
        case RadialBase::Kind::ball: return "ball:a=" + format_number(base_.a);
        case RadialBase::Kind::gauss: return "gauss";
        case RadialBase::Kind::constant: return "const:c=" + format_number(base_.c);
        case RadialBase::Kind::power:
            return "pow:s=" + format_number(base_.s) +
                   (base_.cut == PowerCut::inner ? ":cut=inner" : base_.cut == PowerCut::outer ? ":cut=outer" : "");
        }
        break;
    case Kind::shifted: {
        std::string z;
        for (std::size_t i = 0; i < shift_.size(); ++i) z += (i ? "," : "") + format_number(shift_[i]);
        return "shift:z=" + z + ":base=" + parts_[0].second.spec();
    }
    case Kind::dilated:
        return "dilate:l=" + format_number(lambda_) + ":base=" + parts_[0].second.spec();
    case Kind::combo: {
        std::string s = "combo:";
        for (const auto& [c, f] : parts_) s += "[" + format_number(c) + "*" + f.spec() + "]";
        return s;
    }
    }
    return {};
}

double eval_terms(const std::vector<RadialTerm>& terms, const GroupDescriptor& g, const Point& y) {
    double v = 0.0;
    for (const auto& t : terms) {
        double r = t.center.is_origin() ? g.quasi_norm(y) : g.quasi_norm(g.multiply(g.inverse(t.center), y));
        v += t.coef * t.base(t.scale * r);
    }
    return v;
}

double GridFunction::cell_volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < res.size(); ++i) v *= spacing(i);
    return v;
}

Point GridFunction::center(const GroupDescriptor& g, std::size_t index) const {
    Point x(g.n());
    for (std::size_t k = res.size(); k-- > 0;) {
        std::size_t i = index % static_cast<std::size_t>(res[k]);
        index /= static_cast<std::size_t>(res[k]);
        x[k] = -L + (static_cast<double>(i) + 0.5) * spacing(k);
    }
    return x;
}

GridFunction sample_to_grid(const TestFunction& f, const GroupDescriptor& g, double L, const std::vector<int>& res) {
    if (!(L > 0.0)) throw InputError("grid half-width must be positive");
    if (res.size() != g.n()) throw InputError("grid needs one resolution per axis");
    double total = 1.0;
    for (int r : res) {
        if (r < 2) throw InputError("grid resolution must be at least 2 per axis");
        total *= r;
    }
    if (total > static_cast<double>(kGridBudget))
        throw ResourceError("grid of " + format_number(total) + " samples exceeds the memory budget");
    GridFunction out;
    out.L = L;
    out.res = res;
    out.group = g.spec();
    out.values.resize(static_cast<std::size_t>(total));
    auto terms = f.terms(g);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = eval_terms(terms, g, out.center(g, i));
    return out;
}

}  // namespace hmorrey
