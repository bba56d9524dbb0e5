#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hmorrey/group.hpp"

namespace hmorrey {

inline constexpr double kPowerCap = 1e-9;

enum class PowerCut { none, inner, outer };  // inner: zero for |x| < 1, outer: zero for |x| >= 1

// Radial profile b(t) of a catalog term, t = quasi-norm.
struct RadialBase {
    enum class Kind { ball, power, gauss, constant };
    Kind kind = Kind::ball;
    double a = 1.0;  // ball radius
    double s = 0.0;  // power exponent
    PowerCut cut = PowerCut::none;
    double c = 1.0;  // constant value

    double operator()(double t) const;
    // sup_{u >= t} |b(u)|; infinite when b does not decay
    double envelope(double t) const;
    bool decays() const;
    // radius beyond which b vanishes (infinity if none)
    double support() const;
    std::vector<double> breakpoints() const;
    // |sigma| int_0^D b(u) u^(Q-1) du (abs: of |b|); an upper bound for the gaussian
    double mass(double D, const GroupDescriptor& g, bool abs) const;
    // throws DivergenceError when |b|^p is not locally integrable in dimension Q
    void check_integrable(double Q, double p = 1.0) const;
};

// coef * b(scale * |center^{-1} y|)
struct RadialTerm {
    double coef = 1.0;
    Point center;
    double scale = 1.0;
    RadialBase base;

    double at(const GroupDescriptor& g, const Point& y) const {
        return coef * base(scale * g.quasi_norm(g.multiply(g.inverse(center), y)));
    }
};

class TestFunction {
public:
    enum class Kind { radial, shifted, dilated, combo };

    static TestFunction ball(double a = 1.0);
    static TestFunction power(double s, PowerCut cut = PowerCut::none);
    static TestFunction gauss();
    static TestFunction constant(double c);
    static TestFunction shifted(TestFunction base, Point z);
    static TestFunction dilated(TestFunction base, double lambda);
    static TestFunction combo(std::vector<std::pair<double, TestFunction>> parts);
    // "ball:a=1", "pow:s=-1[:cut=inner|outer]", "gauss", "const:c=2",
    // "shift:z=1,0:base=<spec>", "dilate:l=2:base=<spec>",
    // "combo:[2*ball:a=1][-1*gauss]"
    static TestFunction parse(const std::string& spec);

    double eval(const GroupDescriptor& g, const Point& x) const;
    std::vector<RadialTerm> terms(const GroupDescriptor& g) const;
    bool radial() const;  // radial about the origin
    bool nonnegative() const;
    bool zero() const;
    std::string spec() const;
    Kind kind() const noexcept { return kind_; }

private:
    void collect(const GroupDescriptor& g, double coef, const Point& center, double scale,
                 std::vector<RadialTerm>& out) const;

    Kind kind_ = Kind::radial;
    RadialBase base_;
    Point shift_;
    double lambda_ = 1.0;
    std::vector<std::pair<double, TestFunction>> parts_;
};

double eval_terms(const std::vector<RadialTerm>& terms, const GroupDescriptor& g, const Point& y);

// Cell-centred samples on [-L, L]^n, last axis fastest.
struct GridFunction {
    double L = 1.0;
    std::vector<int> res;
    std::vector<double> values;
    std::string group;

    std::size_t size() const { return values.size(); }
    double spacing(std::size_t axis) const { return 2 * L / res[axis]; }
    double cell_volume() const;
    Point center(const GroupDescriptor& g, std::size_t index) const;
};

inline constexpr std::size_t kGridBudget = std::size_t{1} << 27;

GridFunction sample_to_grid(const TestFunction& f, const GroupDescriptor& g, double L, const std::vector<int>& res);

}  // namespace hmorrey
