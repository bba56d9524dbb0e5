#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hmorrey/functions.hpp"
#include "hmorrey/kernels.hpp"
#include "hmorrey/profiles.hpp"

namespace hmorrey {

struct OperatorResult {
    std::vector<Point> points;
    std::vector<double> values;
    std::vector<double> errors;
    QuadraturePlan plan;
};

// Radial convolution kernel y -> k(|x y^{-1}|). With subtract set the kernel
// becomes k(|x y^{-1}|) - k(|y|) 1(|y| >= 1). k must be positive and
// nonincreasing; the tail and remainder bounds rely on it.
class ConvolutionKernel {
public:
    ConvolutionKernel(std::function<double(double)> k, std::string name, bool subtract = false);

    double operator()(double s) const { return k_(s); }
    bool subtract() const noexcept { return subtract_; }
    const std::string& name() const noexcept { return name_; }
    // |sigma| int_0^delta k(t) t^(Q-1) dt
    double inner_mass(const GroupDescriptor& g, double delta) const;

private:
    std::function<double(double)> k_;
    std::string name_;
    bool subtract_;
};

ConvolutionKernel bessel_riesz_kernel(const KernelParams& k);
ConvolutionKernel gen_bessel_riesz_kernel(const RadialProfile& rho, double gamma, double Q);
ConvolutionKernel gen_fractional_kernel(const RadialProfile& rho, double Q, bool modified = false);

struct ApplyOptions {
    bool error_estimate = true;  // adds a coarse pass
    bool parallel = true;
};

// int k(|x y^{-1}|) f(y) dy at one point.
Integral apply_kernel_at(const ConvolutionKernel& k, const TestFunction& f, const GroupDescriptor& g,
                         const Point& x, const QuadraturePlan& plan, bool error_estimate = true);

OperatorResult apply_kernel(const ConvolutionKernel& k, const TestFunction& f, const GroupDescriptor& g,
                            const std::vector<Point>& points, const QuadraturePlan& plan,
                            ApplyOptions opts = {});

// Centred maximal function sup_r (vol1 r^Q)^{-1} int_{B(x,r)} |f|.
OperatorResult maximal_function(const TestFunction& f, const GroupDescriptor& g, const std::vector<Point>& points,
                                const RadiusGrid& r_grid = RadiusGrid::maximal_default(),
                                const QuadraturePlan& plan = {}, ApplyOptions opts = {});
// Same, with the radius grid given explicitly.
OperatorResult maximal_function(const TestFunction& f, const GroupDescriptor& g, const std::vector<Point>& points,
                                const std::vector<double>& radii, const QuadraturePlan& plan = {},
                                ApplyOptions opts = {});

OperatorResult apply_bessel_riesz(const TestFunction& f, const GroupDescriptor& g, const KernelParams& k,
                                  const std::vector<Point>& points, const QuadraturePlan& plan,
                                  ApplyOptions opts = {});
// Requires the bessel-small-scale condition on rho.
OperatorResult apply_gen_bessel_riesz(const TestFunction& f, const GroupDescriptor& g, const RadialProfile& rho,
                                      double gamma, const std::vector<Point>& points, const QuadraturePlan& plan,
                                      ApplyOptions opts = {});
// Requires the fractional-small-scale condition on rho.
OperatorResult apply_gen_fractional(const TestFunction& f, const GroupDescriptor& g, const RadialProfile& rho,
                                    const std::vector<Point>& points, const QuadraturePlan& plan,
                                    ApplyOptions opts = {});
// Requires fractional-small-scale, rho-tail and rho-lipschitz.
OperatorResult apply_mod_fractional(const TestFunction& f, const GroupDescriptor& g, const RadialProfile& rho,
                                    const std::vector<Point>& points, const QuadraturePlan& plan,
                                    ApplyOptions opts = {});

// Throws HypothesisError when rho fails a precondition of the named operator
// ("gbr", "gfrac", "modfrac").
void check_operator_hypotheses(const std::string& op, const RadialProfile& rho, const GroupDescriptor& g,
                               double gamma, const QuadraturePlan& plan);

// A(x, R) = int_{B(x,R+r)} (k(|x y^{-1}|) - k(|y|)) dy with r = |x| and
// k = rho(t)/t^Q, split as A1 (balls of radius R, zero by invariance) plus A2.
struct CancellationResult {
    double value = 0.0;
    double A1 = 0.0;
    double A2 = 0.0;
    double error = 0.0;
};

CancellationResult cancellation_A(const GroupDescriptor& g, const RadialProfile& rho, const Point& x, double R,
                                  const QuadraturePlan& plan);

struct YoungGrid {
    double L = 4.0;
    int res = 64;  // cells per axis
};

struct YoungResult {
    double lhs = 0.0;           // ||h * f||_q on the grid
    double rhs = 0.0;           // ||f||_p ||h||_p1 with grid norms
    double rhs_analytic = 0.0;  // exact norms when both are single radial terms, else rhs
    double f_norm = 0.0;
    double h_norm = 0.0;
    std::size_t cells = 0;
};

// Discrete Young check; infinite exponents are allowed.
YoungResult convolve_young(const TestFunction& f, const TestFunction& h, const GroupDescriptor& g, double p,
                           double q, double p1, const YoungGrid& grid = {}, const QuadraturePlan& plan = {},
                           bool parallel = true);

// Raw discrete convolution of two grids of equal spacing, full linear output
// (n_f + n_h - 1 cells per axis). Abelian groups only.
std::vector<double> grid_convolve(const GridFunction& f, const GridFunction& h, bool parallel = true);

}  // namespace hmorrey
