#pragma once

#include <utility>
#include <vector>

#include "hmorrey/group.hpp"
#include "hmorrey/profiles.hpp"

namespace hmorrey {

// Bessel-Riesz kernel |x|^(alpha-Q) (1+|x|)^(-gamma) on a group.
class KernelParams {
public:
    KernelParams(const GroupDescriptor& g, double alpha, double gamma);

    double alpha() const noexcept { return alpha_; }
    double gamma() const noexcept { return gamma_; }
    double Q() const noexcept { return g_.Q(); }
    const GroupDescriptor& group() const noexcept { return g_; }
    // radial profile, t > 0
    double radial(double t) const;

private:
    GroupDescriptor g_;
    double alpha_;
    double gamma_;
};

double kernel_eval(const KernelParams& k, const Point& x);

// (Q/(Q+gamma-alpha), Q/(Q-alpha)); throws DivergenceError when gamma = 0.
std::pair<double, double> admissible_p1_interval(const KernelParams& k);

struct DyadicSum {
    double value = 0.0;
    double truncation_error = 0.0;
    long k_lo = 0;
    long k_hi = 0;
    double a = 0.0;
    double b = 0.0;
};

// sum over k of (2^k R)^a / (1 + 2^k R)^b, a = (alpha-Q)p1+Q, b = gamma p1.
DyadicSum dyadic_sum(const KernelParams& k, double p1, double R, double tol);

// ||K||_{L^p1}, with error estimate.
Integral kernel_lebesgue_norm(const KernelParams& k, double p1, const QuadraturePlan& plan);

struct SandwichResult {
    bool lower_ok = false;
    bool upper_ok = false;
    double norm_p1 = 0.0;  // ||K||^p1
    double S = 0.0;
    double C_upper = 0.0;
    double C_lower = 0.0;
    double slack = 0.0;
};

SandwichResult sandwich_check(const KernelParams& k, double p1, double R, const QuadraturePlan& plan);

// Result of a sup over the radius grid.
struct SupNorm {
    double value = 0.0;
    double error = 0.0;
    double argmax = 0.0;
    bool boundary_attained = false;
    bool bounded = true;
};

SupNorm sup_over_grid(const std::vector<double>& r, const std::vector<double>& v, double rel_error);

SupNorm kernel_morrey_norm(const KernelParams& k, double p2, double p1, const QuadraturePlan& plan,
                           const RadiusGrid& grid = RadiusGrid::norm_default());

struct GenMorreyKernelNorm {
    SupNorm norm;
    bool hypothesis_holds = false;
    double hypothesis_constant = 0.0;
};

GenMorreyKernelNorm kernel_gen_morrey_norm(const KernelParams& k, double p2, const RadialProfile& omega,
                                           const QuadraturePlan& plan,
                                           const RadiusGrid& grid = RadiusGrid::norm_default());

}  // namespace hmorrey
