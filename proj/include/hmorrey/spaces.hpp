#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hmorrey/functions.hpp"
#include "hmorrey/kernels.hpp"
#include "hmorrey/profiles.hpp"

namespace hmorrey {

// literal: f_B = r^-Q int_B f. mean: f_B = |B|^-1 int_B f.
enum class AverageConvention { literal, mean };

AverageConvention parse_average_convention(const std::string& name);
std::string convention_name(AverageConvention c);

struct SpaceNorm {
    SupNorm sup;
    std::vector<std::string> warnings;  // profile monotonicity assumptions that fail
};

// Origin-polar quadrature nodes for the balls B(0, r_j), r_j on a radius grid.
// Nodes between r_in = r_0 / 16 and the largest radius are Gauss nodes in
// ln t times a sphere rule; the part of each ball inside r_in is extrapolated
// from the two innermost octaves. With a coarse set, a second node family at
// half the resolution yields error estimates.
class BallSampler {
public:
    BallSampler(const GroupDescriptor& g, std::vector<double> radii, const QuadraturePlan& plan,
                std::vector<double> breaks = {}, bool coarse = true);

    const GroupDescriptor& group() const noexcept { return g_; }
    const std::vector<double>& radii() const noexcept { return radii_; }
    // every point at which a function must be sampled
    const std::vector<Point>& points() const noexcept { return points_; }
    bool has_coarse() const noexcept { return coarse_; }

    // int_{B(0,r_j)} F(v) for all j, v the samples at points()
    std::vector<Integral> cumulative(const std::vector<double>& values,
                                     const std::function<double(double)>& F) const;
    // same, with an integrand that depends on the ball index
    std::vector<Integral> per_ball(const std::vector<double>& values,
                                   const std::function<double(double, std::size_t)>& F) const;

private:
    struct Sums {
        std::vector<double> fine, coarse;
        double inner1_f = 0.0, inner2_f = 0.0, inner1_c = 0.0, inner2_c = 0.0;
    };
    Integral finish(double fine, double coarse, double i1f, double i2f, double i1c, double i2c) const;

    const GroupDescriptor& g_;
    std::vector<double> radii_;
    bool coarse_;
    std::vector<Point> points_;
    std::vector<double> w_fine_, w_coarse_;
    std::vector<std::size_t> ball_;  // smallest j with |point| <= r_j
    std::vector<int> octave_;        // 1 or 2 for the two innermost octaves, else 0
};

std::vector<double> sample(const TestFunction& f, const GroupDescriptor& g, const BallSampler& s);

// Breakpoints, in origin-polar radius, of the terms of f.
std::vector<double> sampler_breaks(const TestFunction& f, const GroupDescriptor& g);

// (int_{B(0,r)} |f|^p)^(1/p)
Integral lebesgue_ball_norm(const TestFunction& f, const GroupDescriptor& g, double p, double r,
                            const QuadraturePlan& plan);

// sup_r r^(Q(1/q - 1/p)) ||f||_{L^p(B(0,r))}
SpaceNorm morrey_norm(const TestFunction& f, const GroupDescriptor& g, double p, double q,
                      const RadiusGrid& grid = RadiusGrid::norm_default(), const QuadraturePlan& plan = {});

// sup_r phi(r)^-1 (r^-Q int_{B(0,r)} |f|^p)^(1/p)
SpaceNorm gen_morrey_norm(const TestFunction& f, const GroupDescriptor& g, double p, const RadialProfile& phi,
                          const RadiusGrid& grid = RadiusGrid::norm_default(), const QuadraturePlan& plan = {});
SpaceNorm gen_morrey_norm(const BallSampler& s, const std::vector<double>& values, double p,
                          const RadialProfile& phi);

Integral ball_average(const TestFunction& f, const GroupDescriptor& g, double r, const QuadraturePlan& plan,
                      AverageConvention conv = AverageConvention::literal);

// sup_r phi(r)^-1 (r^-Q int_{B(0,r)} |f - f_B|^p)^(1/p)
SpaceNorm campanato_norm(const TestFunction& f, const GroupDescriptor& g, double p, const RadialProfile& phi,
                         const RadiusGrid& grid = RadiusGrid::norm_default(), const QuadraturePlan& plan = {},
                         AverageConvention conv = AverageConvention::literal);
SpaceNorm campanato_norm(const BallSampler& s, const std::vector<double>& values, double p,
                         const RadialProfile& phi, AverageConvention conv = AverageConvention::literal);

// lim_{r -> inf} f_{B(0,r)}. Averages over r = 2^k are accepted once the
// Cauchy bound C phi~(r), phi~(r) = int_r^inf phi(t)/t dt and C the largest
// observed |f_B(2r) - f_B(r)| / phi~(r), falls below tol. Requires
// int_1^inf phi/t finite (HypothesisError) and throws ConvergenceError when no
// such r exists below 2^60.
Integral sigma_limit(const TestFunction& f, const GroupDescriptor& g, const RadialProfile& phi,
                     const QuadraturePlan& plan, AverageConvention conv = AverageConvention::literal);

}  // namespace hmorrey
