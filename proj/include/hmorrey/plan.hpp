#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hmorrey {

// Numerical effort and truncation settings shared by all quadratures.
struct QuadraturePlan {
    double inner_cutoff = 0x1p-20;  // smallest shell radius before the analytic remainder
    double outer_radius = 0x1p64;   // cap on the outer truncation radius
    int shells_per_octave = 2;
    int nodes_per_shell = 4;        // Gauss-Legendre nodes in log r per shell
    int sphere_order = 8;           // nodes per chart axis of the sphere rule
    std::uint64_t mc_seed = 0;
    double tol = 1e-3;

    void validate() const;

    // Twice the shells per octave and twice the sphere resolution.
    QuadraturePlan refined() const;

    // Accepts "tol=1e-3,spo=2,nodes=4,sphere=8,delta=1e-6,rmax=1e9,seed=0"
    // (':' also works as a separator).
    static QuadraturePlan parse(const std::string& text, QuadraturePlan base);
    static QuadraturePlan parse(const std::string& text);
    std::string describe() const;
};

// Geometric radius grid r_min * 2^(k / per_octave), k = 0..count-1.
struct RadiusGrid {
    double r_min = 0x1p-24;
    double r_max = 0x1p24;
    int per_octave = 2;

    std::vector<double> points() const;
    RadiusGrid refined(int factor) const;

    static RadiusGrid norm_default() { return {0x1p-24, 0x1p24, 2}; }
    static RadiusGrid maximal_default() { return {0x1p-12, 0x1p12, 2}; }
};

inline constexpr double kOverflowGuard = 1e12;

}  // namespace hmorrey
