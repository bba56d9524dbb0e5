#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "hmorrey/group.hpp"

namespace hmorrey {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// Gauss-Legendre rule with n nodes, 1 <= n <= 128; cached.
const GaussRule& gauss_legendre(int n);

// Neumaier compensated accumulator.
class KahanSum {
public:
    void add(double v) noexcept {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// int_a^b F(r) dr through r = e^u with composite Simpson on segments split at
// the breakpoints. a may be 0 and b may be infinity; the open ends are marched
// octave by octave until an exponential envelope certifies the tail.
// Throws DivergenceError naming `what` when the tail cannot be certified.
Integral integrate_log(const std::function<double(double)>& F, double a, double b,
                       std::span<const double> breaks, double rel_tol, const char* what);

// Shell edges covering [a, b]: lattice 2^(k/per_octave) plus breakpoints.
std::vector<double> shell_edges(double a, double b, int per_octave, std::span<const double> breaks);

}  // namespace hmorrey
