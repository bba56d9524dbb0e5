#pragma once

#include <string>
#include <vector>

#include "hmorrey/plan.hpp"

namespace hmorrey {

// Positive radial function used as rho, phi, omega or psi.
class RadialProfile {
public:
    enum class Kind { power, power_truncated, table, sum };

    static RadialProfile power(double c, double beta);
    // c r^beta for r <= rb, continued as c rb^(beta - beta2) r^beta2 beyond rb.
    static RadialProfile broken_power(double c, double beta, double beta2, double rb);
    // log-linear interpolation, end slopes extrapolated
    static RadialProfile table(std::vector<double> r, std::vector<double> values, std::string source = "table");
    static RadialProfile table_from_csv(const std::string& path);
    static RadialProfile sum(std::vector<RadialProfile> parts);
    // "pow:c=1:beta=-1", "bpow:c=1:beta=-1:beta2=-2:rb=1", "table:@file.csv",
    // "sum:pow:beta=-3|pow:beta=-1.5"
    static RadialProfile parse(const std::string& spec);

    double operator()(double r) const;

    Kind kind() const noexcept { return kind_; }
    double c() const noexcept { return c_; }
    double beta() const noexcept { return beta_; }
    bool is_power() const noexcept { return kind_ == Kind::power; }
    // Maps (0, inf) onto (0, inf); tables are never certified.
    bool surjective() const;
    std::vector<double> breakpoints() const;
    std::string spec() const;

    // r -> profile(r)^e
    RadialProfile pow(double e) const;

private:
    Kind kind_ = Kind::power;
    double c_ = 1.0;
    double beta_ = 0.0;
    double beta2_ = 0.0;
    double rb_ = 1.0;
    double exponent_ = 1.0;  // applied to non-power kinds
    std::vector<double> log_r_, log_v_;
    std::vector<RadialProfile> parts_;
    std::string source_;
};

struct DoublingResult {
    double empirical = 1.0;
    double analytic = 0.0;  // 0 when no closed form
};

DoublingResult doubling_constant(const RadialProfile& p, const std::vector<double>& r_grid);

// Hypotheses imposed on the profiles. The first argument of check_condition is
// rho for the kernel conditions and phi (or omega) for the others.
enum class Condition {
    bessel_small_scale,      // int_0^1 rho(t) t^(Q-gamma-1) dt finite
    fractional_small_scale,  // int_0^1 rho(t)/t dt finite
    phi_tail,                // int_r^inf phi^p/t dt <= C phi(r)^p
    bessel_balance,          // phi(r) int_0^r rho t^(Q-gamma-1) + int_r^inf rho phi t^(Q-gamma-1) <= C phi^(p/q)
    fractional_balance,      // phi(r) int_0^r rho/t + int_r^inf rho phi/t <= C phi^(p/q)
    rho_tail,                // int_r^inf rho/t^2 dt <= C rho(r)/r
    rho_lipschitz,           // |rho(r)/r^Q - rho(s)/s^Q| <= C |r-s| rho(s)/s^(Q+1), r/s in [1/2,2]
    campanato_balance,       // int_r^inf phi/t * int_0^r rho/t + r int_r^inf rho phi/t^2 <= C psi(r)
    phi_tail_finite,         // int_1^inf phi/t dt finite
    doubling,                // doubling condition
    morrey_monotone,         // phi nonincreasing and t^(Q/p) phi nondecreasing
    campanato_monotone,      // phi(r)/r nonincreasing
    power_bound,             // phi(r) <= C r^beta
    kernel_morrey,           // int_0^R r^((alpha-Q)p2+Q-1) dr <= C omega(R)^p2 R^Q
    surjective,
};

std::string condition_name(Condition c);
Condition parse_condition(const std::string& name);

struct ConditionParams {
    double Q = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
    double p = 0.0;
    double q = 0.0;
    double p2 = 0.0;
    double beta = 0.0;
    const RadialProfile* phi = nullptr;
    const RadialProfile* psi = nullptr;
    int grid_points = 241;  // over [1e-3, 1e3]
};

struct ConditionResult {
    bool holds = false;
    double constant = 0.0;
    std::string note;
};

// Throws DivergenceError naming the condition when an inner integral diverges.
ConditionResult check_condition(const RadialProfile& p, Condition cond, const ConditionParams& params,
                                const QuadraturePlan& plan);

}  // namespace hmorrey
