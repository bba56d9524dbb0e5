#include <cmath>

#include "doctest.h"
#include "hmorrey/errors.hpp"
#include "hmorrey/spaces.hpp"

using namespace hmorrey;

namespace {

GroupDescriptor aniso12() { return GroupDescriptor::abelian_aniso({1, 2}); }

// |sigma| int_0^r h(t) t^(Q-1) dt by the trapezoid rule in ln t on [ln r - 50, ln r]
template <class H>
double oracle_radial(double sigma, double Q, double r, H h) {
    const double du = 2e-5, u1 = std::log(r), u0 = u1 - 50.0;
    const long n = static_cast<long>((u1 - u0) / du);
    double s = 0.0;
    for (long i = 0; i <= n; ++i) {
        double t = std::exp(u0 + i * du);
        s += (i == 0 || i == n ? 0.5 : 1.0) * h(t) * std::pow(t, Q);
    }
    return sigma * s * du;
}

RadialProfile pw(double beta) { return RadialProfile::power(1.0, beta); }

}  // namespace

TEST_SUITE("spaces") {

TEST_CASE("Lebesgue norms on balls") {
    auto g = aniso12();
    QuadraturePlan plan;
    auto one = TestFunction::constant(1.0);
    CHECK(lebesgue_ball_norm(one, g, 1.0, 1.0, plan).value == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(lebesgue_ball_norm(TestFunction::power(-1.0), g, 2.0, 1.0, plan).value ==
          doctest::Approx(std::sqrt(12.0)).epsilon(1e-9));
    for (double p : {1.0, 2.0, 3.5}) {
        double a = lebesgue_ball_norm(one, g, p, 0.7, plan).value;
        double b = lebesgue_ball_norm(one, g, p, 1.4, plan).value;
        CHECK(b / a == doctest::Approx(std::pow(2.0, 3.0 / p)).epsilon(1e-9));
    }
    auto h = GroupDescriptor::heisenberg1();
    CHECK(lebesgue_ball_norm(one, h, 1.0, 2.0, plan).value == doctest::Approx(h.vol1() * 16).epsilon(1e-9));
    // off-centre ball inside B(0,1): the sampler route
    auto off = TestFunction::parse("shift:z=0.2,0.1:base=ball:a=0.25");
    auto v = lebesgue_ball_norm(off, g, 1.0, 1.0, plan);
    CHECK(v.value == doctest::Approx(4.0 / 64).epsilon(0.02));
    CHECK_THROWS_AS(lebesgue_ball_norm(TestFunction::power(-2.0), g, 2.0, 1.0, plan), DivergenceError);
    CHECK_THROWS_AS(lebesgue_ball_norm(one, g, 0.5, 1.0, plan), InputError);
}

TEST_CASE("Morrey norms") {
    auto g = aniso12();
    auto gauss = TestFunction::gauss();
    // p = q: the global L^p norm
    auto m = morrey_norm(gauss, g, 2.0, 2.0);
    double global = std::sqrt(oracle_radial(12, 3, 40.0, [](double t) { return std::exp(-2 * t * t); }));
    CHECK(m.sup.value == doctest::Approx(global).epsilon(1e-6));
    // f = |x|^(-Q/q) cancels the growth exactly
    auto c = morrey_norm(TestFunction::power(-1.0), g, 2.0, 3.0);
    CHECK(c.sup.value == doctest::Approx(std::sqrt(12.0)).epsilon(1e-8));
    CHECK(c.sup.bounded);
    auto b = morrey_norm(TestFunction::ball(1.0), g, 1.0, 2.0);
    CHECK(b.sup.value == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(b.sup.argmax == doctest::Approx(1.0));
    CHECK_THROWS_AS(morrey_norm(gauss, g, 3.0, 2.0), InputError);
    // the Morrey norm is the generalised one with phi = r^(-Q/q)
    for (const char* spec : {"gauss", "ball:a=1", "shift:z=0.5,0:base=gauss"}) {
        auto f = TestFunction::parse(spec);
        double a = morrey_norm(f, g, 1.5, 4.0).sup.value;
        double e = gen_morrey_norm(f, g, 1.5, pw(-3.0 / 4.0)).sup.value;
        CHECK(std::abs(a / e - 1.0) < 1e-12);
    }
}

TEST_CASE("generalised Morrey norms") {
    auto g = aniso12();
    auto n = gen_morrey_norm(TestFunction::power(-1.0), g, 2.0, pw(-1.0));
    CHECK(n.sup.value == doctest::Approx(std::sqrt(12.0)).epsilon(1e-8));
    CHECK(n.warnings.empty());
    auto c = gen_morrey_norm(TestFunction::constant(2.5), g, 3.0, pw(0.0));
    CHECK(c.sup.value == doctest::Approx(2.5 * std::cbrt(4.0)).epsilon(1e-9));
    // phi = r^beta: f o D_l has norm l^beta times that of f
    for (const char* spec : {"gauss", "ball:a=1", "shift:z=0.5,0.25:base=gauss"}) {
        auto f = TestFunction::parse(spec);
        double base = gen_morrey_norm(f, g, 2.0, pw(-1.0)).sup.value;
        for (double l : {0.5, 2.0}) {
            double v = gen_morrey_norm(TestFunction::dilated(f, l), g, 2.0, pw(-1.0)).sup.value;
            CHECK(std::abs(v / (base * std::pow(l, -1.0)) - 1.0) < 0.01);
        }
    }
    // a 4x finer radius grid moves the sup by under 1%
    auto grid = RadiusGrid::norm_default();
    for (const char* spec : {"gauss", "ball:a=1", "pow:s=-0.5:cut=outer"}) {
        auto f = TestFunction::parse(spec);
        double a = gen_morrey_norm(f, g, 2.0, pw(-1.0), grid).sup.value;
        double b = gen_morrey_norm(f, g, 2.0, pw(-1.0), grid.refined(4)).sup.value;
        CHECK(std::abs(a / b - 1.0) < 0.01);
    }
    // phi increasing breaks the monotonicity assumption; the norm is still returned
    auto w = gen_morrey_norm(TestFunction::gauss(), g, 2.0, pw(0.5));
    CHECK_FALSE(w.warnings.empty());
    auto neg = RadialProfile::table({1.0, 2.0}, {1.0, 1e-300});
    CHECK_THROWS_AS(gen_morrey_norm(TestFunction::gauss(), g, 2.0, neg), DomainError);
    // the sampler route agrees with the exact radial route
    BallSampler s(g, RadiusGrid::norm_default().points(), QuadraturePlan{});
    auto gs = gen_morrey_norm(s, sample(TestFunction::gauss(), g, s), 2.0, pw(-1.0));
    auto ge = gen_morrey_norm(TestFunction::gauss(), g, 2.0, pw(-1.0));
    CHECK(std::abs(gs.sup.value - ge.sup.value) <= gs.sup.error + 1e-9);
    CHECK(std::abs(gs.sup.value / ge.sup.value - 1.0) < 1e-3);
}

TEST_CASE("ball averages") {
    auto g = aniso12();
    QuadraturePlan plan;
    auto one = TestFunction::constant(1.0);
    CHECK(ball_average(one, g, 3.0, plan).value == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(ball_average(one, g, 3.0, plan, AverageConvention::mean).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ball_average(TestFunction::power(-1.0), g, 1.0, plan).value == doctest::Approx(6.0).epsilon(1e-9));
    auto odd = TestFunction::parse("combo:[1*shift:z=0.5,0:base=ball:a=0.25][-1*shift:z=-0.5,0:base=ball:a=0.25]");
    CHECK(std::abs(ball_average(odd, g, 1.0, plan).value) < 1e-12);
    CHECK(parse_average_convention("mean") == AverageConvention::mean);
    CHECK_THROWS_AS(parse_average_convention("median"), InputError);
}

TEST_CASE("Campanato norms") {
    auto g = aniso12();
    auto flat = pw(0.0);
    // constants: zero under the mean convention, |c(1 - vol1)| vol1^(1/p) under the literal one
    auto c = TestFunction::constant(1.0);
    CHECK(campanato_norm(c, g, 2.0, flat, RadiusGrid::norm_default(), {}, AverageConvention::mean).sup.value <
          1e-9);
    CHECK(campanato_norm(c, g, 2.0, flat).sup.value == doctest::Approx(6.0).epsilon(1e-9));
    // f = |x|^-1, phi = r^-1: scale invariant, closed forms sqrt(84) and sqrt(3)
    auto f = TestFunction::power(-1.0);
    auto lit = campanato_norm(f, g, 2.0, pw(-1.0));
    auto mean = campanato_norm(f, g, 2.0, pw(-1.0), RadiusGrid::norm_default(), {}, AverageConvention::mean);
    CHECK(lit.sup.value == doctest::Approx(std::sqrt(84.0)).epsilon(1e-6));
    CHECK(mean.sup.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
    double o_lit = std::sqrt(oracle_radial(12, 3, 1.0, [](double t) { return std::pow(1 / t - 6.0, 2); }));
    double o_mean = std::sqrt(oracle_radial(12, 3, 1.0, [](double t) { return std::pow(1 / t - 1.5, 2); }));
    CHECK(std::abs(lit.sup.value / o_lit - 1.0) < 0.01);
    CHECK(std::abs(mean.sup.value / o_mean - 1.0) < 0.01);
    // adding a constant: invariant under the mean convention only
    auto gsum = TestFunction::parse("combo:[1*gauss][2*const:c=1]");
    auto gauss = TestFunction::gauss();
    auto phi = pw(-0.5);
    auto grid = RadiusGrid::norm_default();
    double m0 = campanato_norm(gauss, g, 2.0, phi, grid, {}, AverageConvention::mean).sup.value;
    double m1 = campanato_norm(gsum, g, 2.0, phi, grid, {}, AverageConvention::mean).sup.value;
    CHECK(m1 == doctest::Approx(m0).epsilon(1e-6));
    double l0 = campanato_norm(gauss, g, 2.0, phi).sup.value;
    double l1 = campanato_norm(gsum, g, 2.0, phi).sup.value;
    CHECK(std::abs(l1 / l0 - 1.0) > 0.1);
    // sampler and radial routes agree
    for (auto conv : {AverageConvention::literal, AverageConvention::mean}) {
        BallSampler s(g, grid.points(), QuadraturePlan{});
        auto a = campanato_norm(s, sample(gauss, g, s), 2.0, phi, conv);
        auto b = campanato_norm(gauss, g, 2.0, phi, grid, {}, conv);
        CHECK(std::abs(a.sup.value / b.sup.value - 1.0) < 1e-3);
    }
    auto w = campanato_norm(gauss, g, 2.0, pw(1.5));
    CHECK_FALSE(w.warnings.empty());
}

TEST_CASE("limit of ball averages") {
    auto g = aniso12();
    QuadraturePlan plan;
    auto phi = pw(-0.5);
    auto z = sigma_limit(TestFunction::ball(1.0), g, phi, plan);
    CHECK(std::abs(z.value) < 1e-3);
    CHECK(sigma_limit(TestFunction::constant(2.0), g, phi, plan).value == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(sigma_limit(TestFunction::constant(2.0), g, phi, plan, AverageConvention::mean).value ==
          doctest::Approx(2.0).epsilon(1e-9));
    auto bump = TestFunction::parse("combo:[1*const:c=2][3*shift:z=0.5,0:base=ball:a=0.5]");
    auto s = sigma_limit(bump, g, phi, plan);
    CHECK(s.value == doctest::Approx(8.0).epsilon(plan.tol));
    CHECK(std::abs(s.value - 8.0) <= s.error + 1e-9);
    CHECK_THROWS_AS(sigma_limit(TestFunction::ball(1.0), g, pw(0.5), plan), HypothesisError);
    CHECK_THROWS_AS(sigma_limit(TestFunction::parse("pow:s=0.5:cut=inner"), g, phi, plan), ConvergenceError);
}

}  // TEST_SUITE
