#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hmorrey/errors.hpp"
#include "hmorrey/group.hpp"
#include "hmorrey/quadrature.hpp"

using namespace hmorrey;

namespace {

const GroupDescriptor aniso12 = GroupDescriptor::abelian_aniso({1, 2});
const GroupDescriptor heis = GroupDescriptor::heisenberg1();
const GroupDescriptor iso2 = GroupDescriptor::abelian_iso(2);

Point random_point(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = u(rng);
    return p;
}

}  // namespace

TEST_SUITE("group") {

TEST_CASE("group law examples") {
    CHECK(iso2.multiply(Point{1, 2}, Point{3, 4}) == Point{4, 6});
    CHECK(heis.multiply(Point{1, 0, 0}, Point{0, 1, 0}) == Point{1, 1, 0.5});
    Point x{0.3, -1.2, 2.5};
    CHECK(heis.multiply(x, heis.inverse(x)).is_origin());
    CHECK(iso2.inverse(Point{1, -2}) == Point{-1, 2});
    CHECK(heis.inverse(Point{1, 2, 3}) == Point{-1, -2, -3});
    CHECK(heis.inverse(heis.origin()).is_origin());
    CHECK_THROWS_AS(iso2.multiply(Point{1, 2}, Point{1, 2, 3}), InputError);
}

TEST_CASE("heisenberg law is associative and dilations are automorphisms") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Point x = random_point(rng, 3, 2), y = random_point(rng, 3, 2), z = random_point(rng, 3, 2);
        Point a = heis.multiply(heis.multiply(x, y), z);
        Point b = heis.multiply(x, heis.multiply(y, z));
        for (int k = 0; k < 3; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
        Point d1 = heis.dilate(1.7, heis.multiply(x, y));
        Point d2 = heis.multiply(heis.dilate(1.7, x), heis.dilate(1.7, y));
        for (int k = 0; k < 3; ++k) CHECK(d1[k] == doctest::Approx(d2[k]).epsilon(1e-12));
    }
}

TEST_CASE("dilation examples") {
    CHECK(aniso12.dilate(2, Point{1, 1}) == Point{2, 4});
    CHECK(aniso12.dilate(1, Point{0.3, -0.7}) == Point{0.3, -0.7});
    CHECK(heis.dilate(3, Point{1, 1, 1}) == Point{3, 3, 9});
    CHECK_THROWS_AS(aniso12.dilate(0, Point{1, 1}), InputError);
    CHECK_THROWS_AS(aniso12.dilate(-1, Point{1, 1}), InputError);
}

TEST_CASE("quasi-norm examples and homogeneity") {
    CHECK(aniso12.quasi_norm(Point{0.5, 0.09}) == doctest::Approx(0.5));
    CHECK(heis.quasi_norm(Point{0, 0, 1}) == doctest::Approx(2.0));
    CHECK(heis.quasi_norm(heis.origin()) == 0.0);
    std::mt19937_64 rng(3);
    for (const GroupDescriptor* g : {&aniso12, &heis, &iso2}) {
        for (int i = 0; i < 50; ++i) {
            Point x = random_point(rng, g->n(), 3);
            double nx = g->quasi_norm(x);
            CHECK(g->quasi_norm(g->inverse(x)) == nx);
            for (int e = -8; e <= 8; ++e) {
                double lam = std::exp2(e);
                CHECK(std::abs(g->quasi_norm(g->dilate(lam, x)) - lam * nx) <= 1e-12 * lam * nx);
            }
        }
    }
}

TEST_CASE("norm tag compatibility") {
    CHECK_THROWS_AS(GroupDescriptor(Law::abelian, Norm::euclidean, {1, 2}), ConfigError);
    CHECK_THROWS_AS(GroupDescriptor(Law::abelian, Norm::koranyi, {1, 1, 2}), ConfigError);
    CHECK_THROWS_AS(GroupDescriptor(Law::heisenberg1, Norm::koranyi, {1, 1, 1}), ConfigError);
}

TEST_CASE("triangle inequality with constant one") {
    std::mt19937_64 rng(11);
    const GroupDescriptor aniso3 = GroupDescriptor::abelian_aniso({1, 1.5, 3});
    for (const GroupDescriptor* g : {&aniso12, &aniso3, &heis}) {
        for (int i = 0; i < 1000; ++i) {
            Point x = random_point(rng, g->n(), 2), y = random_point(rng, g->n(), 2);
            CHECK(g->quasi_norm(g->multiply(x, y)) <= g->quasi_norm(x) + g->quasi_norm(y) + 1e-12);
        }
    }
}

TEST_CASE("descriptor invariants and parsing") {
    CHECK(aniso12.Q() == 3);
    CHECK(aniso12.vol1() == 4);
    CHECK(aniso12.sigma() == 12);
    CHECK(iso2.sigma() == doctest::Approx(2 * std::numbers::pi));
    CHECK(heis.Q() == 4);
    CHECK(heis.sigma() == doctest::Approx(heis.Q() * heis.vol1()));
    auto g = GroupDescriptor::parse("abelian:aniso:nu=1,2");
    CHECK(g.spec() == "abelian:aniso:nu=1,2");
    CHECK(g.Q() == 3);
    CHECK(GroupDescriptor::parse("abelian:iso:n=3").vol1() == doctest::Approx(4 * std::numbers::pi / 3));
    CHECK(GroupDescriptor::parse("heis1").norm() == Norm::koranyi);
    CHECK(GroupDescriptor::parse("heis1:norm=max").vol1() == 8);
    CHECK_THROWS_AS(GroupDescriptor::parse("torus"), InputError);
    CHECK_THROWS_AS(GroupDescriptor::parse("abelian:aniso:nu=1,x"), InputError);
    CHECK_THROWS_AS(GroupDescriptor::parse("abelian:aniso:nu=1,2:norm=euclidean"), ConfigError);
}

TEST_CASE("sphere rules sum to the sphere measure and lie on the sphere") {
    const GroupDescriptor iso3 = GroupDescriptor::abelian_iso(3);
    for (const GroupDescriptor* g : {&aniso12, &heis, &iso2, &iso3}) {
        SphereRule rule = g->sphere_rule(6);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            s += rule.weights[i];
            CHECK(g->quasi_norm(rule.nodes[i]) == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(s == doctest::Approx(g->sigma()).epsilon(1e-12));
    }
}

TEST_CASE("koranyi sphere measure against an independent Monte-Carlo oracle") {
    // oracle: 10^7 uniform samples of the bounding box [-1,1]^2 x [-1/4,1/4]
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const long N = 10'000'000;
    long hits = 0;
    for (long i = 0; i < N; ++i) {
        double a = u(rng), b = u(rng), t = 0.25 * u(rng);
        double h = a * a + b * b;
        if (h * h + 16 * t * t < 1) ++hits;
    }
    double vol_oracle = 2.0 * static_cast<double>(hits) / N;
    CHECK(std::abs(heis.vol1() - vol_oracle) <= 0.005 * vol_oracle);

    QuadraturePlan plan;
    MeasureEstimate m = sphere_measure(heis, plan);
    CHECK_FALSE(m.exact);
    CHECK(m.std_error <= plan.tol * m.value);
    CHECK(std::abs(m.value - 4 * vol_oracle) <= 0.005 * 4 * vol_oracle);

    plan.tol = 1e-6;
    CHECK_THROWS_AS(sphere_measure(heis, plan), PrecisionError);
}

TEST_CASE("exact sphere measures") {
    QuadraturePlan plan;
    CHECK(sphere_measure(iso2, plan).value == doctest::Approx(2 * std::numbers::pi));
    CHECK(sphere_measure(aniso12, plan).value == 12);
    CHECK(sphere_measure(aniso12, plan).exact);
}

TEST_CASE("radial integration examples") {
    QuadraturePlan plan;
    auto gauss = radial_integrate(aniso12, [](double r) { return std::exp(-r * r); }, 0, INFINITY, plan);
    CHECK(gauss.value == doctest::Approx(3 * std::sqrt(std::numbers::pi)).epsilon(1e-8));
    CHECK(gauss.error <= plan.tol);
    auto ball = radial_integrate(aniso12, [](double) { return 1.0; }, 0, 1, plan);
    CHECK(ball.value == doctest::Approx(4).epsilon(1e-8));
    CHECK_THROWS_AS(radial_integrate(aniso12, [](double r) { return std::pow(r, -3.0); }, 0, 1, plan),
                    DivergenceError);
    CHECK_THROWS_AS(radial_integrate(aniso12, [](double r) { return std::pow(r, -3.0); }, 1, INFINITY, plan),
                    DivergenceError);
    auto tail = radial_integrate(aniso12, [](double r) { return std::pow(1 + r, -4.0); }, 0, INFINITY, plan);
    // 12 * B(3,1) = 12 * Gamma(3)Gamma(1)/Gamma(4) = 4
    CHECK(tail.value == doctest::Approx(4).epsilon(1e-7));
}

TEST_CASE("polar identity against direct box quadrature") {
    // midpoint rule on [-6,6] x [-36,36] for exp(-|x|^2) with the max-aniso norm
    const int N = 1200;
    const double L1 = 6, L2 = 36;
    double h1 = 2 * L1 / N, h2 = 2 * L2 / N, s = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double r = aniso12.quasi_norm(Point{-L1 + (i + 0.5) * h1, -L2 + (j + 0.5) * h2});
            s += std::exp(-r * r);
        }
    s *= h1 * h2;
    auto polar = radial_integrate(aniso12, [](double r) { return std::exp(-r * r); }, 0, INFINITY, QuadraturePlan{});
    CHECK(std::abs(polar.value - s) <= 0.005 * s);
}

TEST_CASE("Haar measure of balls scales like r^Q") {
    for (const GroupDescriptor* g : {&aniso12, &heis}) {
        for (double r : {0.5, 1.0, 2.0}) {
            std::mt19937_64 rng(5);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            // the ball B(0,r) is D_r of the unit ball; sample its bounding box directly
            std::vector<double> half(g->n());
            for (std::size_t i = 0; i < g->n(); ++i) half[i] = std::pow(r, g->weights()[i]);
            if (g->norm() == Norm::koranyi) half[2] *= 0.25;
            double box = 1;
            for (double h : half) box *= 2 * h;
            const long N = 2'000'000;
            long hits = 0;
            Point x(g->n());
            for (long k = 0; k < N; ++k) {
                for (std::size_t i = 0; i < g->n(); ++i) x[i] = half[i] * u(rng);
                if (g->quasi_norm(x) < r) ++hits;
            }
            double measured = box * static_cast<double>(hits) / N;
            CHECK(std::abs(measured - std::pow(r, g->Q()) * g->vol1()) <= 0.005 * measured);
        }
    }
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
    for (int n : {1, 2, 5, 16, 64}) {
        const GaussRule& r = gauss_legendre(n);
        double s0 = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            s0 += r.w[i];
            s2 += r.w[i] * r.x[i] * r.x[i];
        }
        CHECK(s0 == doctest::Approx(2).epsilon(1e-13));
        if (n >= 2) CHECK(s2 == doctest::Approx(2.0 / 3).epsilon(1e-13));
    }
}

TEST_CASE("shell edges contain the lattice and breakpoints") {
    std::vector<double> br{0.3};
    auto e = shell_edges(0.25, 1.0, 2, br);
    REQUIRE(e.size() == 6);
    CHECK(e.front() == 0.25);
    CHECK(e[1] == doctest::Approx(0.3));
    CHECK(e[2] == doctest::Approx(std::sqrt(0.125)));
    CHECK(e[3] == 0.5);
    CHECK(e.back() == 1.0);
}

}
