#include <cmath>
#include <random>

#include "doctest.h"
#include "hmorrey/errors.hpp"
#include "hmorrey/functions.hpp"

using namespace hmorrey;

namespace {

const GroupDescriptor aniso12 = GroupDescriptor::abelian_aniso({1, 2});
const GroupDescriptor heis = GroupDescriptor::heisenberg1();
const GroupDescriptor iso2 = GroupDescriptor::abelian_iso(2);

}  // namespace

TEST_SUITE("functions") {

TEST_CASE("evaluation examples") {
    CHECK(TestFunction::ball(1).eval(aniso12, Point{0, 0}) == 1.0);
    CHECK(TestFunction::power(-1).eval(aniso12, Point{2, 0}) == doctest::Approx(0.5));
    Point z{0.7, -0.2, 0.4};
    CHECK(TestFunction::shifted(TestFunction::ball(1), z).eval(heis, z) == 1.0);
    CHECK(TestFunction::power(-1).eval(aniso12, Point{0, 0}) == doctest::Approx(1e9));
    CHECK(TestFunction::power(-1, PowerCut::inner).eval(aniso12, Point{0.5, 0}) == 0.0);
    CHECK(TestFunction::power(-1, PowerCut::outer).eval(aniso12, Point{2, 0}) == 0.0);
    CHECK(TestFunction::gauss().eval(aniso12, Point{0, 4}) == doctest::Approx(std::exp(-4.0)));
}

TEST_CASE("parsing round trip") {
    for (const char* s : {"ball:a=1.5", "pow:s=-1", "pow:s=-0.6:cut=inner", "gauss", "const:c=2",
                          "shift:z=1,0:base=ball:a=1", "dilate:l=2:base=gauss",
                          "combo:[2*ball:a=1][-0.5*shift:z=0.5,0.25:base=gauss]",
                          "shift:z=1,0:base=combo:[1*ball:a=1][1*const:c=3]"}) {
        auto f = TestFunction::parse(s);
        CHECK(TestFunction::parse(f.spec()).spec() == f.spec());
    }
    CHECK(TestFunction::parse("combo:[ball:a=1][gauss]").spec() == "combo:[1*ball:a=1][1*gauss]");
    CHECK_THROWS_AS(TestFunction::parse("ball:r=1"), InputError);
    CHECK_THROWS_AS(TestFunction::parse("pow"), InputError);
    CHECK_THROWS_AS(TestFunction::parse("combo:[ball:a=1"), InputError);
    CHECK_THROWS_AS(TestFunction::parse("shift:z=1:ball"), InputError);
    CHECK_THROWS_AS(TestFunction::parse("wavelet"), InputError);
}

TEST_CASE("flattened terms reproduce tree evaluation") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2, 2);
    auto f = TestFunction::parse(
        "combo:[2*dilate:l=1.7:base=shift:z=0.3,-0.4,0.2:base=ball:a=1.2][-1*shift:z=1,1,0:base=dilate:l=0.5:base=gauss]"
        "[0.5*pow:s=-1:cut=outer]");
    auto terms = f.terms(heis);
    CHECK(terms.size() == 3);
    for (int i = 0; i < 500; ++i) {
        Point x{u(rng), u(rng), u(rng)};
        CHECK(eval_terms(terms, heis, x) == doctest::Approx(f.eval(heis, x)).epsilon(1e-12));
    }
    CHECK_FALSE(f.radial());
    CHECK(TestFunction::parse("dilate:l=2:base=combo:[ball:a=1][gauss]").radial());
    CHECK_FALSE(f.nonnegative());
    CHECK(TestFunction::parse("combo:[0*ball:a=1]").zero());
}

TEST_CASE("dilation covariance is exact") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2, 2);
    auto base = TestFunction::parse("combo:[ball:a=1][shift:z=0.5,0.3:base=gauss][pow:s=-1]");
    for (double lam : {0.5, 2.0, 3.0}) {
        auto f = TestFunction::dilated(base, lam);
        for (int i = 0; i < 100; ++i) {
            Point x{u(rng), u(rng)};
            CHECK(f.eval(aniso12, x) == base.eval(aniso12, aniso12.dilate(lam, x)));
        }
    }
}

TEST_CASE("grid sampling") {
    auto one = sample_to_grid(TestFunction::constant(1), aniso12, 2, {8, 8});
    for (double v : one.values) CHECK(v == 1.0);
    auto ball = sample_to_grid(TestFunction::ball(1), aniso12, 2, {256, 256});
    double frac = 0;
    for (double v : ball.values) frac += v;
    frac /= static_cast<double>(ball.size());
    CHECK(std::abs(frac - 0.25) <= 0.02 * 0.25);
    CHECK(ball.cell_volume() == doctest::Approx(16.0 / (256 * 256)));

    // dilate-then-sample equals sample on the dilated box with the same indices
    auto f = TestFunction::parse("combo:[ball:a=1][shift:z=0.5,0.25:base=gauss]");
    auto a = sample_to_grid(TestFunction::dilated(f, 2), iso2, 1, {64, 64});
    auto b = sample_to_grid(f, iso2, 2, {64, 64});
    CHECK(a.values == b.values);

    CHECK_THROWS_AS(sample_to_grid(f, iso2, 1, {1, 4}), InputError);
    CHECK_THROWS_AS(sample_to_grid(f, iso2, -1, {4, 4}), InputError);
    CHECK_THROWS_AS(sample_to_grid(f, iso2, 1, {1 << 14, 1 << 14}), ResourceError);
}

TEST_CASE("grid refinement converges in L1") {
    auto f = TestFunction::parse("combo:[ball:a=1][0.5*shift:z=0.3,0.2:base=ball:a=0.6]");
    auto dist = [&](int N) {
        auto c = sample_to_grid(f, aniso12, 2, {N, N});
        auto fine = sample_to_grid(f, aniso12, 2, {2 * N, 2 * N});
        double d = 0;
        for (int i = 0; i < 2 * N; ++i)
            for (int j = 0; j < 2 * N; ++j)
                d += std::abs(fine.values[static_cast<std::size_t>(i * 2 * N + j)] -
                              c.values[static_cast<std::size_t>((i / 2) * N + j / 2)]);
        return d * fine.cell_volume();
    };
    double d1 = dist(17), d2 = dist(34), d3 = dist(68);
    CHECK(d2 < d1);
    CHECK(d3 < d2);
}

TEST_CASE("base masses match radial integrals") {
    RadialBase ball{RadialBase::Kind::ball, 0.7};
    CHECK(ball.mass(2.0, aniso12, true) == doctest::Approx(4 * std::pow(0.7, 3)));
    RadialBase pw{RadialBase::Kind::power, 1.0, -1.0};
    CHECK(pw.mass(1.0, aniso12, true) == doctest::Approx(12.0 / 2));
    RadialBase pin{RadialBase::Kind::power, 1.0, -1.0, PowerCut::inner};
    CHECK(pin.mass(2.0, aniso12, true) == doctest::Approx(6.0 * 3));
    RadialBase g{RadialBase::Kind::gauss};
    CHECK(g.mass(50.0, aniso12, true) == doctest::Approx(3 * std::sqrt(M_PI)).epsilon(1e-7));
    CHECK_THROWS_AS((RadialBase{RadialBase::Kind::power, 1.0, -3.0}.check_integrable(3.0)), DivergenceError);
    CHECK_THROWS_AS((RadialBase{RadialBase::Kind::power, 1.0, -1.5}.check_integrable(3.0, 2.0)), DivergenceError);
    CHECK_NOTHROW((RadialBase{RadialBase::Kind::power, 1.0, -3.0, PowerCut::inner}.check_integrable(3.0)));
}

TEST_CASE("envelopes dominate the base profile") {
    std::vector<RadialBase> bases{{RadialBase::Kind::ball, 1.3},
                                  {RadialBase::Kind::power, 1, -1.0},
                                  {RadialBase::Kind::power, 1, -1.0, PowerCut::inner},
                                  {RadialBase::Kind::power, 1, -0.5, PowerCut::outer},
                                  {RadialBase::Kind::gauss}};
    for (const auto& b : bases) {
        CHECK(b.decays());
        for (double t = 0.01; t < 10; t *= 1.1)
            for (double u = t; u < 20; u *= 1.2) CHECK(std::abs(b(u)) <= b.envelope(t) * (1 + 1e-12));
    }
    CHECK_FALSE((RadialBase{RadialBase::Kind::constant, 1, 0, PowerCut::none, 2.0}.decays()));
}

}
