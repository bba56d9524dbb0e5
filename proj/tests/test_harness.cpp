#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hmorrey/errors.hpp"
#include "hmorrey/harness.hpp"
#include "hmorrey/spaces.hpp"

using namespace hmorrey;

namespace {

TheoremCase base_case(const std::string& theorem) {
    for (auto c : default_suite())
        if (c.theorem == theorem) return c;
    FAIL("no default case for " << theorem);
    return {};
}

// a cheap variant: one function, a short sup grid
TheoremCase small(TheoremCase c, std::vector<std::string> functions) {
    c.functions = std::move(functions);
    c.grid = {0.25, 4.0, 1};
    c.bound = NAN;
    return c;
}

const HypothesisCheck* find(const std::vector<HypothesisCheck>& v, const std::string& id) {
    for (const auto& h : v)
        if (h.id == id) return &h;
    return nullptr;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("default suite covers every theorem once") {
    auto suite = default_suite();
    REQUIRE(suite.size() == theorem_ids().size());
    for (std::size_t i = 0; i < suite.size(); ++i) {
        CHECK(suite[i].theorem == theorem_ids()[i]);
        CHECK(std::isfinite(suite[i].bound));
        CHECK(suite[i].functions.size() >= 3);
        CHECK(suite[i].functions.size() <= 6);
    }
}

TEST_CASE("case JSON round trip and validation") {
    auto c = base_case("br-3");
    auto back = TheoremCase::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
    nlohmann::json j{{"theorem", "gfrac"}, {"params", {{"p", 2}, {"rho", "pow:c=1:beta=1"}}}, {"plan", {{"tol", 1e-2}}}};
    auto g = TheoremCase::from_json(j);
    CHECK(g.p == 2.0);
    CHECK(g.plan.tol == 1e-2);
    CHECK(std::isnan(g.q));
    CHECK(g.id == "gfrac");
    CHECK_THROWS_AS(TheoremCase::from_json({{"theorem", "br-9"}}), ConfigError);
    CHECK_THROWS_AS(TheoremCase::from_json({{"theorem", "br-1"}, {"colour", 1}}), ConfigError);
    CHECK_THROWS_AS(TheoremCase::from_json({{"theorem", "br-1"}, {"params", {{"delta", 1}}}}), ConfigError);
}

TEST_CASE("broken br-1 case fails validation without running") {
    auto c = base_case("br-1");
    c.beta = -0.5;  // beta > -alpha
    auto r = run_theorem(c);
    CHECK_FALSE(r.pass);
    CHECK(r.results.empty());
    auto h = find(r.hypotheses, "beta-below-minus-alpha");
    REQUIRE(h);
    CHECK_FALSE(h->holds);
    CHECK(r.failure.find("beta-below-minus-alpha") != std::string::npos);
    // p1 outside (Q/(Q+gamma-alpha), Q/(Q-alpha)) = (0.75, 1.5)
    c = base_case("br-1");
    c.p1 = 1.6;
    CHECK_FALSE(run_theorem(c).pass);
}

TEST_CASE("br-1 derives q and psi") {
    auto r = run_theorem(small(base_case("br-1"), {"ball:a=1"}));
    CHECK(r.pass);
    CHECK(r.derived["p1_conjugate"].get<double>() == doctest::Approx(6.0));
    CHECK(r.derived["q"].get<double>() == doctest::Approx(10.0 / 3.0));
    auto psi = RadialProfile::parse(r.derived["psi"].get<std::string>());
    CHECK(psi.beta() == doctest::Approx(-1.25 * 2.0 / (10.0 / 3.0)));
    REQUIRE(r.results.size() == 1);
    CHECK(std::isfinite(r.results[0].ratio));
    CHECK(r.results[0].ratio > 0.0);
}

TEST_CASE("gfrac hypothesis constants have closed forms") {
    auto r = run_theorem(small(base_case("gfrac"), {"ball:a=1"}));
    CHECK(r.pass);
    // rho = t, phi = r^-1.25, p = 2: q = beta p / (alpha + beta)
    CHECK(r.derived["q"].get<double>() == doctest::Approx(10.0));
    // int_r^inf phi^p/t dt = phi(r)^p / (-beta p)
    CHECK(find(r.hypotheses, "phi-tail")->constant == doctest::Approx(1.0 / 2.5).epsilon(0.01));
    // 1/alpha + 1/(-alpha-beta)
    CHECK(find(r.hypotheses, "fractional-balance")->constant == doctest::Approx(1.0 + 1.0 / 0.25).epsilon(0.01));
}

TEST_CASE("hypothesis gating") {
    // gbr with a q the balance condition rejects
    auto c = small(base_case("gbr"), {"ball:a=1"});
    c.q = 8.0;
    auto r = run_theorem(c);
    CHECK_FALSE(r.pass);
    CHECK(r.results.empty());
    CHECK_FALSE(find(r.hypotheses, "bessel-balance")->holds);
    // campanato with a profile whose tail integral diverges
    auto k = small(base_case("campanato"), {"ball:a=1"});
    k.phi = "pow:c=1:beta=0.25";
    auto rk = run_theorem(k);
    CHECK_FALSE(rk.pass);
    CHECK_FALSE(find(rk.hypotheses, "phi-tail-finite")->holds);
    // a pass requires every hypothesis
    auto ok = run_theorem(small(base_case("maximal"), {"ball:a=1"}));
    CHECK(ok.pass);
    for (const auto& h : ok.hypotheses) CHECK(h.holds);
}

TEST_CASE("regression bound decides the pass flag") {
    auto c = small(base_case("young"), {"gauss|ball:a=1"});
    auto r = run_theorem(c);
    CHECK(r.pass);
    c.bound = 0.5 * r.max_ratio;
    auto s = run_theorem(c);
    CHECK_FALSE(s.pass);
    CHECK(s.failure.find("pinned bound") != std::string::npos);
}

TEST_CASE("Olsen ratio respects the Hoelder split") {
    auto r = run_theorem(small(base_case("olsen-gfrac"), {"ball:a=1"}));
    CHECK(r.pass);
    REQUIRE(r.results.size() == 1);
    CHECK(r.results[0].holder <= 1.05);
    CHECK(r.derived["weight_norm"].get<double>() > 0.0);
}

TEST_CASE("maximal ratios are dilation invariant") {
    auto c = small(base_case("maximal"), {"ball:a=1"});
    c.grid = {0x1p-4, 0x1p4, 1};
    auto base = run_theorem(c);
    for (double l : {0.5, 2.0}) {
        auto d = c;
        d.functions = {"dilate:l=" + std::to_string(l) + ":base=ball:a=1"};
        auto r = run_theorem(d);
        REQUIRE(r.results.size() == 1);
        // ||f o D_l||_{p,phi} = l^beta ||f||_{p,phi} with phi = r^-1
        CHECK(r.results[0].rhs / base.results[0].rhs == doctest::Approx(std::pow(l, -1.0)).epsilon(0.02));
        CHECK(r.results[0].ratio / base.results[0].ratio == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("suite runner") {
    auto empty = run_suite({});
    CHECK(empty.all_pass);
    CHECK(empty.reports.empty());
    auto broken = base_case("br-1");
    broken.beta = -0.5;
    auto good = small(base_case("kernel-membership"), {"1"});
    auto dir = std::filesystem::temp_directory_path() / "hmorrey_suite_test";
    std::filesystem::remove_all(dir);
    auto s = run_suite({broken, good}, dir, false);
    REQUIRE(s.reports.size() == 2);
    CHECK_FALSE(s.all_pass);
    CHECK_FALSE(s.reports[0].pass);
    CHECK(s.reports[1].pass);
    std::ifstream csv(dir / "summary.csv");
    std::string header, line1;
    std::getline(csv, header);
    std::getline(csv, line1);
    CHECK(header == "theorem,case,max_ratio,pass");
    CHECK(line1.rfind("br-1,", 0) == 0);
    auto j = nlohmann::json::parse(std::ifstream(dir / "report.json"));
    CHECK(j.size() == 2);
    CHECK_FALSE(j[1].contains("runtime_s"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("reports are deterministic") {
    auto c = small(base_case("olsen-br"), {"gauss"});
    auto a = run_theorem(c).to_json(false).dump();
    auto b = run_theorem(c).to_json(false).dump();
    CHECK(a == b);
}

}  // TEST_SUITE
