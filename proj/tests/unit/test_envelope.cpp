#include <doctest.h>

#include <cmath>

#include "equipart/envelope.hpp"
#include "equipart/rng.hpp"
#include "oracles.hpp"

using namespace equipart;

namespace {

std::vector<Polynomial1D> random_polys(int q, int degree, RngStream& rng) {
    std::vector<Polynomial1D> polys(static_cast<std::size_t>(q));
    for (auto& p : polys) {
        p.coefficients.resize(static_cast<std::size_t>(degree) + 1);
        for (double& c : p.coefficients) c = rng.normal();
    }
    return polys;
}

}  // namespace

TEST_SUITE("envelope") {

TEST_CASE("roots of x^2 - 1") {
    const RootScan scan = real_roots({{-1.0, 0.0, 1.0}}, -2.0, 2.0);
    REQUIRE(scan.roots.size() == 2);
    CHECK(scan.roots[0].x == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(scan.roots[1].x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scan.roots[0].odd_crossing);
    CHECK(scan.roots[1].odd_crossing);
}

TEST_CASE("x^2 + 1 has no real roots") {
    CHECK(real_roots({{1.0, 0.0, 1.0}}, -10.0, 10.0).roots.empty());
}

TEST_CASE("tangential roots are reported once without a crossing") {
    const RootScan scan = real_roots({{0.25, -1.0, 1.0}}, -2.0, 2.0);  // (x - 1/2)^2
    REQUIRE(scan.roots.size() == 1);
    CHECK(scan.roots[0].x == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_FALSE(scan.roots[0].odd_crossing);
    // a collapsed pair sits below the separation resolution
    CHECK(scan.ill_conditioned);
}

TEST_CASE("well-separated roots are not flagged") {
    CHECK_FALSE(real_roots({{-1.0, 0.0, 1.0}}, -2.0, 2.0).ill_conditioned);
}

TEST_CASE("constructed sixfold roots are recovered") {
    // product of (x - k/7) for k = 1..6
    Polynomial1D p{{1.0}};
    for (int k = 1; k <= 6; ++k) {
        const double r = static_cast<double>(k) / 7.0;
        Polynomial1D next;
        next.coefficients.assign(p.coefficients.size() + 1, 0.0);
        for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
            next.coefficients[i + 1] += p.coefficients[i];
            next.coefficients[i] -= r * p.coefficients[i];
        }
        p = next;
    }
    const RootScan scan = real_roots(p, 0.0, 1.0);
    REQUIRE(scan.roots.size() == 6);
    for (int k = 1; k <= 6; ++k)
        CHECK(std::abs(scan.roots[static_cast<std::size_t>(k - 1)].x -
                       static_cast<double>(k) / 7.0) < 1e-10);
}

TEST_CASE("identical zero polynomial is rejected") {
    CHECK_THROWS_AS(real_roots({{0.0, 0.0}}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("two crossing lines have one breakpoint") {
    const std::vector<Polynomial1D> lines{{{0.0, 1.0}}, {{0.0, -1.0}}};  // x and -x
    const EnvelopeProfile profile = upper_envelope(lines, -1.0, 1.0);
    REQUIRE(profile.breakpoints.size() == 1);
    CHECK(profile.breakpoints[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(profile.active == std::vector<int>{1, 0});  // -x wins left of 0
    CHECK(switch_count(profile) == 1);
}

TEST_CASE("parallel lines never switch") {
    const std::vector<Polynomial1D> lines{{{0.0, 2.0}}, {{1.5, 2.0}}, {{-0.5, 2.0}}};
    const EnvelopeProfile profile = upper_envelope(lines, -3.0, 3.0);
    CHECK(profile.breakpoints.empty());
    CHECK(profile.active == std::vector<int>{1});  // highest intercept
}

TEST_CASE("identical members are rejected") {
    const std::vector<Polynomial1D> polys{{{1.0, 2.0}}, {{1.0, 2.0}}};
    CHECK_THROWS_AS(upper_envelope(polys, 0.0, 1.0), DegenerateFamily);
}

TEST_CASE("random cubic families agree with the dense argmax oracle") {
    RngStream rng(51);
    for (int trial = 0; trial < 40; ++trial) {
        const std::vector<Polynomial1D> polys = random_polys(4, 3, rng);
        const EnvelopeProfile profile = upper_envelope(polys, -2.0, 2.0);
        CHECK(oracle::envelope_argmax_mismatches(polys, profile, 10'000, 1e-6, 1e-10) == 0);
    }
}

TEST_CASE("envelope dominance at random sample points") {
    RngStream rng(52);
    const std::vector<Polynomial1D> polys = random_polys(5, 3, rng);
    const EnvelopeProfile profile = upper_envelope(polys, -1.5, 1.5);
    for (int s = 0; s < 1000; ++s) {
        const double x = rng.uniform(-1.5, 1.5);
        bool near_break = false;
        for (double b : profile.breakpoints)
            if (std::abs(x - b) < 1e-9) near_break = true;
        if (near_break) continue;
        std::size_t seg = 0;
        while (seg < profile.breakpoints.size() && x > profile.breakpoints[seg]) ++seg;
        double best = polys[0](x);
        for (std::size_t j = 1; j < polys.size(); ++j) best = std::max(best, polys[j](x));
        CHECK(polys[static_cast<std::size_t>(profile.active[seg])](x) ==
              doctest::Approx(best).epsilon(1e-10));
    }
}

TEST_CASE("breakpoints are genuine switches") {
    RngStream rng(53);
    for (int trial = 0; trial < 25; ++trial) {
        const std::vector<Polynomial1D> polys = random_polys(4, 2, rng);
        const EnvelopeProfile profile = upper_envelope(polys, -2.0, 2.0);
        for (std::size_t i = 0; i < profile.breakpoints.size(); ++i) {
            const double x = profile.breakpoints[i];
            const auto& left = polys[static_cast<std::size_t>(profile.active[i])];
            const auto& right = polys[static_cast<std::size_t>(profile.active[i + 1])];
            CHECK(std::abs(left(x) - right(x)) < 1e-8);
            CHECK(left(x - 1e-4) > right(x - 1e-4));
            CHECK(right(x + 1e-4) > left(x + 1e-4));
        }
    }
}

TEST_CASE("line families switch at most q - 1 times") {
    RngStream rng(54);
    for (int trial = 0; trial < 1000; ++trial) {
        const int q = 2 + static_cast<int>(rng.below(5));
        const std::vector<Polynomial1D> lines = random_polys(q, 1, rng);
        const EnvelopeProfile profile = upper_envelope(lines, -10.0, 10.0);
        CHECK(switch_count(profile) <= q - 1);
    }
}

TEST_CASE("quadratic families switch at most 2(q - 1) times") {
    RngStream rng(55);
    for (int trial = 0; trial < 1000; ++trial) {
        const int q = 2 + static_cast<int>(rng.below(5));
        const std::vector<Polynomial1D> polys = random_polys(q, 2, rng);
        const EnvelopeProfile profile = upper_envelope(polys, -10.0, 10.0);
        CHECK(switch_count(profile) <= 2 * (q - 1));
    }
}

TEST_CASE("ds_check rejects abab at order 2 and accepts abc") {
    CHECK_FALSE(ds_check({{0, 1, 0, 1}}, 2));
    CHECK(ds_check({{0, 1, 2}}, 1));
    CHECK(ds_check({{0, 1, 2}}, 2));
    CHECK(ds_check({{0, 1, 0}}, 2));
    CHECK_FALSE(ds_check({{0, 1, 0}}, 1));
}

TEST_CASE("envelope words satisfy the order-n condition") {
    RngStream rng(56);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(3));
        const int q = 2 + static_cast<int>(rng.below(4));
        const std::vector<Polynomial1D> polys = random_polys(q, n, rng);
        const EnvelopeProfile profile = upper_envelope(polys, -8.0, 8.0);
        CHECK(ds_check(ds_word(profile), n));
    }
}

TEST_CASE("switch search stays within the provable caps for lines and quadratics") {
    const EnvelopeSearchResult lines = search_superlinear(1, 5, 300, 0);
    CHECK(lines.bound == 4);
    CHECK(lines.best_switches <= 4);
    CHECK_FALSE(lines.exceeded);

    const EnvelopeSearchResult quads = search_superlinear(2, 4, 300, 0);
    CHECK(quads.bound == 6);
    CHECK(quads.best_switches <= 6);
    CHECK_FALSE(quads.exceeded);
}

TEST_CASE("switch search reports its best cubic family honestly") {
    const EnvelopeSearchResult result = search_superlinear(3, 4, 500, 1);
    CHECK(result.bound == 9);
    CHECK(result.best_switches >= 1);
    // re-verify the reported count on the reported interval
    const EnvelopeProfile profile =
        upper_envelope(result.best_family, result.interval_lo, result.interval_hi);
    CHECK(switch_count(profile) == result.best_switches);
    CHECK(oracle::envelope_argmax_mismatches(result.best_family, profile, 20'000, 1e-6,
                                             1e-9) == 0);
    CHECK(result.exceeded == (result.best_switches > 9));
}

}  // TEST_SUITE
