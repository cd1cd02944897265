#include <doctest.h>

#include <nlohmann/json.hpp>

#include "equipart/json_io.hpp"
#include "equipart/rng.hpp"

using namespace equipart;
using nlohmann::json;

TEST_SUITE("json_io") {

TEST_CASE("polygons round-trip bit for bit") {
    RngStream rng(81);
    for (int trial = 0; trial < 100; ++trial) {
        const ConvexPolygon poly = make_regular_polygon(
            3 + static_cast<int>(rng.below(9)), rng.uniform(0.5, 2.0),
            {rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0.0, 1.0));
        const json j = json::parse(dump_json(to_json(poly)));
        const ConvexPolygon back = polygon_from_json(j);
        REQUIRE(back.size() == poly.size());
        for (std::size_t i = 0; i < poly.size(); ++i) {
            CHECK(back.vertices[i].x == poly.vertices[i].x);
            CHECK(back.vertices[i].y == poly.vertices[i].y);
        }
    }
}

TEST_CASE("families round-trip bit for bit") {
    RngStream rng(82);
    for (int trial = 0; trial < 100; ++trial) {
        FunctionFamily family;
        for (int j = 0; j < 4; ++j)
            family.members.push_back(
                {{rng.normal(), rng.normal()}, rng.normal()});
        const FunctionFamily back =
            family_from_json(json::parse(dump_json(to_json(family))));
        REQUIRE(back.size() == family.size());
        for (std::size_t j = 0; j < family.size(); ++j) {
            CHECK(back.members[j].a.x == family.members[j].a.x);
            CHECK(back.members[j].a.y == family.members[j].a.y);
            CHECK(back.members[j].b == family.members[j].b);
        }
    }
}

TEST_CASE("two-vertex polygons are rejected with the vertices pointer") {
    const json j{{"vertices", {{0.0, 0.0}, {1.0, 0.0}}}};
    try {
        polygon_from_json(j);
        FAIL("expected SchemaError");
    } catch (const SchemaError& err) {
        CHECK(err.pointer == "/vertices");
    }
}

TEST_CASE("non-convex polygons are rejected") {
    const json j{{"vertices", {{0.0, 0.0}, {2.0, 0.0}, {0.1, 0.1}, {0.0, 2.0}}}};
    CHECK_THROWS_AS(polygon_from_json(j), SchemaError);
}

TEST_CASE("clockwise input polygons are reoriented") {
    const json j{{"vertices", {{0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, 0.0}}}};
    const ConvexPolygon poly = polygon_from_json(j);
    CHECK(area(poly) == doctest::Approx(1.0));
    CHECK(is_convex_ccw(poly));
}

TEST_CASE("wrong schema version is rejected") {
    const json j{{"schema_version", 99},
                 {"vertices", {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}}};
    try {
        polygon_from_json(j);
        FAIL("expected SchemaError");
    } catch (const SchemaError& err) {
        CHECK(err.pointer == "/schema_version");
    }
}

TEST_CASE("grid measures parse row-major from the lower left") {
    const json j{{"type", "grid"},
                 {"origin", {0.0, 0.0}},
                 {"spacing", 0.5},
                 {"values", {{1.0, 0.0}, {0.0, 0.0}}}};
    const AnyMeasure m = measure_from_json(j, std::nullopt);
    const auto* grid = std::get_if<DensityGrid>(&m);
    REQUIRE(grid != nullptr);
    // all mass in the lower-left pixel
    CHECK(mass_in_cell(*grid, make_rect(0, 0, 0.5, 0.5)) == doctest::Approx(1.0));
    CHECK(mass_in_cell(*grid, make_rect(0.5, 0.5, 1.0, 1.0)) == doctest::Approx(0.0));
}

TEST_CASE("point clouds are smoothed onto a grid") {
    json pts = json::array();
    RngStream rng(83);
    for (int i = 0; i < 200; ++i) pts.push_back({rng.normal() * 0.1 + 0.5, rng.normal() * 0.1 + 0.5});
    const json j{{"type", "points"}, {"points", pts}, {"resolution", 64}};
    const AnyMeasure m = measure_from_json(j, std::nullopt);
    const auto* grid = std::get_if<DensityGrid>(&m);
    REQUIRE(grid != nullptr);
    const double half = mass_in_cell(*grid, make_rect(-1, -1, 0.5, 2));
    CHECK(half > 0.3);
    CHECK(half < 0.7);
}

TEST_CASE("boundary measures need a body and matching knots") {
    const json j{{"type", "boundary"}, {"knots", {0.0, 4.0}}, {"values", {1.0}}};
    CHECK_THROWS_AS(measure_from_json(j, std::nullopt), SchemaError);
    const ConvexPolygon square = make_rect(0, 0, 1, 1);
    const AnyMeasure m = measure_from_json(j, square);
    CHECK(std::holds_alternative<BoundaryDensity>(m));

    const json bad{{"type", "boundary"}, {"knots", {0.0, 3.0}}, {"values", {1.0}}};
    CHECK_THROWS_AS(measure_from_json(bad, square), SchemaError);
}

TEST_CASE("interval measures parse pieces") {
    const json j{{"type", "interval"},
                 {"knots", {0.0, 0.5, 1.0}},
                 {"coeffs", {{1.0}, {3.0}}}};
    const AnyMeasure m = measure_from_json(j, std::nullopt);
    const auto* iv = std::get_if<IntervalMeasure>(&m);
    REQUIRE(iv != nullptr);
    CHECK(iv->cdf(0.5) == doctest::Approx(0.25));
}

TEST_CASE("unknown measure types carry a type pointer") {
    const json j{{"type", "atomic"}};
    try {
        measure_from_json(j, std::nullopt);
        FAIL("expected SchemaError");
    } catch (const SchemaError& err) {
        CHECK(err.pointer == "/type");
    }
}

TEST_CASE("constraints reference measures by index") {
    std::vector<AnyMeasure> measures;
    measures.emplace_back(UniformPolygonMeasure{make_rect(0, 0, 1, 1)});
    measures.emplace_back(BoundaryDensity::uniform(4.0));
    const json j{{"constraints",
                  {{{"type", "measure"}, {"measure", 0}},
                   {{"type", "functional"}, {"kind", "perimeter"}},
                   {{"type", "boundary"}, {"measure", 1}},
                   {{"type", "center"}, {"h", "x"}}}}};
    const ConstraintSet set = constraints_from_json(j, measures);
    REQUIRE(set.size() == 4);
    CHECK(set.count_measures() == 1);
    CHECK(set.count_boundary() == 1);
    CHECK(set.has_functional_or_center());

    const json bad{{"constraints", {{{"type", "measure"}, {"measure", 5}}}}};
    try {
        constraints_from_json(bad, measures);
        FAIL("expected SchemaError");
    } catch (const SchemaError& err) {
        CHECK(err.pointer == "/constraints/0/measure");
    }
}

TEST_CASE("polynomial families parse with their interval") {
    const json j{{"polys", {{0.0, 1.0}, {1.0, -1.0}}}, {"interval", {-1.0, 1.0}}};
    const Poly1dFamily family = poly_family_from_json(j);
    REQUIRE(family.polys.size() == 2);
    CHECK(family.lo == -1.0);
    CHECK(family.hi == 1.0);
    CHECK(family.polys[0](0.5) == doctest::Approx(0.5));
}

TEST_CASE("emitted documents validate against their schemas") {
    FunctionFamily family;
    family.members.push_back({{1, 0}, 0.0});
    family.members.push_back({{-1, 0}, 1.0});
    const ConvexPolygon square = make_rect(0, 0, 1, 1);
    const CellSet cells = build_partition(square, family);
    validate_output(partition_to_json(family, cells), "partition");

    SolveReport report;
    report.blocks.emplace_back(std::vector<double>{0.0, 0.0});
    validate_output(to_json(report, nullptr), "report");

    NecklaceSplit split;
    split.cuts = {0.5};
    split.owners = {0, 1};
    validate_output(to_json(split), "split");

    EnvelopeProfile profile;
    profile.lo = 0.0;
    profile.hi = 1.0;
    profile.breakpoints = {0.5};
    profile.active = {0, 1};
    validate_output(to_json(profile), "profile");
}

TEST_CASE("serialization is deterministic") {
    const ConvexPolygon poly = make_regular_polygon(7, 1.37, {0.123456789, -0.987654321});
    CHECK(dump_json(to_json(poly)) == dump_json(to_json(poly)));
}

}  // TEST_SUITE
