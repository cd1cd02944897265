#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "equipart/geometry.hpp"
#include "equipart/rng.hpp"
#include "oracles.hpp"

using namespace equipart;

namespace {

FunctionFamily random_family(int q, RngStream& rng) {
    FunctionFamily family;
    for (int j = 0; j < q; ++j) {
        const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        family.members.push_back({{std::cos(t), std::sin(t)}, rng.uniform(-0.3, 0.3)});
    }
    return family;
}

bool polygons_match(const ConvexPolygon& a, const ConvexPolygon& b, double tol) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    const std::size_t n = a.size();
    for (std::size_t shift = 0; shift < n; ++shift) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            const Point2 d = a.vertices[i] - b.vertices[(i + shift) % n];
            if (std::abs(d.x) > tol || std::abs(d.y) > tol) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("halfplane clip leaves a contained polygon alone") {
    const ConvexPolygon square = make_rect(0, 0, 1, 1);
    const ConvexPolygon clipped = halfplane_clip(square, {1, 0}, 0.0);
    CHECK(polygons_match(clipped, square, 1e-15));
}

TEST_CASE("halfplane clip cuts a square to a rectangle") {
    const ConvexPolygon square = make_rect(0, 0, 1, 1);
    const ConvexPolygon clipped = halfplane_clip(square, {-1, 0}, 0.5);
    CHECK(area(clipped) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(polygons_match(clipped, make_rect(0, 0, 0.5, 1), 1e-12));
}

TEST_CASE("halfplane clip of a disjoint halfplane is empty") {
    const ConvexPolygon square = make_rect(0, 0, 1, 1);
    CHECK(halfplane_clip(square, {1, 0}, -2.0).empty());
}

TEST_CASE("partition with one function is the body") {
    FunctionFamily family;
    family.members.push_back({{0.3, -0.4}, 0.1});
    const ConvexPolygon square = make_rect(0, 0, 1, 1);
    const CellSet cells = build_partition(square, family);
    REQUIRE(cells.size() == 1);
    CHECK(polygons_match(cells.cells[0], square, 0.0));
}

TEST_CASE("symmetric bisection of the square") {
    FunctionFamily family;
    family.members.push_back({{1, 0}, 0.0});   // x
    family.members.push_back({{-1, 0}, 1.0});  // 1 - x
    const CellSet cells = build_partition(make_rect(0, 0, 1, 1), family);
    REQUIRE(cells.size() == 2);
    CHECK(polygons_match(cells.cells[0], make_rect(0.5, 0, 1, 1), 1e-12));
    CHECK(polygons_match(cells.cells[1], make_rect(0, 0, 0.5, 1), 1e-12));
}

TEST_CASE("three-fold symmetric directions cut congruent sectors") {
    // regular polygon with a vertex count divisible by 3, so rotation by
    // 120 degrees is an exact symmetry
    const ConvexPolygon disk = make_regular_polygon(66);
    FunctionFamily family;
    for (double deg : {90.0, 210.0, 330.0}) {
        const double t = deg * std::numbers::pi / 180.0;
        family.members.push_back({{std::cos(t), std::sin(t)}, 0.0});
    }
    const CellSet cells = build_partition(disk, family);
    const double a0 = area(cells.cells[0]);
    CHECK(area(cells.cells[1]) == doctest::Approx(a0).epsilon(1e-9));
    CHECK(area(cells.cells[2]) == doctest::Approx(a0).epsilon(1e-9));
    CHECK(3.0 * a0 == doctest::Approx(area(disk)).epsilon(1e-12));
}

TEST_CASE("area and perimeter of reference shapes") {
    CHECK(area(make_rect(0, 0, 1, 1)) == doctest::Approx(1.0));
    CHECK(perimeter(make_rect(0, 0, 1, 1)) == doctest::Approx(4.0));
    CHECK(area(make_rect(0, 0, 0.5, 1)) == doctest::Approx(0.5));
    CHECK(perimeter(make_rect(0, 0, 0.5, 1)) == doctest::Approx(3.0));

    const ConvexPolygon hexagon = make_regular_polygon(6);  // side 1
    CHECK(area(hexagon) == doctest::Approx(3.0 * std::sqrt(3.0) / 2.0).epsilon(1e-12));
    CHECK(perimeter(hexagon) == doctest::Approx(6.0).epsilon(1e-12));

    CHECK(area(ConvexPolygon{}) == 0.0);
    CHECK(perimeter(ConvexPolygon{}) == 0.0);
}

TEST_CASE("steiner coefficients of the unit square") {
    const SteinerCoefficients s = steiner_coefficients(make_rect(0, 0, 1, 1));
    CHECK(s.area == doctest::Approx(1.0));
    CHECK(s.perimeter == doctest::Approx(4.0));
    CHECK(s.disk == doctest::Approx(std::numbers::pi));

    const SteinerCoefficients zero = steiner_coefficients(ConvexPolygon{});
    CHECK(zero.area == 0.0);
    CHECK(zero.perimeter == 0.0);
    CHECK(zero.disk == 0.0);
}

TEST_CASE("steiner polynomial matches the sampled parallel body area") {
    const ConvexPolygon triangle{{{0.12, 0.07}, {0.93, 0.31}, {0.42, 0.88}}};
    const SteinerCoefficients s = steiner_coefficients(triangle);
    for (double t : {0.1, 0.2}) {
        const double predicted = s.area + s.perimeter * t + s.disk * t * t;
        const double sampled = oracle::mc_parallel_body_area(triangle, t, 10'000'000, 42);
        CHECK(predicted == doctest::Approx(sampled).epsilon(1e-3));
    }
}

TEST_CASE("boundary portion of the whole body is the whole boundary") {
    const ConvexPolygon square = make_rect(0, 0, 1, 1);
    const BoundaryArcs arcs = boundary_portion(square, square);
    CHECK(arcs.total_length == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("boundary portion of the left half square") {
    const ConvexPolygon square = make_rect(0, 0, 1, 1);
    const ConvexPolygon left = make_rect(0, 0, 0.5, 1);
    const BoundaryArcs arcs = boundary_portion(square, left);
    CHECK(arcs.total_length == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("random chords split the hexagon boundary additively") {
    const ConvexPolygon hexagon = make_regular_polygon(6);
    RngStream rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const Point2 normal{std::cos(t), std::sin(t)};
        const double offset = rng.uniform(-0.4, 0.4);
        const ConvexPolygon side = halfplane_clip(hexagon, normal, offset);
        const ConvexPolygon other = halfplane_clip(hexagon, normal * -1.0, -offset);
        const double len = boundary_portion(hexagon, side).total_length +
                           boundary_portion(hexagon, other).total_length;
        CHECK(len == doctest::Approx(perimeter(hexagon)).epsilon(1e-12));
    }
}

TEST_CASE("partition areas add up to the body") {
    RngStream rng(11);
    const ConvexPolygon body = make_rect(0, 0, 1, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        const int q = 2 + static_cast<int>(rng.below(4));
        const CellSet cells = build_partition(body, random_family(q, rng));
        double total = 0.0;
        for (const ConvexPolygon& c : cells.cells) {
            total += area(c);
            CHECK(is_convex_ccw(c));
        }
        CHECK(total == doctest::Approx(area(body)).epsilon(1e-9));
    }
}

TEST_CASE("relabeling the family relabels the cells") {
    RngStream rng(12);
    const ConvexPolygon body = make_rect(0, 0, 1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const int q = 2 + static_cast<int>(rng.below(3));
        const FunctionFamily family = random_family(q, rng);
        std::vector<int> perm(static_cast<std::size_t>(q));
        for (int j = 0; j < q; ++j) perm[static_cast<std::size_t>(j)] = j;
        for (int j = q - 1; j > 0; --j)
            std::swap(perm[static_cast<std::size_t>(j)],
                      perm[rng.below(static_cast<std::uint64_t>(j) + 1)]);

        FunctionFamily permuted;
        permuted.members.resize(static_cast<std::size_t>(q));
        for (int j = 0; j < q; ++j)
            permuted.members[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] =
                family.members[static_cast<std::size_t>(j)];

        const CellSet base = build_partition(body, family);
        const CellSet moved = build_partition(body, permuted);
        for (int j = 0; j < q; ++j)
            CHECK(polygons_match(base.cells[static_cast<std::size_t>(j)],
                                 moved.cells[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])],
                                 1e-12));
    }
}

TEST_CASE("common shifts and positive scalings leave the partition unchanged") {
    RngStream rng(13);
    const ConvexPolygon body = make_rect(0, 0, 1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const int q = 2 + static_cast<int>(rng.below(3));
        const FunctionFamily family = random_family(q, rng);
        const CellSet base = build_partition(body, family);

        FunctionFamily shifted = family;
        const AffineFunction2 common{{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                     rng.uniform(-1, 1)};
        const double scale = rng.uniform(0.2, 5.0);
        for (AffineFunction2& u : shifted.members) {
            u.a = (u.a + common.a) * scale;
            u.b = (u.b + common.b) * scale;
        }
        const CellSet moved = build_partition(body, shifted);
        for (int j = 0; j < q; ++j)
            CHECK(polygons_match(base.cells[static_cast<std::size_t>(j)],
                                 moved.cells[static_cast<std::size_t>(j)], 1e-9));
    }
}

TEST_CASE("boundary portions of a partition cover the boundary") {
    RngStream rng(14);
    const ConvexPolygon body = make_regular_polygon(7, 1.0, {0.1, -0.2});
    for (int trial = 0; trial < 200; ++trial) {
        const int q = 2 + static_cast<int>(rng.below(4));
        const CellSet cells = build_partition(body, random_family(q, rng));
        double total = 0.0;
        for (const ConvexPolygon& c : cells.cells)
            total += boundary_portion(body, c).total_length;
        CHECK(total == doctest::Approx(perimeter(body)).epsilon(1e-9));
    }
}

TEST_CASE("degenerate families are rejected") {
    FunctionFamily family;
    family.members.push_back({{1, 0}, 0.0});
    family.members.push_back({{1, 0}, 0.0});
    CHECK_THROWS_AS(build_partition(make_rect(0, 0, 1, 1), family), DegenerateFamily);
}

TEST_CASE("gauge normalization produces the normal form") {
    RngStream rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const FunctionFamily family = random_family(3, rng);
        const FunctionFamily normalized = gauge_normalized(family);
        CHECK(is_gauge_normalized(normalized));
    }
}

TEST_CASE("boundary point and locate are inverse on the polyline") {
    const ConvexPolygon hexagon = make_regular_polygon(6, 1.0, {0.3, 0.4});
    RngStream rng(16);
    const double total = perimeter(hexagon);
    for (int trial = 0; trial < 200; ++trial) {
        const double s = rng.uniform(0.0, total);
        const double back = boundary_locate(hexagon, boundary_point(hexagon, s));
        CHECK(std::abs(back - s) < 1e-9);
    }
}

}  // TEST_SUITE
