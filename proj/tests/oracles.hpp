#pragma once

// Independent reference computations for the test suites.  Everything here
// deliberately avoids the library's evaluation paths: masses come from
// sampling or dense quadrature, envelopes from dense argmax scans, cuts from
// grid searches.

#include <cstdint>
#include <vector>

#include "equipart/envelope.hpp"
#include "equipart/measures.hpp"

namespace equipart::oracle {

// Monte Carlo mass of a cell under the discrete grid distribution: pixels
// drawn by their mass, positions uniform within the pixel.
double mc_grid_mass(const DensityGrid& grid, const ConvexPolygon& cell, std::size_t samples,
                    std::uint64_t seed);

// Monte Carlo area of the outer parallel body K + tB via rejection sampling.
double mc_parallel_body_area(const ConvexPolygon& poly, double t, std::size_t samples,
                             std::uint64_t seed);

// Boundary mass by dense midpoint quadrature along the boundary polyline.
double quadrature_boundary_mass(const BoundaryDensity& sigma, const ConvexPolygon& cell,
                                const ConvexPolygon& body, std::size_t points);

// Composite-Simpson mass of an interval union.
double simpson_interval_mass(const IntervalMeasure& m, const std::vector<Interval>& set,
                             std::size_t panels);

// Dense-argmax check of an envelope profile: returns the number of sample
// points (excluding those within `guard` of a breakpoint) where the profile's
// active member fails to attain the maximum within `tol`.
int envelope_argmax_mismatches(const std::vector<Polynomial1D>& polys,
                               const EnvelopeProfile& profile, std::size_t samples, double guard,
                               double tol);

// Exhaustive (angle x offset) search for a line bisecting two grid measures.
// Halfplane masses are exact for the pixel-uniform distribution: each pixel
// contributes its mass CDF along the projection direction.
struct LineSearchResult {
    double angle = 0.0;   // direction of the normal, in [0, pi)
    double offset = 0.0;  // halfplane {n.x >= offset}
    Point2 center{};      // projection center used by the search
    double centered_offset = 0.0;  // offset in the frame centered at `center`
    double angle_step = 0.0;
    double offset_step = 0.0;
    double max_deviation = 0.0;  // max |mass - 1/2| over both measures at the best grid point
};

LineSearchResult grid_search_bisector(const DensityGrid& m1, const DensityGrid& m2,
                                      std::size_t resolution);

// Exhaustive two-cut search for splitting two interval measures in half,
// over patterns ABA and AB.
struct TwoCutResult {
    double cut1 = 0.0, cut2 = 0.0;  // cut2 unused for pattern AB
    bool middle_pattern = false;    // true: A owns [0,c1) and [c2,1)
    double max_deviation = 0.0;
};

TwoCutResult grid_search_two_cuts(const IntervalMeasure& m1, const IntervalMeasure& m2,
                                  std::size_t resolution);

// Shape count of graded trees by brute-force generation (small inputs only):
// ordered trees of the given height with all leaves on the bottom level,
// counted by total vertex count.
long long count_tree_shapes(int d, int q, int vertices);

}  // namespace equipart::oracle
