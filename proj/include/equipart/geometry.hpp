#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "equipart/errors.hpp"

namespace equipart {

// Tolerances shared across the geometric layer.  Double-precision clipping
// noise is around 1e-12; these carry two orders of safety margin.
inline constexpr double kGeomEps = 1e-9;        // convexity slack
inline constexpr double kSepEps = 1e-8;         // function-family separation
inline constexpr double kSliverAreaFrac = 1e-12;  // cells below this fraction of the body count as empty

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::sqrt(dot(a, a)); }

// Convex polygon with counterclockwise vertex order.  An empty vertex list is
// the designated EMPTY value; all metrics treat it as zero.
struct ConvexPolygon {
    std::vector<Point2> vertices;

    bool empty() const { return vertices.empty(); }
    std::size_t size() const { return vertices.size(); }
};

// u(x) = a.x * x + a.y * y + b
struct AffineFunction2 {
    Point2 a;
    double b = 0.0;

    double operator()(Point2 p) const { return dot(a, p) + b; }
};

// Ordered family of q pairwise-distinct affine functions.  The argmax of the
// family over a body carves the body into q convex cells.
struct FunctionFamily {
    std::vector<AffineFunction2> members;

    std::size_t size() const { return members.size(); }
};

// Ordered cells of a partition; index j belongs to family member j.
struct CellSet {
    std::vector<ConvexPolygon> cells;

    std::size_t size() const { return cells.size(); }
    bool any_empty() const;
};

// Arcs of the body boundary covered by a cell, as arc-length parameter
// intervals of the boundary polyline (start at vertex 0, counterclockwise).
struct BoundaryArcs {
    std::vector<std::pair<double, double>> intervals;
    double total_length = 0.0;
};

struct SteinerCoefficients {
    double area = 0.0;       // coefficient of t^0
    double perimeter = 0.0;  // coefficient of t^1
    double disk = 0.0;       // coefficient of t^2 (pi for any nonempty convex body)
};

// ---- constructors -------------------------------------------------------

ConvexPolygon make_rect(double x0, double y0, double x1, double y1);
ConvexPolygon make_regular_polygon(int n, double radius = 1.0,
                                   Point2 center = {0.0, 0.0}, double phase = 0.0);

// ---- metrics ------------------------------------------------------------

double area(const ConvexPolygon& poly);
double perimeter(const ConvexPolygon& poly);
Point2 centroid(const ConvexPolygon& poly);  // poly must be nonempty
SteinerCoefficients steiner_coefficients(const ConvexPolygon& poly);

bool is_convex_ccw(const ConvexPolygon& poly, double eps = kGeomEps);
bool contains_point(const ConvexPolygon& poly, Point2 p, double eps = kGeomEps);

// Axis-aligned bounds; poly must be nonempty.
void bounding_box(const ConvexPolygon& poly, Point2& lo, Point2& hi);

// ---- partition construction --------------------------------------------

// poly ∩ {x : a·x + b >= 0}.  Returns EMPTY when the intersection has no area.
ConvexPolygon halfplane_clip(const ConvexPolygon& poly, Point2 a, double b);

// Intersection of two convex polygons.
ConvexPolygon convex_intersect(const ConvexPolygon& p, const ConvexPolygon& q);

// Throws DegenerateFamily when two members are closer than eps in
// coefficient distance ||a_i - a_j|| + |b_i - b_j|.
void require_distinct(const FunctionFamily& family, double eps = kSepEps);

// Cell j = body ∩ {x : u_j(x) >= u_l(x) for all l != j}.  Cells cover the
// body up to measure zero; slivers below kSliverAreaFrac of the body's area
// are reported as EMPTY.
CellSet build_partition(const ConvexPolygon& body, const FunctionFamily& family);

// Arcs of ∂body inside the cell.  Lengths are additive across the cells of a
// partition of the body.
BoundaryArcs boundary_portion(const ConvexPolygon& body, const ConvexPolygon& cell);

// Point at arc-length s along the boundary polyline (s taken mod perimeter).
Point2 boundary_point(const ConvexPolygon& poly, double s);

// Arc-length parameter of a point lying on (or numerically near) the
// boundary polyline: the nearest point of the polyline is used.
double boundary_locate(const ConvexPolygon& poly, Point2 p);

// ---- gauge --------------------------------------------------------------

// A family is gauge-normalized when the member coefficients sum to zero
// (both gradients and offsets) and the stacked coefficient vector has unit
// norm.  The partition itself is invariant under the quotient, so this is a
// normal form rather than a requirement for build_partition.
bool is_gauge_normalized(const FunctionFamily& family, double tol = 1e-10);
FunctionFamily gauge_normalized(const FunctionFamily& family);

}  // namespace equipart
