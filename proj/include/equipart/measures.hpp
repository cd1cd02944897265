#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "equipart/geometry.hpp"

namespace equipart {

// Nonnegative density sampled on a regular grid, normalized so the total
// integrated mass is 1.  Values are row-major with row 0 at the lower-left
// origin.  Mass inside a polygon is computed exactly for the piecewise-
// constant density: pixels fully inside count whole, straddling pixels are
// clipped and prorated by area fraction.  The residuals fed to the solver
// need that continuity; sampled masses would break finite-difference
// Jacobians.
class DensityGrid {
public:
    DensityGrid(Point2 origin, double spacing, std::size_t nx, std::size_t ny,
                std::vector<double> values);

    Point2 origin() const { return origin_; }
    double spacing() const { return spacing_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double value(std::size_t ix, std::size_t iy) const { return values_[iy * nx_ + ix]; }
    const std::vector<double>& values() const { return values_; }

    // Bounding rectangle of the grid support.
    ConvexPolygon domain() const;

    // Block-summed copy with roughly `target` pixels along the longer side.
    // Mass-preserving; used to cheapen solver initialization.
    DensityGrid coarsened(std::size_t target) const;

private:
    Point2 origin_;
    double spacing_;
    std::size_t nx_, ny_;
    std::vector<double> values_;  // normalized densities
};

// Gaussian blob density on a grid over [x0,x1]x[y0,y1].
DensityGrid make_gaussian_grid(Point2 lo, Point2 hi, std::size_t n, Point2 center,
                               double sigma);

// Unit mass spread uniformly over a convex region.
struct UniformPolygonMeasure {
    ConvexPolygon region;
};

using AreaMeasure = std::variant<DensityGrid, UniformPolygonMeasure>;

double mass_in_cell(const DensityGrid& m, const ConvexPolygon& cell);
double mass_in_cell(const UniformPolygonMeasure& m, const ConvexPolygon& cell);
double mass_in_cell(const AreaMeasure& m, const ConvexPolygon& cell);

// Probability density on the boundary polyline of a body, as a function of
// the arc-length parameter s in [0, L).  Piecewise constant (one value per
// knot interval) or piecewise linear (one value per knot, interpolated).
class BoundaryDensity {
public:
    enum class Interpolation { Constant, Linear };

    BoundaryDensity(double total_length, std::vector<double> knots,
                    std::vector<double> values, Interpolation interp);

    static BoundaryDensity uniform(double total_length);

    double total_length() const { return length_; }
    Interpolation interpolation() const { return interp_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

    double density_at(double s) const;
    // Integral of the density over [0, s].
    double cumulative(double s) const;
    double mass_of_interval(double s0, double s1) const { return cumulative(s1) - cumulative(s0); }

private:
    double cumulative_raw(double s) const;

    double length_;
    std::vector<double> knots_;   // ascending, knots.front()==0, knots.back()==length
    std::vector<double> values_;  // per-interval (Constant) or per-knot (Linear)
    Interpolation interp_;
};

// Mass of the boundary density over the arcs of ∂body covered by the cell.
double boundary_mass(const BoundaryDensity& sigma, const ConvexPolygon& cell,
                     const ConvexPolygon& body);

// Restriction of a piecewise-constant boundary density to the portion of
// ∂body inside the cell, re-parameterized by the arc length of ∂cell and
// renormalized to unit mass.  The uncovered parts of ∂cell get density zero.
// Piecewise-linear densities would need jump knots and are rejected.
BoundaryDensity restrict_boundary_density(const BoundaryDensity& sigma,
                                          const ConvexPolygon& body,
                                          const ConvexPolygon& cell);

// Probability measure on [0,1] with a nonnegative piecewise-polynomial
// density.  Masses of interval unions are exact via the antiderivative.
class IntervalMeasure {
public:
    // knots ascending spanning [0,1]; coeffs[i] are ascending-degree
    // polynomial coefficients of the density on [knots[i], knots[i+1]].
    IntervalMeasure(std::vector<double> knots, std::vector<std::vector<double>> coeffs);

    static IntervalMeasure uniform();
    // density proportional to max(p(x), 0) is not representable; caller must
    // pass a nonnegative polynomial. Convenience: single piece on [0,1].
    static IntervalMeasure polynomial(std::vector<double> coeffs);

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<std::vector<double>>& coeffs() const { return coeffs_; }

    double density_at(double x) const;
    double cdf(double x) const;
    // Smallest x with cdf(x) = t (t in [0,1]).
    double quantile(double t) const;

private:
    double piece_integral(std::size_t i, double x) const;

    std::vector<double> knots_;
    std::vector<std::vector<double>> coeffs_;
    std::vector<double> cum_;  // cdf at knots
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

double interval_mass(const IntervalMeasure& m, const std::vector<Interval>& set);

// Density multiplied by the indicator of the interval union and renormalized.
IntervalMeasure restrict_interval_measure(const IntervalMeasure& m,
                                          const std::vector<Interval>& set);

}  // namespace equipart
