#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "equipart/geometry.hpp"
#include "equipart/measures.hpp"

namespace equipart {

// Length-q real vector with zero coordinate sum.  Every residual block lives
// here; relabeling the family permutes the entries.
struct ZeroSumVector {
    std::vector<double> entries;

    explicit ZeroSumVector(std::vector<double> e);
    double inf_norm() const;
};

// Continuous functional of a convex cell.  EMPTY cells evaluate with the
// zero conventions (area = perimeter = 0, steiner = (0,0,0)).
struct ShapeFunctional {
    enum class Kind { Area, Perimeter, Steiner, Custom };

    Kind kind = Kind::Perimeter;
    int steiner_index = 0;  // 0: area term, 1: perimeter term, 2: t^2 term
    std::function<double(const ConvexPolygon&)> custom;

    static ShapeFunctional area_functional() { return {Kind::Area, 0, nullptr}; }
    static ShapeFunctional perimeter_functional() { return {Kind::Perimeter, 0, nullptr}; }
    static ShapeFunctional steiner(int index) { return {Kind::Steiner, index, nullptr}; }
    static ShapeFunctional custom_functional(std::function<double(const ConvexPolygon&)> f) {
        return {Kind::Custom, 0, std::move(f)};
    }

    double operator()(const ConvexPolygon& cell) const;
};

// Centroid-based center assignment composed with a scalar observable h.
// The centroid commutes with relabeling, which keeps the residual
// equivariant by construction.
struct CenterMap {
    std::function<double(Point2)> h;
    std::string name;  // for reports

    static CenterMap coordinate_x();
    static CenterMap coordinate_y();
    static CenterMap radius_squared();
};

struct MeasureConstraint {
    AreaMeasure measure;
    // Residual blocks are multiplied by this factor; the iterated solver uses
    // it to renormalize a measure restricted to a sub-body.
    double scale = 1.0;
};

struct FunctionalConstraint {
    ShapeFunctional functional;
};

struct BoundaryConstraint {
    BoundaryDensity density;
    double scale = 1.0;
};

struct CenterConstraint {
    CenterMap center;
};

using Constraint =
    std::variant<MeasureConstraint, FunctionalConstraint, BoundaryConstraint, CenterConstraint>;

// Ordered list of constraints; the order defines the residual block order.
struct ConstraintSet {
    std::vector<Constraint> items;

    std::size_t size() const { return items.size(); }
    std::size_t count_measures() const;
    std::size_t count_boundary() const;
    bool has_functional_or_center() const;
    const MeasureConstraint* first_measure() const;
};

// ---- residual blocks ------------------------------------------------------

// Entry j is the cell mass minus the mean cell mass.  The mean equals the
// total mass over q, so the block vanishes exactly on equipartitions.
ZeroSumVector measure_residual(const AreaMeasure& m, const CellSet& cells);

// Entry j is phi(V_j) minus the mean of phi over the cells.
ZeroSumVector functional_residual(const ShapeFunctional& phi, const CellSet& cells);

ZeroSumVector boundary_residual(const BoundaryDensity& sigma, const CellSet& cells,
                                const ConvexPolygon& body);

// Entry j is h(centroid(V_j)) minus the mean over nonempty cells; entries of
// EMPTY cells are zero and the condition is reported through
// CellSet::any_empty so the solver can steer away.
ZeroSumVector center_residual(const CenterMap& cm, const CellSet& cells);

ZeroSumVector constraint_residual(const Constraint& c, const CellSet& cells,
                                  const ConvexPolygon& body);

std::vector<ZeroSumVector> residual_blocks(const ConvexPolygon& body, const FunctionFamily& family,
                                           const ConstraintSet& constraints);

// Stacked blocks in declared constraint order, flattened to length
// constraints.size() * q.
std::vector<double> total_residual(const ConvexPolygon& body, const FunctionFamily& family,
                                   const ConstraintSet& constraints);

}  // namespace equipart
