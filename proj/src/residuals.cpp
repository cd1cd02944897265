#include "equipart/residuals.hpp"

#include <cmath>
#include <stdexcept>

namespace equipart {

ZeroSumVector::ZeroSumVector(std::vector<double> e) : entries(std::move(e)) {
    double sum = 0.0, scale = 1.0;
    for (double v : entries) {
        sum += v;
        scale = std::max(scale, std::abs(v));
    }
    if (std::abs(sum) > 1e-12 * scale * static_cast<double>(std::max<std::size_t>(entries.size(), 1)))
        throw std::logic_error("residual block does not sum to zero");
}

double ZeroSumVector::inf_norm() const {
    double n = 0.0;
    for (double v : entries) n = std::max(n, std::abs(v));
    return n;
}

double ShapeFunctional::operator()(const ConvexPolygon& cell) const {
    switch (kind) {
        case Kind::Area:
            return area(cell);
        case Kind::Perimeter:
            return perimeter(cell);
        case Kind::Steiner: {
            const SteinerCoefficients s = steiner_coefficients(cell);
            if (steiner_index == 0) return s.area;
            if (steiner_index == 1) return s.perimeter;
            return s.disk;
        }
        case Kind::Custom:
            return custom(cell);
    }
    return 0.0;
}

CenterMap CenterMap::coordinate_x() {
    return {[](Point2 p) { return p.x; }, "x"};
}

CenterMap CenterMap::coordinate_y() {
    return {[](Point2 p) { return p.y; }, "y"};
}

CenterMap CenterMap::radius_squared() {
    return {[](Point2 p) { return p.x * p.x + p.y * p.y; }, "r2"};
}

std::size_t ConstraintSet::count_measures() const {
    std::size_t n = 0;
    for (const Constraint& c : items)
        if (std::holds_alternative<MeasureConstraint>(c)) ++n;
    return n;
}

std::size_t ConstraintSet::count_boundary() const {
    std::size_t n = 0;
    for (const Constraint& c : items)
        if (std::holds_alternative<BoundaryConstraint>(c)) ++n;
    return n;
}

bool ConstraintSet::has_functional_or_center() const {
    for (const Constraint& c : items)
        if (std::holds_alternative<FunctionalConstraint>(c) ||
            std::holds_alternative<CenterConstraint>(c))
            return true;
    return false;
}

const MeasureConstraint* ConstraintSet::first_measure() const {
    for (const Constraint& c : items)
        if (const auto* mc = std::get_if<MeasureConstraint>(&c)) return mc;
    return nullptr;
}

namespace {

ZeroSumVector centered(std::vector<double> values) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    for (double& v : values) v -= mean;
    return ZeroSumVector(std::move(values));
}

}  // namespace

ZeroSumVector measure_residual(const AreaMeasure& m, const CellSet& cells) {
    std::vector<double> masses(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) masses[j] = mass_in_cell(m, cells.cells[j]);
    return centered(std::move(masses));
}

ZeroSumVector functional_residual(const ShapeFunctional& phi, const CellSet& cells) {
    std::vector<double> values(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) values[j] = phi(cells.cells[j]);
    return centered(std::move(values));
}

ZeroSumVector boundary_residual(const BoundaryDensity& sigma, const CellSet& cells,
                                const ConvexPolygon& body) {
    std::vector<double> masses(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j)
        masses[j] = boundary_mass(sigma, cells.cells[j], body);
    return centered(std::move(masses));
}

ZeroSumVector center_residual(const CenterMap& cm, const CellSet& cells) {
    std::vector<double> values(cells.size(), 0.0);
    double mean = 0.0;
    std::size_t nonempty = 0;
    for (std::size_t j = 0; j < cells.size(); ++j) {
        if (cells.cells[j].empty()) continue;
        values[j] = cm.h(centroid(cells.cells[j]));
        mean += values[j];
        ++nonempty;
    }
    if (nonempty == 0) return ZeroSumVector(std::move(values));
    mean /= static_cast<double>(nonempty);
    for (std::size_t j = 0; j < cells.size(); ++j)
        if (!cells.cells[j].empty()) values[j] -= mean;
    return ZeroSumVector(std::move(values));
}

ZeroSumVector constraint_residual(const Constraint& c, const CellSet& cells,
                                  const ConvexPolygon& body) {
    if (const auto* mc = std::get_if<MeasureConstraint>(&c)) {
        ZeroSumVector block = measure_residual(mc->measure, cells);
        for (double& v : block.entries) v *= mc->scale;
        return block;
    }
    if (const auto* fc = std::get_if<FunctionalConstraint>(&c))
        return functional_residual(fc->functional, cells);
    if (const auto* bc = std::get_if<BoundaryConstraint>(&c)) {
        ZeroSumVector block = boundary_residual(bc->density, cells, body);
        for (double& v : block.entries) v *= bc->scale;
        return block;
    }
    return center_residual(std::get<CenterConstraint>(c).center, cells);
}

std::vector<ZeroSumVector> residual_blocks(const ConvexPolygon& body, const FunctionFamily& family,
                                           const ConstraintSet& constraints) {
    const CellSet cells = build_partition(body, family);
    std::vector<ZeroSumVector> blocks;
    blocks.reserve(constraints.size());
    for (const Constraint& c : constraints.items)
        blocks.push_back(constraint_residual(c, cells, body));
    return blocks;
}

std::vector<double> total_residual(const ConvexPolygon& body, const FunctionFamily& family,
                                   const ConstraintSet& constraints) {
    std::vector<double> flat;
    flat.reserve(constraints.size() * family.size());
    for (const ZeroSumVector& block : residual_blocks(body, family, constraints))
        flat.insert(flat.end(), block.entries.begin(), block.entries.end());
    return flat;
}

}  // namespace equipart
