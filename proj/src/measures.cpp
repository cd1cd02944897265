#include "equipart/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace equipart {

// ---- DensityGrid ---------------------------------------------------------

DensityGrid::DensityGrid(Point2 origin, double spacing, std::size_t nx, std::size_t ny,
                         std::vector<double> values)
    : origin_(origin), spacing_(spacing), nx_(nx), ny_(ny), values_(std::move(values)) {
    if (spacing_ <= 0.0) throw std::invalid_argument("grid spacing must be positive");
    if (values_.size() != nx_ * ny_) throw std::invalid_argument("grid value count mismatch");
    double total = 0.0;
    for (double v : values_) {
        if (v < 0.0) throw std::invalid_argument("grid densities must be nonnegative");
        total += v;
    }
    total *= spacing_ * spacing_;
    if (total <= 0.0) throw std::invalid_argument("grid has zero total mass");
    for (double& v : values_) v /= total;
}

ConvexPolygon DensityGrid::domain() const {
    return make_rect(origin_.x, origin_.y, origin_.x + spacing_ * static_cast<double>(nx_),
                     origin_.y + spacing_ * static_cast<double>(ny_));
}

DensityGrid DensityGrid::coarsened(std::size_t target) const {
    const std::size_t longest = std::max(nx_, ny_);
    if (target == 0 || longest <= target) return *this;
    const std::size_t f = (longest + target - 1) / target;
    const std::size_t cx = (nx_ + f - 1) / f;
    const std::size_t cy = (ny_ + f - 1) / f;
    std::vector<double> coarse(cx * cy, 0.0);
    for (std::size_t iy = 0; iy < ny_; ++iy)
        for (std::size_t ix = 0; ix < nx_; ++ix)
            coarse[(iy / f) * cx + ix / f] += values_[iy * nx_ + ix];
    // block sums over f*f cells keep the mass; spacing grows by f
    return DensityGrid(origin_, spacing_ * static_cast<double>(f), cx, cy, std::move(coarse));
}

DensityGrid make_gaussian_grid(Point2 lo, Point2 hi, std::size_t n, Point2 center,
                               double sigma) {
    const double spacing = (hi.x - lo.x) / static_cast<double>(n);
    const std::size_t ny = static_cast<std::size_t>(std::round((hi.y - lo.y) / spacing));
    std::vector<double> values(n * ny);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const double y = lo.y + (static_cast<double>(iy) + 0.5) * spacing;
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double x = lo.x + (static_cast<double>(ix) + 0.5) * spacing;
            const double dx = x - center.x, dy = y - center.y;
            values[iy * n + ix] = std::exp(-(dx * dx + dy * dy) * inv);
        }
    }
    return DensityGrid(lo, spacing, n, ny, std::move(values));
}

namespace {

// Clipped area of the pixel [x0,x0+h]x[y0,y0+h] against the halfplanes.
double pixel_clip_area(double x0, double y0, double h, const std::vector<Point2>& normals,
                       const std::vector<double>& offsets) {
    ConvexPolygon pixel = make_rect(x0, y0, x0 + h, y0 + h);
    for (std::size_t e = 0; e < normals.size() && !pixel.empty(); ++e)
        pixel = halfplane_clip(pixel, normals[e], offsets[e]);
    return area(pixel);
}

}  // namespace

double mass_in_cell(const DensityGrid& m, const ConvexPolygon& cell) {
    if (cell.empty()) return 0.0;

    const std::size_t ne = cell.size();
    std::vector<Point2> normals(ne);
    std::vector<double> offsets(ne);
    // pixel-corner extremes of each edge function, precomputed per edge
    std::vector<double> min_off(ne), max_off(ne);
    const double h = m.spacing();
    for (std::size_t e = 0; e < ne; ++e) {
        const Point2 a = cell.vertices[e];
        const Point2 b = cell.vertices[(e + 1) % ne];
        normals[e] = {a.y - b.y, b.x - a.x};
        offsets[e] = -dot(normals[e], a);
        min_off[e] = std::min(0.0, normals[e].x * h) + std::min(0.0, normals[e].y * h);
        max_off[e] = std::max(0.0, normals[e].x * h) + std::max(0.0, normals[e].y * h);
    }

    Point2 lo, hi;
    bounding_box(cell, lo, hi);
    const Point2 og = m.origin();
    const auto clampi = [](long v, long n) { return std::max(0L, std::min(v, n - 1)); };
    const long nx = static_cast<long>(m.nx()), ny = static_cast<long>(m.ny());
    const long ix0 = clampi(static_cast<long>(std::floor((lo.x - og.x) / h)), nx);
    const long ix1 = clampi(static_cast<long>(std::floor((hi.x - og.x) / h)), nx);
    const long iy0 = clampi(static_cast<long>(std::floor((lo.y - og.y) / h)), ny);
    const long iy1 = clampi(static_cast<long>(std::floor((hi.y - og.y) / h)), ny);

    const double cell_area = h * h;
    double mass = 0.0;
    std::vector<double> row_vals(ne);
    for (long iy = iy0; iy <= iy1; ++iy) {
        const double y0 = og.y + static_cast<double>(iy) * h;
        const double x_start = og.x + static_cast<double>(ix0) * h;
        for (std::size_t e = 0; e < ne; ++e)
            row_vals[e] = dot(normals[e], {x_start, y0}) + offsets[e];
        for (long ix = ix0; ix <= ix1; ++ix) {
            bool full = true, out = false;
            for (std::size_t e = 0; e < ne; ++e) {
                const double v = row_vals[e];
                if (v + min_off[e] < 0.0) full = false;
                if (v + max_off[e] < 0.0) {
                    out = true;
                    break;
                }
            }
            const double density = m.value(static_cast<std::size_t>(ix),
                                           static_cast<std::size_t>(iy));
            if (!out && density > 0.0) {
                if (full) {
                    mass += density * cell_area;
                } else {
                    const double x0 = og.x + static_cast<double>(ix) * h;
                    mass += density * pixel_clip_area(x0, y0, h, normals, offsets);
                }
            }
            for (std::size_t e = 0; e < ne; ++e) row_vals[e] += normals[e].x * h;
        }
    }
    return mass;
}

double mass_in_cell(const UniformPolygonMeasure& m, const ConvexPolygon& cell) {
    if (cell.empty()) return 0.0;
    const double region_area = area(m.region);
    return area(convex_intersect(m.region, cell)) / region_area;
}

double mass_in_cell(const AreaMeasure& m, const ConvexPolygon& cell) {
    return std::visit([&](const auto& inner) { return mass_in_cell(inner, cell); }, m);
}

// ---- BoundaryDensity -----------------------------------------------------

BoundaryDensity::BoundaryDensity(double total_length, std::vector<double> knots,
                                 std::vector<double> values, Interpolation interp)
    : length_(total_length), knots_(std::move(knots)), values_(std::move(values)),
      interp_(interp) {
    if (length_ <= 0.0) throw std::invalid_argument("boundary length must be positive");
    if (knots_.size() < 2 || knots_.front() != 0.0)
        throw std::invalid_argument("boundary knots must start at 0");
    if (std::abs(knots_.back() - length_) > 1e-9 * length_)
        throw std::invalid_argument("boundary knots must end at the total length");
    knots_.back() = length_;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (knots_[i] <= knots_[i - 1]) throw std::invalid_argument("boundary knots must ascend");
    const std::size_t expected =
        interp_ == Interpolation::Constant ? knots_.size() - 1 : knots_.size();
    if (values_.size() != expected) throw std::invalid_argument("boundary value count mismatch");
    for (double v : values_)
        if (v < 0.0) throw std::invalid_argument("boundary density must be nonnegative");

    const double total = cumulative_raw(length_);
    if (total <= 0.0) throw std::invalid_argument("boundary density has zero mass");
    for (double& v : values_) v /= total;
}

BoundaryDensity BoundaryDensity::uniform(double total_length) {
    return BoundaryDensity(total_length, {0.0, total_length}, {1.0},
                           Interpolation::Constant);
}

double BoundaryDensity::density_at(double s) const {
    s = std::clamp(s, 0.0, length_);
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
    std::size_t i = static_cast<std::size_t>(std::max<long>(0, (it - knots_.begin()) - 1));
    i = std::min(i, knots_.size() - 2);
    if (interp_ == Interpolation::Constant) return values_[i];
    const double t = (s - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return values_[i] + t * (values_[i + 1] - values_[i]);
}

double BoundaryDensity::cumulative(double s) const { return cumulative_raw(s); }

double BoundaryDensity::cumulative_raw(double s) const {
    s = std::clamp(s, 0.0, length_);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        const double a = knots_[i], b = knots_[i + 1];
        if (s <= a) break;
        const double hi = std::min(s, b);
        if (interp_ == Interpolation::Constant) {
            acc += values_[i] * (hi - a);
        } else {
            const double w = b - a;
            const double t = (hi - a) / w;
            const double va = values_[i], vb = values_[i + 1];
            // integral of the linear interpolant from a to hi
            acc += w * (va * t + 0.5 * (vb - va) * t * t);
        }
    }
    return acc;
}

double boundary_mass(const BoundaryDensity& sigma, const ConvexPolygon& cell,
                     const ConvexPolygon& body) {
    const BoundaryArcs arcs = boundary_portion(body, cell);
    double mass = 0.0;
    for (const auto& [s0, s1] : arcs.intervals) mass += sigma.mass_of_interval(s0, s1);
    return mass;
}

BoundaryDensity restrict_boundary_density(const BoundaryDensity& sigma,
                                          const ConvexPolygon& body,
                                          const ConvexPolygon& cell) {
    if (sigma.interpolation() != BoundaryDensity::Interpolation::Constant)
        throw std::invalid_argument(
            "restrict_boundary_density: only piecewise-constant densities restrict exactly");

    const double cell_len = perimeter(cell);
    const BoundaryArcs arcs = boundary_portion(body, cell);

    // Each covered arc keeps its density, shifted to the arc length of ∂cell;
    // arcs lie along ∂cell and both polylines run counterclockwise, so the
    // correspondence preserves arc length.
    struct Piece {
        double lo, hi, value;
    };
    std::vector<Piece> pieces;
    for (const auto& [s0, s1] : arcs.intervals) {
        const double t0 = boundary_locate(cell, boundary_point(body, s0));
        // subdivide at the knots of sigma inside [s0, s1]
        std::vector<double> stops{s0};
        for (double k : sigma.knots())
            if (k > s0 + 1e-12 && k < s1 - 1e-12) stops.push_back(k);
        stops.push_back(s1);
        for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
            const double mid = 0.5 * (stops[i] + stops[i + 1]);
            double lo = t0 + (stops[i] - s0);
            double hi = t0 + (stops[i + 1] - s0);
            const double v = sigma.density_at(mid);
            if (hi <= cell_len + 1e-12) {
                pieces.push_back({lo, std::min(hi, cell_len), v});
            } else if (lo >= cell_len) {
                pieces.push_back({lo - cell_len, hi - cell_len, v});
            } else {  // wraps past the start vertex of the cell
                pieces.push_back({lo, cell_len, v});
                pieces.push_back({0.0, hi - cell_len, v});
            }
        }
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.lo < b.lo; });

    std::vector<double> knots{0.0};
    std::vector<double> values;
    for (const Piece& p : pieces) {
        if (p.hi - p.lo <= 1e-12) continue;
        if (p.lo > knots.back() + 1e-12) {
            knots.push_back(p.lo);
            values.push_back(0.0);
        }
        const double hi = std::min(p.hi, cell_len);
        if (hi > knots.back() + 1e-12) {
            knots.push_back(hi);
            values.push_back(p.value);
        }
    }
    if (knots.back() < cell_len - 1e-12) {
        knots.push_back(cell_len);
        values.push_back(0.0);
    } else {
        knots.back() = cell_len;
    }
    return BoundaryDensity(cell_len, std::move(knots), std::move(values),
                           BoundaryDensity::Interpolation::Constant);
}

// ---- IntervalMeasure -----------------------------------------------------

IntervalMeasure::IntervalMeasure(std::vector<double> knots,
                                 std::vector<std::vector<double>> coeffs)
    : knots_(std::move(knots)), coeffs_(std::move(coeffs)) {
    if (knots_.size() < 2 || coeffs_.size() != knots_.size() - 1)
        throw std::invalid_argument("interval measure piece count mismatch");
    if (std::abs(knots_.front()) > 1e-12 || std::abs(knots_.back() - 1.0) > 1e-12)
        throw std::invalid_argument("interval measure must span [0,1]");
    knots_.front() = 0.0;
    knots_.back() = 1.0;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (knots_[i] <= knots_[i - 1]) throw std::invalid_argument("interval knots must ascend");

    // normalize to unit mass, then freeze the cdf at the knots
    cum_.assign(knots_.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        total += piece_integral(i, knots_[i + 1]);
        cum_[i + 1] = total;
    }
    if (total <= 0.0) throw std::invalid_argument("interval density has zero mass");
    for (auto& piece : coeffs_)
        for (double& c : piece) c /= total;
    for (double& c : cum_) c /= total;
}

double IntervalMeasure::piece_integral(std::size_t i, double x) const {
    // integral of piece i from knots_[i] to x
    const double a = knots_[i];
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs_[i].size(); ++k) {
        const double kk = static_cast<double>(k + 1);
        acc += coeffs_[i][k] / kk * (std::pow(x, kk) - std::pow(a, kk));
    }
    return acc;
}

IntervalMeasure IntervalMeasure::uniform() { return IntervalMeasure({0.0, 1.0}, {{1.0}}); }

IntervalMeasure IntervalMeasure::polynomial(std::vector<double> coeffs) {
    return IntervalMeasure({0.0, 1.0}, {std::move(coeffs)});
}

double IntervalMeasure::density_at(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::max<long>(0, (it - knots_.begin()) - 1));
    i = std::min(i, knots_.size() - 2);
    double v = 0.0, p = 1.0;
    for (double c : coeffs_[i]) {
        v += c * p;
        p *= x;
    }
    return v;
}

double IntervalMeasure::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::max<long>(0, (it - knots_.begin()) - 1));
    i = std::min(i, knots_.size() - 2);
    return cum_[i] + piece_integral(i, x);
}

double IntervalMeasure::quantile(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < t) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

double interval_mass(const IntervalMeasure& m, const std::vector<Interval>& set) {
    double mass = 0.0;
    for (const Interval& iv : set)
        if (iv.hi > iv.lo) mass += m.cdf(iv.hi) - m.cdf(iv.lo);
    return mass;
}

IntervalMeasure restrict_interval_measure(const IntervalMeasure& m,
                                          const std::vector<Interval>& set) {
    std::vector<Interval> sorted = set;
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

    std::vector<double> knots{0.0};
    std::vector<std::vector<double>> coeffs;
    auto push_piece = [&](double hi, std::vector<double> c) {
        if (hi <= knots.back() + 1e-15) return;
        knots.push_back(hi);
        coeffs.push_back(std::move(c));
    };
    for (const Interval& iv : sorted) {
        const double lo = std::clamp(iv.lo, 0.0, 1.0);
        const double hi = std::clamp(iv.hi, 0.0, 1.0);
        if (hi <= lo) continue;
        push_piece(lo, {0.0});
        // copy the original pieces overlapping [lo, hi]
        const auto& mk = m.knots();
        for (std::size_t i = 0; i + 1 < mk.size(); ++i) {
            const double a = std::max(mk[i], lo);
            const double b = std::min(mk[i + 1], hi);
            if (b > a + 1e-15) push_piece(b, m.coeffs()[i]);
        }
    }
    push_piece(1.0, {0.0});
    knots.back() = 1.0;
    return IntervalMeasure(std::move(knots), std::move(coeffs));
}

}  // namespace equipart
