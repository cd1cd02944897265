#include "equipart/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace equipart {

namespace {

double coordinate_scale(const ConvexPolygon& poly) {
    double s = 1.0;
    for (const Point2& v : poly.vertices)
        s = std::max(s, std::max(std::abs(v.x), std::abs(v.y)));
    return s;
}

// Drop consecutive near-duplicate vertices (and a duplicate closing vertex).
void dedupe(std::vector<Point2>& vs, double tol) {
    std::vector<Point2> out;
    out.reserve(vs.size());
    for (const Point2& p : vs) {
        if (out.empty() || norm(p - out.back()) > tol) out.push_back(p);
    }
    while (out.size() >= 2 && norm(out.front() - out.back()) <= tol) out.pop_back();
    vs.swap(out);
}

}  // namespace

bool CellSet::any_empty() const {
    for (const ConvexPolygon& c : cells)
        if (c.empty()) return true;
    return false;
}

ConvexPolygon make_rect(double x0, double y0, double x1, double y1) {
    return ConvexPolygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

ConvexPolygon make_regular_polygon(int n, double radius, Point2 center, double phase) {
    ConvexPolygon poly;
    poly.vertices.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double t = phase + 2.0 * std::numbers::pi * k / n;
        poly.vertices.push_back({center.x + radius * std::cos(t),
                                 center.y + radius * std::sin(t)});
    }
    return poly;
}

double area(const ConvexPolygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = poly.vertices[i];
        const Point2& q = poly.vertices[(i + 1) % n];
        twice += cross(p, q);
    }
    return 0.5 * twice;
}

double perimeter(const ConvexPolygon& poly) {
    const std::size_t n = poly.size();
    if (n < 2) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        len += norm(poly.vertices[(i + 1) % n] - poly.vertices[i]);
    return len;
}

Point2 centroid(const ConvexPolygon& poly) {
    const std::size_t n = poly.size();
    double a2 = 0.0;
    Point2 c{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = poly.vertices[i];
        const Point2& q = poly.vertices[(i + 1) % n];
        const double w = cross(p, q);
        a2 += w;
        c.x += (p.x + q.x) * w;
        c.y += (p.y + q.y) * w;
    }
    return {c.x / (3.0 * a2), c.y / (3.0 * a2)};
}

SteinerCoefficients steiner_coefficients(const ConvexPolygon& poly) {
    if (poly.empty()) return {0.0, 0.0, 0.0};
    return {area(poly), perimeter(poly), std::numbers::pi};
}

bool is_convex_ccw(const ConvexPolygon& poly, double eps) {
    const std::size_t n = poly.size();
    if (n == 0) return true;
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly.vertices[(i + 1) % n] - poly.vertices[i];
        const Point2 b = poly.vertices[(i + 2) % n] - poly.vertices[(i + 1) % n];
        if (cross(a, b) < -eps) return false;
    }
    return true;
}

bool contains_point(const ConvexPolygon& poly, Point2 p, double eps) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly.vertices[i];
        const Point2 b = poly.vertices[(i + 1) % n];
        if (cross(b - a, p - a) < -eps) return false;
    }
    return true;
}

void bounding_box(const ConvexPolygon& poly, Point2& lo, Point2& hi) {
    lo = hi = poly.vertices.front();
    for (const Point2& v : poly.vertices) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
}

ConvexPolygon halfplane_clip(const ConvexPolygon& poly, Point2 a, double b) {
    const std::size_t n = poly.size();
    if (n == 0) return {};
    std::vector<Point2> out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = poly.vertices[i];
        const Point2 q = poly.vertices[(i + 1) % n];
        const double fp = dot(a, p) + b;
        const double fq = dot(a, q) + b;
        if (fp >= 0.0) {
            out.push_back(p);
            if (fq < 0.0) {
                const double t = fp / (fp - fq);
                out.push_back(p + (q - p) * t);
            }
        } else if (fq >= 0.0) {
            const double t = fp / (fp - fq);
            out.push_back(p + (q - p) * t);
        }
    }
    dedupe(out, 1e-14 * coordinate_scale(poly));
    ConvexPolygon result{std::move(out)};
    if (result.size() < 3 || area(result) <= 0.0) return {};
    return result;
}

ConvexPolygon convex_intersect(const ConvexPolygon& p, const ConvexPolygon& q) {
    if (p.empty() || q.empty()) return {};
    ConvexPolygon out = p;
    const std::size_t n = q.size();
    for (std::size_t i = 0; i < n && !out.empty(); ++i) {
        const Point2 a = q.vertices[i];
        const Point2 b = q.vertices[(i + 1) % n];
        // interior of a CCW polygon lies left of each directed edge
        const Point2 normal{a.y - b.y, b.x - a.x};
        out = halfplane_clip(out, normal, -dot(normal, a));
    }
    return out;
}

void require_distinct(const FunctionFamily& family, double eps) {
    const std::size_t q = family.size();
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = i + 1; j < q; ++j) {
            const AffineFunction2& u = family.members[i];
            const AffineFunction2& v = family.members[j];
            const double d = norm(u.a - v.a) + std::abs(u.b - v.b);
            if (d <= eps) throw DegenerateFamily("function family members " + std::to_string(i) +
                                                 " and " + std::to_string(j) + " coincide");
        }
    }
}

CellSet build_partition(const ConvexPolygon& body, const FunctionFamily& family) {
    require_distinct(family);
    const std::size_t q = family.size();
    const double body_area = area(body);
    CellSet cells;
    cells.cells.resize(q);
    for (std::size_t j = 0; j < q; ++j) {
        ConvexPolygon cell = body;
        for (std::size_t l = 0; l < q && !cell.empty(); ++l) {
            if (l == j) continue;
            const Point2 da = family.members[j].a - family.members[l].a;
            const double db = family.members[j].b - family.members[l].b;
            cell = halfplane_clip(cell, da, db);
        }
        if (!cell.empty() && area(cell) < kSliverAreaFrac * body_area) cell = {};
        cells.cells[j] = std::move(cell);
    }
    return cells;
}

BoundaryArcs boundary_portion(const ConvexPolygon& body, const ConvexPolygon& cell) {
    BoundaryArcs arcs;
    if (body.empty() || cell.empty()) return arcs;

    // Cell halfplanes with a slack wide enough to keep boundary edges the cell
    // shares with the body.
    const double slack = 1e-12 * coordinate_scale(body);
    const std::size_t m = cell.size();
    std::vector<Point2> normals(m);
    std::vector<double> offsets(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Point2 a = cell.vertices[i];
        const Point2 b = cell.vertices[(i + 1) % m];
        normals[i] = {a.y - b.y, b.x - a.x};
        offsets[i] = -dot(normals[i], a);
    }

    const std::size_t n = body.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = body.vertices[i];
        const Point2 q = body.vertices[(i + 1) % n];
        const double len = norm(q - p);
        double t0 = 0.0, t1 = 1.0;
        for (std::size_t e = 0; e < m && t0 < t1; ++e) {
            const double fp = dot(normals[e], p) + offsets[e];
            const double fq = dot(normals[e], q) + offsets[e];
            if (fp >= -slack && fq >= -slack) continue;
            if (fp < -slack && fq < -slack) {
                t0 = 1.0;
                t1 = 0.0;
                break;
            }
            const double t = fp / (fp - fq);
            if (fq < fp) t1 = std::min(t1, t);  // leaving the halfplane
            else t0 = std::max(t0, t);          // entering it
        }
        if (t1 - t0 > 1e-12) {
            const double s0 = s + t0 * len;
            const double s1 = s + t1 * len;
            if (!arcs.intervals.empty() &&
                std::abs(arcs.intervals.back().second - s0) <= 1e-12 * (1.0 + s0)) {
                arcs.intervals.back().second = s1;
            } else {
                arcs.intervals.emplace_back(s0, s1);
            }
        }
        s += len;
    }
    for (const auto& [a, b] : arcs.intervals) arcs.total_length += b - a;
    return arcs;
}

Point2 boundary_point(const ConvexPolygon& poly, double s) {
    const double total = perimeter(poly);
    s = std::fmod(s, total);
    if (s < 0.0) s += total;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = poly.vertices[i];
        const Point2 q = poly.vertices[(i + 1) % n];
        const double len = norm(q - p);
        if (s <= len || i + 1 == n) return p + (q - p) * (len > 0.0 ? s / len : 0.0);
        s -= len;
    }
    return poly.vertices.front();
}

double boundary_locate(const ConvexPolygon& poly, Point2 p) {
    const std::size_t n = poly.size();
    double best_d2 = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly.vertices[i];
        const Point2 b = poly.vertices[(i + 1) % n];
        const Point2 e = b - a;
        const double len2 = dot(e, e);
        double t = len2 > 0.0 ? dot(p - a, e) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const Point2 c = a + e * t;
        const double d2 = dot(p - c, p - c);
        if (d2 < best_d2) {
            best_d2 = d2;
            best_s = s + t * std::sqrt(len2);
        }
        s += std::sqrt(len2);
    }
    // the closing vertex maps back to parameter 0
    if (best_s >= s) best_s = 0.0;
    return best_s;
}

bool is_gauge_normalized(const FunctionFamily& family, double tol) {
    Point2 sa{0.0, 0.0};
    double sb = 0.0, norm2 = 0.0;
    for (const AffineFunction2& u : family.members) {
        sa = sa + u.a;
        sb += u.b;
        norm2 += dot(u.a, u.a) + u.b * u.b;
    }
    return std::abs(sa.x) <= tol && std::abs(sa.y) <= tol && std::abs(sb) <= tol &&
           std::abs(norm2 - 1.0) <= tol;
}

FunctionFamily gauge_normalized(const FunctionFamily& family) {
    const std::size_t q = family.size();
    FunctionFamily out = family;
    Point2 sa{0.0, 0.0};
    double sb = 0.0;
    for (const AffineFunction2& u : out.members) {
        sa = sa + u.a;
        sb += u.b;
    }
    const double inv_q = 1.0 / static_cast<double>(q);
    double norm2 = 0.0;
    for (AffineFunction2& u : out.members) {
        u.a = u.a - sa * inv_q;
        u.b -= sb * inv_q;
        norm2 += dot(u.a, u.a) + u.b * u.b;
    }
    if (norm2 > 0.0) {
        const double s = 1.0 / std::sqrt(norm2);
        for (AffineFunction2& u : out.members) {
            u.a = u.a * s;
            u.b *= s;
        }
    }
    return out;
}

}  // namespace equipart
