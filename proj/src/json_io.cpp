#include "equipart/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace equipart {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const std::string& at) {
    if (!j.is_object()) throw SchemaError(at.empty() ? "/" : at, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(at + "/" + key, "missing required field");
    return *it;
}

double number(const json& j, const std::string& at) {
    if (!j.is_number()) throw SchemaError(at, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& at) {
    if (!j.is_number_integer()) throw SchemaError(at, "expected an integer");
    return j.get<int>();
}

std::string text(const json& j, const std::string& at) {
    if (!j.is_string()) throw SchemaError(at, "expected a string");
    return j.get<std::string>();
}

const json& array(const json& j, const std::string& at, std::size_t min_size = 0) {
    if (!j.is_array()) throw SchemaError(at, "expected an array");
    if (j.size() < min_size)
        throw SchemaError(at, "expected at least " + std::to_string(min_size) + " entries");
    return j;
}

void check_version(const json& j, const std::string& at) {
    if (!j.is_object()) return;
    const auto it = j.find("schema_version");
    if (it == j.end()) return;  // optional on inputs
    if (!it->is_number_integer() || it->get<int>() != kSchemaVersion)
        throw SchemaError(at + "/schema_version",
                          "unsupported schema version (expected " +
                              std::to_string(kSchemaVersion) + ")");
}

Point2 point_at(const json& j, const std::string& at) {
    array(j, at);
    if (j.size() != 2) throw SchemaError(at, "expected [x, y]");
    return {number(j[0], at + "/0"), number(j[1], at + "/1")};
}

std::vector<double> number_list(const json& j, const std::string& at, std::size_t min_size = 0) {
    array(j, at, min_size);
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number(j[i], at + "/" + std::to_string(i)));
    return out;
}

}  // namespace

ConvexPolygon polygon_from_json(const json& j, const std::string& at) {
    check_version(j, at);
    const json& verts = field(j, "vertices", at);
    const std::string vat = at + "/vertices";
    array(verts, vat);
    if (verts.size() < 3) throw SchemaError(vat, "a polygon needs at least 3 vertices");
    ConvexPolygon poly;
    poly.vertices.reserve(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i)
        poly.vertices.push_back(point_at(verts[i], vat + "/" + std::to_string(i)));
    if (area(poly) < 0.0) std::reverse(poly.vertices.begin(), poly.vertices.end());
    if (!is_convex_ccw(poly)) throw SchemaError(vat, "vertices do not form a convex polygon");
    return poly;
}

FunctionFamily family_from_json(const json& j, const std::string& at) {
    check_version(j, at);
    const json& members = field(j, "members", at);
    const std::string mat = at + "/members";
    array(members, mat, 1);
    FunctionFamily family;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const std::string iat = mat + "/" + std::to_string(i);
        const Point2 a = point_at(field(members[i], "a", iat), iat + "/a");
        const double b = number(field(members[i], "b", iat), iat + "/b");
        family.members.push_back({a, b});
    }
    return family;
}

DensityGrid kde_grid(const std::vector<Point2>& points, double bandwidth,
                     std::size_t resolution) {
    if (points.empty()) throw std::invalid_argument("kde_grid: empty point cloud");
    Point2 lo = points[0], hi = points[0];
    Point2 mean{0, 0};
    for (const Point2& p : points) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
        mean = mean + p;
    }
    mean = mean * (1.0 / static_cast<double>(points.size()));

    if (bandwidth <= 0.0) {
        double var = 0.0;
        for (const Point2& p : points) var += dot(p - mean, p - mean);
        const double spread = std::sqrt(var / (2.0 * static_cast<double>(points.size())));
        bandwidth = std::pow(4.0 / (3.0 * static_cast<double>(points.size())), 0.2) *
                    std::max(spread, 1e-9);
    }

    const double pad = 3.0 * bandwidth;
    lo = lo - Point2{pad, pad};
    hi = hi + Point2{pad, pad};
    const double spacing = std::max(hi.x - lo.x, hi.y - lo.y) / static_cast<double>(resolution);
    const std::size_t nx =
        static_cast<std::size_t>(std::ceil((hi.x - lo.x) / spacing));
    const std::size_t ny =
        static_cast<std::size_t>(std::ceil((hi.y - lo.y) / spacing));
    std::vector<double> values(nx * ny, 0.0);
    const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const double y = lo.y + (static_cast<double>(iy) + 0.5) * spacing;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = lo.x + (static_cast<double>(ix) + 0.5) * spacing;
            double v = 0.0;
            for (const Point2& p : points) {
                const double dx = x - p.x, dy = y - p.y;
                v += std::exp(-(dx * dx + dy * dy) * inv);
            }
            values[iy * nx + ix] = v;
        }
    }
    return DensityGrid(lo, spacing, nx, ny, std::move(values));
}

AnyMeasure measure_from_json(const json& j, const std::optional<ConvexPolygon>& body,
                             const std::string& at) {
    check_version(j, at);
    const std::string type = text(field(j, "type", at), at + "/type");
    if (type == "grid") {
        const Point2 origin = point_at(field(j, "origin", at), at + "/origin");
        const double spacing = number(field(j, "spacing", at), at + "/spacing");
        if (spacing <= 0.0) throw SchemaError(at + "/spacing", "must be positive");
        const json& rows = array(field(j, "values", at), at + "/values", 1);
        const std::size_t ny = rows.size();
        const json& first = array(rows[0], at + "/values/0", 1);
        const std::size_t nx = first.size();
        std::vector<double> values;
        values.reserve(nx * ny);
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const std::string rat = at + "/values/" + std::to_string(iy);
            const json& row = array(rows[iy], rat);
            if (row.size() != nx) throw SchemaError(rat, "ragged grid row");
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const double v = number(row[ix], rat + "/" + std::to_string(ix));
                if (v < 0.0) throw SchemaError(rat + "/" + std::to_string(ix), "negative density");
                values.push_back(v);
            }
        }
        return DensityGrid(origin, spacing, nx, ny, std::move(values));
    }
    if (type == "uniform") {
        return UniformPolygonMeasure{
            polygon_from_json(field(j, "region", at), at + "/region")};
    }
    if (type == "points") {
        const json& pts = array(field(j, "points", at), at + "/points", 1);
        std::vector<Point2> cloud;
        cloud.reserve(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            cloud.push_back(point_at(pts[i], at + "/points/" + std::to_string(i)));
        double bandwidth = 0.0;
        if (j.contains("bandwidth")) bandwidth = number(j["bandwidth"], at + "/bandwidth");
        std::size_t resolution = 256;
        if (j.contains("resolution")) {
            const int res = integer(j["resolution"], at + "/resolution");
            if (res < 8) throw SchemaError(at + "/resolution", "resolution below 8");
            resolution = static_cast<std::size_t>(res);
        }
        return kde_grid(cloud, bandwidth, resolution);
    }
    if (type == "boundary") {
        if (!body)
            throw SchemaError(at, "boundary density needs a body for its arc-length domain");
        const double length = perimeter(*body);
        std::vector<double> knots = number_list(field(j, "knots", at), at + "/knots", 2);
        std::vector<double> values = number_list(field(j, "values", at), at + "/values", 1);
        std::string interp = "constant";
        if (j.contains("interpolation"))
            interp = text(j["interpolation"], at + "/interpolation");
        if (interp != "constant" && interp != "linear")
            throw SchemaError(at + "/interpolation", "expected \"constant\" or \"linear\"");
        if (std::abs(knots.back() - length) > 1e-6 * std::max(1.0, length))
            throw SchemaError(at + "/knots",
                              "last knot must equal the body perimeter " + std::to_string(length));
        knots.back() = length;
        try {
            return BoundaryDensity(length, std::move(knots), std::move(values),
                                   interp == "constant"
                                       ? BoundaryDensity::Interpolation::Constant
                                       : BoundaryDensity::Interpolation::Linear);
        } catch (const std::invalid_argument& err) {
            throw SchemaError(at, err.what());
        }
    }
    if (type == "interval") {
        std::vector<double> knots = number_list(field(j, "knots", at), at + "/knots", 2);
        const json& pieces = array(field(j, "coeffs", at), at + "/coeffs", 1);
        if (pieces.size() != knots.size() - 1)
            throw SchemaError(at + "/coeffs", "need one coefficient list per knot interval");
        std::vector<std::vector<double>> coeffs;
        for (std::size_t i = 0; i < pieces.size(); ++i)
            coeffs.push_back(number_list(pieces[i], at + "/coeffs/" + std::to_string(i), 1));
        try {
            return IntervalMeasure(std::move(knots), std::move(coeffs));
        } catch (const std::invalid_argument& err) {
            throw SchemaError(at, err.what());
        }
    }
    throw SchemaError(at + "/type", "unknown measure type \"" + type + "\"");
}

Poly1dFamily poly_family_from_json(const json& j, const std::string& at) {
    check_version(j, at);
    Poly1dFamily family;
    const json& polys = array(field(j, "polys", at), at + "/polys", 1);
    for (std::size_t i = 0; i < polys.size(); ++i) {
        Polynomial1D p;
        p.coefficients = number_list(polys[i], at + "/polys/" + std::to_string(i), 1);
        family.polys.push_back(std::move(p));
    }
    const json& interval = array(field(j, "interval", at), at + "/interval");
    if (interval.size() != 2) throw SchemaError(at + "/interval", "expected [lo, hi]");
    family.lo = number(interval[0], at + "/interval/0");
    family.hi = number(interval[1], at + "/interval/1");
    if (!(family.lo < family.hi)) throw SchemaError(at + "/interval", "lo must be below hi");
    return family;
}

ConstraintSet constraints_from_json(const json& j, const std::vector<AnyMeasure>& measures,
                                    const std::string& at) {
    check_version(j, at);
    const json& items = array(field(j, "constraints", at), at + "/constraints", 1);
    ConstraintSet set;

    const auto area_measure = [&](int index, const std::string& iat) -> AreaMeasure {
        if (index < 0 || static_cast<std::size_t>(index) >= measures.size())
            throw SchemaError(iat, "measure index out of range");
        const AnyMeasure& m = measures[static_cast<std::size_t>(index)];
        if (const auto* g = std::get_if<DensityGrid>(&m)) return *g;
        if (const auto* u = std::get_if<UniformPolygonMeasure>(&m)) return *u;
        throw SchemaError(iat, "measure " + std::to_string(index) + " is not an area measure");
    };

    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string iat = at + "/constraints/" + std::to_string(i);
        const std::string type = text(field(items[i], "type", iat), iat + "/type");
        if (type == "measure") {
            const int idx = integer(field(items[i], "measure", iat), iat + "/measure");
            set.items.emplace_back(MeasureConstraint{area_measure(idx, iat + "/measure"), 1.0});
        } else if (type == "functional") {
            const std::string kind = text(field(items[i], "kind", iat), iat + "/kind");
            if (kind == "area") {
                set.items.emplace_back(FunctionalConstraint{ShapeFunctional::area_functional()});
            } else if (kind == "perimeter") {
                set.items.emplace_back(
                    FunctionalConstraint{ShapeFunctional::perimeter_functional()});
            } else if (kind == "steiner") {
                const int idx = integer(field(items[i], "index", iat), iat + "/index");
                if (idx < 0 || idx > 2) throw SchemaError(iat + "/index", "steiner index in 0..2");
                set.items.emplace_back(FunctionalConstraint{ShapeFunctional::steiner(idx)});
            } else {
                throw SchemaError(iat + "/kind", "unknown functional \"" + kind + "\"");
            }
        } else if (type == "boundary") {
            const int idx = integer(field(items[i], "measure", iat), iat + "/measure");
            if (idx < 0 || static_cast<std::size_t>(idx) >= measures.size())
                throw SchemaError(iat + "/measure", "measure index out of range");
            const auto* b = std::get_if<BoundaryDensity>(&measures[static_cast<std::size_t>(idx)]);
            if (!b)
                throw SchemaError(iat + "/measure",
                                  "measure " + std::to_string(idx) + " is not a boundary density");
            set.items.emplace_back(BoundaryConstraint{*b, 1.0});
        } else if (type == "center") {
            const std::string h = text(field(items[i], "h", iat), iat + "/h");
            if (h == "x") set.items.emplace_back(CenterConstraint{CenterMap::coordinate_x()});
            else if (h == "y") set.items.emplace_back(CenterConstraint{CenterMap::coordinate_y()});
            else if (h == "r2")
                set.items.emplace_back(CenterConstraint{CenterMap::radius_squared()});
            else throw SchemaError(iat + "/h", "unknown center observable \"" + h + "\"");
        } else {
            throw SchemaError(iat + "/type", "unknown constraint type \"" + type + "\"");
        }
    }
    return set;
}

// ---- serialization -----------------------------------------------------------

json to_json(const ConvexPolygon& poly) {
    json verts = json::array();
    for (const Point2& v : poly.vertices) verts.push_back({v.x, v.y});
    return json{{"schema_version", kSchemaVersion}, {"vertices", std::move(verts)}};
}

json to_json(const FunctionFamily& family) {
    json members = json::array();
    for (const AffineFunction2& u : family.members)
        members.push_back({{"a", {u.a.x, u.a.y}}, {"b", u.b}});
    return json{{"schema_version", kSchemaVersion}, {"members", std::move(members)}};
}

json to_json(const CellSet& cells) {
    json out = json::array();
    for (const ConvexPolygon& c : cells.cells) {
        json verts = json::array();
        for (const Point2& v : c.vertices) verts.push_back({v.x, v.y});
        out.push_back({{"vertices", std::move(verts)}});
    }
    return out;
}

json partition_to_json(const FunctionFamily& family, const CellSet& cells) {
    return json{{"schema_version", kSchemaVersion},
                {"family", to_json(family)},
                {"cells", to_json(cells)}};
}

namespace {

const char* constraint_label(const Constraint& c) {
    if (std::holds_alternative<MeasureConstraint>(c)) return "measure";
    if (std::holds_alternative<FunctionalConstraint>(c)) return "functional";
    if (std::holds_alternative<BoundaryConstraint>(c)) return "boundary";
    return "center";
}

}  // namespace

json to_json(const SolveReport& report, const ConstraintSet* constraints) {
    json blocks = json::array();
    for (std::size_t i = 0; i < report.blocks.size(); ++i) {
        json b{{"residual", report.blocks[i].entries}};
        if (constraints && i < constraints->size())
            b["type"] = constraint_label(constraints->items[i]);
        blocks.push_back(std::move(b));
    }
    return json{{"schema_version", kSchemaVersion},
                {"status", report.status == SolveStatus::Converged ? "CONVERGED" : "BEST_EFFORT"},
                {"residual_norm", report.residual_norm},
                {"iterations", report.iterations},
                {"starts_used", report.starts_used},
                {"on_zero_set", report.on_zero_set},
                {"warnings", report.warnings},
                {"blocks", std::move(blocks)}};
}

json to_json(const EnvelopeProfile& profile) {
    return json{{"schema_version", kSchemaVersion},
                {"interval", {profile.lo, profile.hi}},
                {"breakpoints", profile.breakpoints},
                {"active", profile.active}};
}

json to_json(const NecklaceSplit& split) {
    json owners = json::array();
    for (int o : split.owners) owners.push_back(o + 1);  // parts are 1-based outside
    return json{{"schema_version", kSchemaVersion},
                {"cuts", split.cuts},
                {"owners", std::move(owners)}};
}

json to_json(const DivisibilityReport& report) {
    json rows = json::array();
    for (const DivisibilityRow& row : report.rows)
        rows.push_back({{"k", row.k},
                        {"coefficient", row.coefficient},
                        {"divisible_by_p", row.divisible}});
    return json{{"q", report.q},
                {"is_prime_power", report.is_prime_power},
                {"p", report.prime},
                {"via_chain", report.via_chain},
                {"entries", std::move(rows)},
                {"gcd", report.gcd_over_k}};
}

json search_to_json(const EnvelopeSearchResult& result) {
    json polys = json::array();
    for (const Polynomial1D& p : result.best_family) polys.push_back(p.coefficients);
    return json{{"schema_version", kSchemaVersion},
                {"polys", std::move(polys)},
                {"interval", {result.interval_lo, result.interval_hi}},
                {"switch_count", result.best_switches},
                {"bound", result.bound},
                {"exceeded", result.exceeded}};
}

void validate_output(const json& j, const std::string& kind) {
    check_version(j, "");
    if (kind == "partition") {
        family_from_json(field(j, "family", ""), "/family");
        const json& cells = array(field(j, "cells", ""), "/cells");
        for (std::size_t i = 0; i < cells.size(); ++i)
            array(field(cells[i], "vertices", "/cells/" + std::to_string(i)),
                  "/cells/" + std::to_string(i) + "/vertices");
        return;
    }
    if (kind == "report") {
        text(field(j, "status", ""), "/status");
        number(field(j, "residual_norm", ""), "/residual_norm");
        array(field(j, "blocks", ""), "/blocks");
        return;
    }
    if (kind == "split") {
        const json& cuts = array(field(j, "cuts", ""), "/cuts");
        const json& owners = array(field(j, "owners", ""), "/owners", 1);
        if (owners.size() != cuts.size() + 1)
            throw SchemaError("/owners", "owner count must be cut count + 1");
        return;
    }
    if (kind == "profile") {
        const json& bps = array(field(j, "breakpoints", ""), "/breakpoints");
        const json& active = array(field(j, "active", ""), "/active", 1);
        if (active.size() != bps.size() + 1)
            throw SchemaError("/active", "active count must be breakpoint count + 1");
        return;
    }
    if (kind == "fuks") {
        array(field(j, "rows", ""), "/rows");
        return;
    }
    if (kind == "search") {
        array(field(j, "polys", ""), "/polys", 1);
        integer(field(j, "switch_count", ""), "/switch_count");
        return;
    }
    if (kind == "line") {
        const json& a = array(field(j, "a", ""), "/a");
        if (a.size() != 2) throw SchemaError("/a", "expected [ax, ay]");
        number(field(j, "b", ""), "/b");
        return;
    }
    throw std::logic_error("validate_output: unknown kind " + kind);
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << dump_json(j);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& err) {
        throw SchemaError("/", std::string("invalid JSON: ") + err.what());
    }
    return j;
}

}  // namespace equipart
