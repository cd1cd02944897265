#include "equipart/svg.hpp"

#include <algorithm>
#include <array>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace equipart {

namespace {

constexpr std::array<const char*, 12> kPalette = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295"};

void emit_points(std::ostringstream& out, const ConvexPolygon& poly, double scale,
                 Point2 lo, double height) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& v = poly.vertices[i];
        if (i) out << ' ';
        out << (v.x - lo.x) * scale << ',' << height - (v.y - lo.y) * scale;
    }
}

}  // namespace

std::string render_partition_svg(const ConvexPolygon& body, const CellSet& cells,
                                 bool reproducible) {
    Point2 lo, hi;
    bounding_box(body, lo, hi);
    const double width = 640.0;
    const double scale = width / std::max(hi.x - lo.x, 1e-12);
    const double height = (hi.y - lo.y) * scale;

    std::ostringstream out;
    out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    if (!reproducible) {
        std::time_t now = std::time(nullptr);
        char stamp[64];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%d %H:%M:%S", std::gmtime(&now));
        out << "<!-- generated " << stamp << " -->\n";
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
        const ConvexPolygon& cell = cells.cells[j];
        if (cell.empty()) continue;
        out << "<polygon points=\"";
        emit_points(out, cell, scale, lo, height);
        out << "\" fill=\"" << kPalette[j % kPalette.size()]
            << "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
    }
    out << "<polygon points=\"";
    emit_points(out, body, scale, lo, height);
    out << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
    out << "</svg>\n";
    return out.str();
}

void write_text_file(const std::string& content, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace equipart
