#pragma once

#include <string>

#include "equipart/geometry.hpp"

namespace equipart {

// Static picture of a partition: cells filled from a fixed palette, the body
// outline stroked.  With `reproducible` set the generation-time comment is
// suppressed so reruns are byte-identical.
std::string render_partition_svg(const ConvexPolygon& body, const CellSet& cells,
                                 bool reproducible);

void write_text_file(const std::string& content, const std::string& path);

}  // namespace equipart
