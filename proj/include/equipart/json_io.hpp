#pragma once

#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json_fwd.hpp>

#include "equipart/envelope.hpp"
#include "equipart/fuks.hpp"
#include "equipart/necklace.hpp"
#include "equipart/solver.hpp"

namespace equipart {

inline constexpr int kSchemaVersion = 1;

using AnyMeasure = std::variant<DensityGrid, UniformPolygonMeasure, BoundaryDensity,
                                IntervalMeasure>;

// ---- parsing (throws SchemaError with a JSON-pointer path) -----------------

ConvexPolygon polygon_from_json(const nlohmann::json& j, const std::string& at = "");
FunctionFamily family_from_json(const nlohmann::json& j, const std::string& at = "");

// Measure files carry a "type" tag: grid | uniform | points | boundary |
// interval.  Point clouds are smoothed onto a grid immediately (Gaussian
// kernel, Silverman-style default bandwidth) because the residuals need an
// absolutely continuous density.  Boundary densities need the body for their
// arc-length domain.
AnyMeasure measure_from_json(const nlohmann::json& j,
                             const std::optional<ConvexPolygon>& body,
                             const std::string& at = "");

struct Poly1dFamily {
    std::vector<Polynomial1D> polys;
    double lo = 0.0, hi = 0.0;
};

Poly1dFamily poly_family_from_json(const nlohmann::json& j, const std::string& at = "");

// Constraint descriptors reference measures by index into a separately
// loaded measure list.
ConstraintSet constraints_from_json(const nlohmann::json& j,
                                    const std::vector<AnyMeasure>& measures,
                                    const std::string& at = "");

// ---- serialization -----------------------------------------------------------

nlohmann::json to_json(const ConvexPolygon& poly);
nlohmann::json to_json(const FunctionFamily& family);
nlohmann::json to_json(const CellSet& cells);
nlohmann::json to_json(const SolveReport& report, const ConstraintSet* constraints);
nlohmann::json to_json(const EnvelopeProfile& profile);
nlohmann::json to_json(const NecklaceSplit& split);
nlohmann::json to_json(const DivisibilityReport& report);
nlohmann::json partition_to_json(const FunctionFamily& family, const CellSet& cells);
nlohmann::json search_to_json(const EnvelopeSearchResult& result);

// Light structural validation of emitted documents; throws SchemaError.
// Keeps the output side honest against the same schemas the parsers accept.
void validate_output(const nlohmann::json& j, const std::string& kind);

std::string dump_json(const nlohmann::json& j);
void write_json_file(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

// Gaussian-kernel smoothing of a point cloud onto a grid.
DensityGrid kde_grid(const std::vector<Point2>& points, double bandwidth,
                     std::size_t resolution);

}  // namespace equipart
