// Command-line workbench: equal partitions of planar measures by argmax
// cells of affine families, necklace splitting on [0,1], polynomial upper
// envelopes, and the combinatorial divisibility verifier.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "equipart/json_io.hpp"
#include "equipart/svg.hpp"

namespace {

using nlohmann::json;
using namespace equipart;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitBestEffort = 2;

struct CommonFlags {
    double tol = 1e-6;
    std::uint64_t seed = 0;
    int multistart = 64;
    int max_iter = 500;
    std::string out_dir = ".";
    bool render = false;
    bool reproducible = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--tol", flags.tol, "residual tolerance (inf-norm)");
    cmd->add_option("--seed", flags.seed, "root random seed");
    cmd->add_option("--multistart", flags.multistart, "number of solver starts");
    cmd->add_option("--max-iter", flags.max_iter, "iteration cap per start");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_flag("--render", flags.render, "write an SVG of the partition");
    cmd->add_flag("--reproducible", flags.reproducible,
                  "suppress timestamps so outputs are byte-identical");
}

SolverConfig config_of(const CommonFlags& flags) {
    SolverConfig cfg;
    cfg.tol = flags.tol;
    cfg.seed = flags.seed;
    cfg.multistart = flags.multistart;
    cfg.max_iter = flags.max_iter;
    return cfg;
}

std::string out_path(const CommonFlags& flags, const char* name) {
    std::filesystem::create_directories(flags.out_dir);
    return (std::filesystem::path(flags.out_dir) / name).string();
}

std::vector<AnyMeasure> load_measures(const std::vector<std::string>& paths,
                                      const std::optional<ConvexPolygon>& body) {
    std::vector<AnyMeasure> measures;
    measures.reserve(paths.size());
    for (const std::string& path : paths)
        measures.push_back(measure_from_json(read_json_file(path), body));
    return measures;
}

ConstraintSet default_constraints(const std::vector<AnyMeasure>& measures) {
    ConstraintSet set;
    for (const AnyMeasure& m : measures) {
        if (const auto* g = std::get_if<DensityGrid>(&m))
            set.items.emplace_back(MeasureConstraint{*g, 1.0});
        else if (const auto* u = std::get_if<UniformPolygonMeasure>(&m))
            set.items.emplace_back(MeasureConstraint{*u, 1.0});
        else if (const auto* b = std::get_if<BoundaryDensity>(&m))
            set.items.emplace_back(BoundaryConstraint{*b, 1.0});
        else
            throw SchemaError("/type", "interval measures belong to the necklace subcommand");
    }
    return set;
}

int run_equipart(const std::string& body_path, const std::vector<std::string>& measure_paths,
                 const std::string& constraints_path, int q, const CommonFlags& flags) {
    const ConvexPolygon body = polygon_from_json(read_json_file(body_path));
    const std::vector<AnyMeasure> measures = load_measures(measure_paths, body);
    const ConstraintSet constraints =
        constraints_path.empty()
            ? default_constraints(measures)
            : constraints_from_json(read_json_file(constraints_path), measures);
    if (constraints.items.empty()) throw SchemaError("/constraints", "no constraints given");

    const EquipartitionResult solved = solve_equipartition(body, constraints, q, config_of(flags));
    for (const std::string& w : solved.report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    json partition = partition_to_json(solved.family, solved.cells);
    validate_output(partition, "partition");
    write_json_file(partition, out_path(flags, "partition.json"));
    json report = to_json(solved.report, &constraints);
    validate_output(report, "report");
    write_json_file(report, out_path(flags, "report.json"));
    if (flags.render)
        write_text_file(render_partition_svg(body, solved.cells, flags.reproducible),
                        out_path(flags, "partition.svg"));

    std::printf("%s residual %.3g after %d start(s)\n",
                solved.report.status == SolveStatus::Converged ? "CONVERGED" : "BEST_EFFORT",
                solved.report.residual_norm, solved.report.starts_used);
    return solved.report.status == SolveStatus::Converged ? kExitOk : kExitBestEffort;
}

int run_necklace(const std::vector<std::string>& measure_paths, int r, const CommonFlags& flags) {
    std::vector<IntervalMeasure> measures;
    for (const AnyMeasure& m : load_measures(measure_paths, std::nullopt)) {
        const auto* iv = std::get_if<IntervalMeasure>(&m);
        if (!iv) throw SchemaError("/type", "necklace needs interval measures");
        measures.push_back(*iv);
    }
    if (r < 2) throw SchemaError("/r", "need at least 2 parts");

    const NecklaceResult result = split_necklace(measures, r, config_of(flags));
    json split = to_json(result.split);
    validate_output(split, "split");
    write_json_file(split, out_path(flags, "split.json"));
    json report = to_json(result.report, nullptr);
    validate_output(report, "report");
    write_json_file(report, out_path(flags, "report.json"));

    std::printf("%s residual %.3g with %zu cut(s)\n",
                result.report.status == SolveStatus::Converged ? "CONVERGED" : "BEST_EFFORT",
                result.report.residual_norm, result.split.cuts.size());
    return result.report.status == SolveStatus::Converged ? kExitOk : kExitBestEffort;
}

int run_envelope(const std::string& family_path, const CommonFlags& flags) {
    const Poly1dFamily family = poly_family_from_json(read_json_file(family_path));
    const EnvelopeProfile profile = upper_envelope(family.polys, family.lo, family.hi);
    json out = to_json(profile);
    validate_output(out, "profile");
    write_json_file(out, out_path(flags, "profile.json"));
    std::printf("%d breakpoint(s)\n", switch_count(profile));
    return kExitOk;
}

int run_envelope_search(int n, int q, int trials, const CommonFlags& flags) {
    if (n < 1 || q < 2) throw SchemaError("/", "need n >= 1 and q >= 2");
    const EnvelopeSearchResult result = search_superlinear(n, q, trials, flags.seed);
    json out = search_to_json(result);
    validate_output(out, "search");
    write_json_file(out, out_path(flags, "search.json"));
    if (result.exceeded) {
        // a family beating n(q-1) is worth keeping on its own
        write_json_file(out, out_path(flags, "witness.json"));
        std::printf("exceeded: %d switches > bound %d (witness.json written)\n",
                    result.best_switches, result.bound);
    } else {
        std::printf("best %d switches, bound %d\n", result.best_switches, result.bound);
    }
    return kExitOk;
}

int run_fuks_verify(int qmax, const CommonFlags& flags) {
    json rows = json::array();
    bool all_expected = true;
    for (int q = 2; q <= qmax; ++q) {
        const DivisibilityReport report = check_divisibility(q);
        rows.push_back(to_json(report));
        if (report.is_prime_power) {
            for (const DivisibilityRow& row : report.rows) all_expected &= row.divisible;
            std::printf("q=%d (p=%d): all %zu coefficients divisible\n", q, report.prime,
                        report.rows.size());
        } else {
            std::printf("q=%d: not a prime power, gcd over k = %lld\n", q,
                        static_cast<long long>(report.gcd_over_k));
        }
    }
    json out{{"schema_version", kSchemaVersion}, {"qmax", qmax}, {"rows", std::move(rows)}};
    validate_output(out, "fuks");
    write_json_file(out, out_path(flags, "fuks_report.json"));
    return all_expected ? kExitOk : kExitBestEffort;
}

int run_ham_sandwich(const std::vector<std::string>& measure_paths, const CommonFlags& flags) {
    std::vector<AreaMeasure> ms;
    for (const AnyMeasure& m : load_measures(measure_paths, std::nullopt)) {
        if (const auto* g = std::get_if<DensityGrid>(&m)) ms.push_back(*g);
        else if (const auto* u = std::get_if<UniformPolygonMeasure>(&m)) ms.push_back(*u);
        else throw SchemaError("/type", "ham-sandwich needs two area measures");
    }
    if (ms.size() != 2) throw SchemaError("/", "ham-sandwich needs exactly two measures");

    const HamSandwichResult result = ham_sandwich_2d(ms[0], ms[1], config_of(flags));
    json line{{"schema_version", kSchemaVersion},
              {"a", {result.normal.x, result.normal.y}},
              {"b", result.offset},
              {"masses", {result.masses[0], result.masses[1]}}};
    validate_output(line, "line");
    write_json_file(line, out_path(flags, "line.json"));
    json report = to_json(result.report, nullptr);
    validate_output(report, "report");
    write_json_file(report, out_path(flags, "report.json"));

    std::printf("%s masses (%.6f, %.6f)\n",
                result.report.status == SolveStatus::Converged ? "CONVERGED" : "BEST_EFFORT",
                result.masses[0], result.masses[1]);
    return result.report.status == SolveStatus::Converged ? kExitOk : kExitBestEffort;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equipart: equal partitions of measures, necklace splits, envelopes"};
    app.require_subcommand(1);

    CommonFlags flags;

    // equipart
    std::string body_path, constraints_path;
    std::vector<std::string> measure_paths;
    int q = 2;
    CLI::App* equipart = app.add_subcommand("equipart", "partition a convex body into q parts");
    equipart->add_option("--body", body_path, "convex body JSON")->required();
    equipart->add_option("--measure", measure_paths, "measure JSON (repeatable)");
    equipart->add_option("--constraints", constraints_path, "constraint list JSON");
    equipart->add_option("-q,--parts", q, "number of parts")->required();
    add_common(equipart, flags);

    // necklace
    std::vector<std::string> necklace_measures;
    int r = 2;
    CLI::App* necklace = app.add_subcommand("necklace", "split [0,1] measures into r equal parts");
    necklace->add_option("--measure", necklace_measures, "interval measure JSON (repeatable)")
        ->required();
    necklace->add_option("-r,--parts", r, "number of parts")->required();
    add_common(necklace, flags);

    // envelope
    std::string family_path;
    CLI::App* envelope = app.add_subcommand("envelope", "upper envelope of a polynomial family");
    envelope->add_option("--family", family_path, "polynomial family JSON")->required();
    add_common(envelope, flags);

    // envelope-search
    int search_n = 3, search_q = 4, trials = 1000;
    CLI::App* search = app.add_subcommand("envelope-search", "hunt for high-switch families");
    search->add_option("-n,--degree", search_n, "polynomial degree bound")->required();
    search->add_option("-q,--members", search_q, "family size")->required();
    search->add_option("--trials", trials, "search trials");
    add_common(search, flags);

    // fuks-verify
    int qmax = 8;
    CLI::App* fuks = app.add_subcommand("fuks-verify", "divisibility of boundary coefficients");
    fuks->add_option("--qmax", qmax, "largest member count to verify");
    add_common(fuks, flags);

    // ham-sandwich
    std::vector<std::string> ham_measures;
    CLI::App* ham = app.add_subcommand("ham-sandwich", "bisect two measures by one line");
    ham->add_option("--measure", ham_measures, "area measure JSON (two)")->required();
    add_common(ham, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (equipart->parsed())
            return run_equipart(body_path, measure_paths, constraints_path, q, flags);
        if (necklace->parsed()) return run_necklace(necklace_measures, r, flags);
        if (envelope->parsed()) return run_envelope(family_path, flags);
        if (search->parsed()) return run_envelope_search(search_n, search_q, trials, flags);
        if (fuks->parsed()) return run_fuks_verify(qmax, flags);
        if (ham->parsed()) return run_ham_sandwich(ham_measures, flags);
    } catch (const SchemaError& err) {
        std::fprintf(stderr, "input error at %s\n", err.what());
        return kExitInputError;
    } catch (const std::invalid_argument& err) {
        std::fprintf(stderr, "input error: %s\n", err.what());
        return kExitInputError;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kExitInputError;
    }
    return kExitInputError;
}
