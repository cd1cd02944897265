#include "equipart/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "equipart/rng.hpp"

namespace equipart {

// ---- gauge ----------------------------------------------------------------

Eigen::VectorXd GaugeStructure::project(Eigen::VectorXd x) const {
    for (const auto& cls : classes) {
        double mean = 0.0;
        for (int i : cls) mean += x[i];
        mean /= static_cast<double>(cls.size());
        for (int i : cls) x[i] -= mean;
    }
    const double n = x.norm();
    if (n > 0.0) x /= n;
    return x;
}

Eigen::MatrixXd GaugeStructure::tangent_basis(const Eigen::VectorXd& x) const {
    const int c = static_cast<int>(classes.size());
    Eigen::MatrixXd constraints = Eigen::MatrixXd::Zero(c + 1, dim);
    for (int r = 0; r < c; ++r)
        for (int i : classes[r]) constraints(r, i) = 1.0;
    constraints.row(c) = x.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
    // x is mean-free, so the constraint rows have full rank c + 1
    return svd.matrixV().rightCols(dim - (c + 1));
}

// ---- Levenberg-Marquardt core ----------------------------------------------

namespace {

double leading_inf_norm(const Eigen::VectorXd& r, int n) {
    double v = 0.0;
    for (int i = 0; i < n && i < r.size(); ++i) v = std::max(v, std::abs(r[i]));
    return v;
}

}  // namespace

LmOutcome lm_minimize(const LmProblem& problem, const Eigen::VectorXd& x0,
                      const SolverConfig& cfg) {
    LmOutcome out;
    Eigen::VectorXd x = problem.gauge.project(x0);
    Eigen::VectorXd r = problem.residual(x);
    double cost = 0.5 * r.squaredNorm();
    double lambda = cfg.damping_init;

    out.x = x;
    out.cost = cost;
    out.constraint_inf = leading_inf_norm(r, problem.constraint_entries);

    const int tdim = problem.gauge.dim - static_cast<int>(problem.gauge.classes.size()) - 1;
    if (tdim <= 0) {
        out.converged = out.constraint_inf <= cfg.tol;
        return out;
    }

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        if (out.constraint_inf <= cfg.tol) {
            out.converged = true;
            return out;
        }
        out.iterations = iter + 1;

        const Eigen::MatrixXd basis = problem.gauge.tangent_basis(x);
        Eigen::MatrixXd jac(r.size(), basis.cols());
        for (int i = 0; i < basis.cols(); ++i) {
            const Eigen::VectorXd xp =
                problem.gauge.project(x + cfg.fd_step * basis.col(i));
            jac.col(i) = (problem.residual(xp) - r) / cfg.fd_step;
        }
        const Eigen::MatrixXd h = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        Eigen::VectorXd diag = h.diagonal().cwiseMax(1e-12);

        bool accepted = false;
        for (int attempt = 0; attempt < 30; ++attempt) {
            Eigen::MatrixXd damped = h;
            damped.diagonal() += lambda * diag;
            const Eigen::VectorXd step = damped.ldlt().solve(-g);
            const Eigen::VectorXd xc = problem.gauge.project(x + basis * step);
            const Eigen::VectorXd rc = problem.residual(xc);
            const double cc = 0.5 * rc.squaredNorm();
            if (cc < cost) {
                x = xc;
                r = rc;
                const double drop = cost - cc;
                cost = cc;
                lambda = std::max(lambda / 3.0, 1e-14);
                accepted = true;
                out.x = x;
                out.cost = cost;
                out.constraint_inf = leading_inf_norm(r, problem.constraint_entries);
                // stagnation: progress too small to matter
                if (drop < 1e-18 * (1.0 + cost) && step.norm() < 1e-13) iter = cfg.max_iter;
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e12) break;
        }
        if (!accepted) break;  // no descent direction left at sane damping
    }
    out.converged = out.constraint_inf <= cfg.tol;
    return out;
}

// ---- family packing ---------------------------------------------------------

namespace {

Eigen::VectorXd pack_family(const FunctionFamily& family) {
    const std::size_t q = family.size();
    Eigen::VectorXd x(3 * static_cast<int>(q));
    for (std::size_t j = 0; j < q; ++j) {
        x[3 * j + 0] = family.members[j].a.x;
        x[3 * j + 1] = family.members[j].a.y;
        x[3 * j + 2] = family.members[j].b;
    }
    return x;
}

FunctionFamily unpack_family(const Eigen::VectorXd& x) {
    FunctionFamily family;
    const int q = static_cast<int>(x.size() / 3);
    family.members.reserve(q);
    for (int j = 0; j < q; ++j)
        family.members.push_back({{x[3 * j + 0], x[3 * j + 1]}, x[3 * j + 2]});
    return family;
}

GaugeStructure family_gauge(int q) {
    GaugeStructure g;
    g.dim = 3 * q;
    g.classes.resize(3);
    for (int j = 0; j < q; ++j) {
        g.classes[0].push_back(3 * j + 0);
        g.classes[1].push_back(3 * j + 1);
        g.classes[2].push_back(3 * j + 2);
    }
    return g;
}

double body_diameter(const ConvexPolygon& body) {
    Point2 lo, hi;
    bounding_box(body, lo, hi);
    return norm(hi - lo);
}

// Residual vector with the empty-cell barrier appended.  The barrier entries
// are sqrt(w) * max(0, -r_j) over the measure blocks: they vanish exactly
// where every cell reaches its target mass and grow as cells starve, which
// steers the search away from configurations with empty cells.
struct ResidualAssembler {
    const ConvexPolygon* body;
    const ConstraintSet* constraints;
    int q;
    double penalty_weight;

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const {
        const std::size_t m = constraints->size();
        const std::size_t nq = static_cast<std::size_t>(q);
        FunctionFamily family = unpack_family(x);
        CellSet cells;
        try {
            cells = build_partition(*body, family);
        } catch (const DegenerateFamily&) {
            // collapsed members: hand back a wall so the step is rejected
            return Eigen::VectorXd::Constant(static_cast<int>(m * nq + nq), 1e6);
        }

        Eigen::VectorXd r(m * nq + nq);
        int at = 0;
        Eigen::VectorXd barrier = Eigen::VectorXd::Zero(static_cast<int>(nq));
        bool has_measure = false;
        const double sw = std::sqrt(penalty_weight);
        for (const Constraint& c : constraints->items) {
            const ZeroSumVector block = constraint_residual(c, cells, *body);
            for (std::size_t j = 0; j < nq; ++j) r[at + static_cast<int>(j)] = block.entries[j];
            if (std::holds_alternative<MeasureConstraint>(c)) {
                has_measure = true;
                for (std::size_t j = 0; j < nq; ++j)
                    barrier[static_cast<int>(j)] +=
                        sw * std::max(0.0, -block.entries[j]);
            }
            at += static_cast<int>(nq);
        }
        if (!has_measure) {
            // keep cells from vanishing even when no measure anchors them;
            // the activation threshold is far below 1/q so solutions with
            // uneven but nonempty cells are untouched
            const double total = area(*body);
            const double floor_frac = 0.01 / static_cast<double>(q);
            for (std::size_t j = 0; j < nq; ++j) {
                const double frac = area(cells.cells[j]) / total;
                barrier[static_cast<int>(j)] = sw * std::max(0.0, floor_frac - frac);
            }
        }
        r.tail(static_cast<int>(nq)) = barrier;
        return r;
    }
};

std::vector<Point2> canonical_directions(int q) {
    std::vector<Point2> dirs(q);
    for (int j = 0; j < q; ++j) {
        const double t = 2.0 * std::numbers::pi * j / q;
        dirs[j] = {std::cos(t), std::sin(t)};
    }
    return dirs;
}

std::vector<Point2> random_directions(int q, RngStream& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Point2> dirs(q);
        for (int j = 0; j < q; ++j) {
            const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
            dirs[j] = {std::cos(t), std::sin(t)};
        }
        bool ok = true;
        for (int i = 0; i < q && ok; ++i)
            for (int j = i + 1; j < q && ok; ++j)
                if (norm(dirs[i] - dirs[j]) <= kSepEps) ok = false;
        if (ok) return dirs;
    }
    return canonical_directions(q);
}

AreaMeasure coarse_for_init(const AreaMeasure& m) {
    if (const auto* grid = std::get_if<DensityGrid>(&m)) return grid->coarsened(48);
    return m;
}

SolveReport finalize_report(const ConvexPolygon& body, const ConstraintSet& constraints,
                            const CellSet& cells, double tol) {
    SolveReport report;
    report.blocks.reserve(constraints.size());
    double norm_all = 0.0, norm_measures = 0.0;
    for (const Constraint& c : constraints.items) {
        report.blocks.push_back(constraint_residual(c, cells, body));
        const double bn = report.blocks.back().inf_norm();
        norm_all = std::max(norm_all, bn);
        if (std::holds_alternative<MeasureConstraint>(c))
            norm_measures = std::max(norm_measures, bn);
    }
    report.residual_norm = norm_all;
    report.on_zero_set = norm_measures <= tol;
    return report;
}

}  // namespace

// ---- balance_offsets --------------------------------------------------------

BalanceResult balance_offsets(const ConvexPolygon& body, const AreaMeasure& measure,
                              const std::vector<Point2>& directions, const SolverConfig& cfg) {
    const int q = static_cast<int>(directions.size());
    BalanceResult result;
    result.offsets.assign(q, 0.0);
    if (q <= 1) {
        result.converged = true;
        return result;
    }
    {
        FunctionFamily probe;
        for (Point2 d : directions) probe.members.push_back({d, 0.0});
        require_distinct(probe);
    }

    const double total = mass_in_cell(measure, body);
    const double target = total / q;
    const double diam = body_diameter(body);

    auto cell_of = [&](int j, const std::vector<double>& b) {
        ConvexPolygon cell = body;
        for (int l = 0; l < q && !cell.empty(); ++l) {
            if (l == j) continue;
            cell = halfplane_clip(cell, directions[j] - directions[l], b[j] - b[l]);
        }
        return cell;
    };
    auto mass_of = [&](int j, const std::vector<double>& b) {
        return mass_in_cell(measure, cell_of(j, b));
    };

    std::vector<double>& b = result.offsets;
    const int max_sweeps = std::clamp(cfg.max_iter, 1, 100);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        result.sweeps = sweep + 1;
        for (int j = 0; j < q; ++j) {
            double span = 0.0;
            for (int l = 0; l < q; ++l)
                span = std::max(span, norm(directions[j] - directions[l]));
            double w = span * diam + 1.0;
            double lo = b[j] - w, hi = b[j] + w;
            std::vector<double> bb = b;
            for (int grow = 0; grow < 60; ++grow) {
                bb[j] = lo;
                if (mass_of(j, bb) <= target) break;
                lo -= w;
                w *= 2.0;
            }
            w = span * diam + 1.0;
            for (int grow = 0; grow < 60; ++grow) {
                bb[j] = hi;
                if (mass_of(j, bb) >= target) break;
                hi += w;
                w *= 2.0;
            }
            for (int step = 0; step < 60; ++step) {
                const double mid = 0.5 * (lo + hi);
                bb[j] = mid;
                const double mass = mass_of(j, bb);
                if (std::abs(mass - target) <= 0.25 * cfg.tol) {
                    lo = hi = mid;
                    break;
                }
                if (mass < target) lo = mid;
                else hi = mid;
                if (hi - lo < 1e-15 * (1.0 + std::abs(mid))) break;
            }
            b[j] = 0.5 * (lo + hi);
        }
        double mean = 0.0;
        for (double v : b) mean += v;
        mean /= q;
        for (double& v : b) v -= mean;

        result.max_deviation = 0.0;
        for (int j = 0; j < q; ++j)
            result.max_deviation = std::max(result.max_deviation,
                                            std::abs(mass_of(j, b) - target));
        if (result.max_deviation <= cfg.tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

// ---- solve_equipartition ------------------------------------------------------

EquipartitionResult solve_equipartition(const ConvexPolygon& body,
                                        const ConstraintSet& constraints, int q,
                                        const SolverConfig& cfg) {
    if (q < 1) throw std::invalid_argument("part count must be at least 1");
    if (constraints.items.empty()) throw std::invalid_argument("constraint set is empty");

    EquipartitionResult result;
    if (q == 1) {
        result.family.members.push_back({{0.0, 0.0}, 0.0});
        result.cells.cells.push_back(body);
        result.report = finalize_report(body, constraints, result.cells, cfg.tol);
        result.report.status = SolveStatus::Converged;
        result.report.starts_used = 0;
        return result;
    }

    SolveReport shared;
    if (constraints.size() != 2)
        shared.warnings.push_back(
            "constraint count " + std::to_string(constraints.size()) +
            " differs from the exactly-determined planar count 2; solving in least squares");

    const double pw = cfg.penalty_weight < 0.0 ? 10.0 * q : cfg.penalty_weight;
    LmProblem problem;
    problem.gauge = family_gauge(q);
    problem.constraint_entries = static_cast<int>(constraints.size()) * q;
    problem.residual = ResidualAssembler{&body, &constraints, q, pw};

    // cheap offset balancing for initial points
    const MeasureConstraint* anchor = constraints.first_measure();
    AreaMeasure init_measure = anchor ? coarse_for_init(anchor->measure)
                                      : AreaMeasure(UniformPolygonMeasure{body});
    SolverConfig balance_cfg = cfg;
    balance_cfg.tol = std::max(cfg.tol, 1e-3 / q);
    balance_cfg.max_iter = 8;  // sweeps; a loose start is enough, the LM polishes

    double best_inf = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x;
    int best_iters = 0, best_start = 0;

    const int starts = std::max(1, cfg.multistart);
    for (int start = 0; start < starts; ++start) {
        std::vector<Point2> dirs;
        if (start == 0) {
            dirs = canonical_directions(q);
        } else {
            RngStream rng(cfg.seed, static_cast<std::uint64_t>(start));
            dirs = random_directions(q, rng);
        }
        const BalanceResult balance = balance_offsets(body, init_measure, dirs, balance_cfg);

        FunctionFamily initial;
        for (int j = 0; j < q; ++j) initial.members.push_back({dirs[j], balance.offsets[j]});
        const Eigen::VectorXd x0 = pack_family(initial);

        const LmOutcome outcome = lm_minimize(problem, x0, cfg);
        if (outcome.constraint_inf < best_inf) {
            best_inf = outcome.constraint_inf;
            best_x = outcome.x;
            best_iters = outcome.iterations;
            best_start = start;
        }
        if (outcome.converged) break;  // lowest converged start wins
    }

    result.family = unpack_family(problem.gauge.project(best_x));
    result.cells = build_partition(body, result.family);
    result.report = finalize_report(body, constraints, result.cells, cfg.tol);
    result.report.warnings = shared.warnings;
    result.report.iterations = best_iters;
    result.report.starts_used = best_start + 1;
    result.report.status = result.report.residual_norm <= cfg.tol ? SolveStatus::Converged
                                                                  : SolveStatus::BestEffort;
    return result;
}

// ---- solve_iterated -----------------------------------------------------------

namespace {

struct IterationContext {
    const ConstraintSet* root_constraints;
    const SolverConfig* root_cfg;
    IteratedResult* out;
};

ConstraintSet restrict_constraints(const ConstraintSet& constraints, const ConvexPolygon& body,
                                   const ConvexPolygon& cell) {
    ConstraintSet restricted;
    restricted.items.reserve(constraints.size());
    for (const Constraint& c : constraints.items) {
        if (const auto* mc = std::get_if<MeasureConstraint>(&c)) {
            const double window = mass_in_cell(mc->measure, cell);
            MeasureConstraint next{mc->measure, window > 0.0 ? 1.0 / window : 1.0};
            restricted.items.emplace_back(std::move(next));
        } else if (const auto* bc = std::get_if<BoundaryConstraint>(&c)) {
            restricted.items.emplace_back(
                BoundaryConstraint{restrict_boundary_density(bc->density, body, cell), 1.0});
        }
    }
    return restricted;
}

void solve_level(const ConvexPolygon& body, const ConstraintSet& constraints,
                 const std::vector<int>& factors, std::size_t level, std::uint64_t seed,
                 IterationContext& ctx) {
    SolverConfig cfg = *ctx.root_cfg;
    cfg.seed = seed;
    const int q = factors[level];
    EquipartitionResult solved = solve_equipartition(body, constraints, q, cfg);
    if (solved.report.status != SolveStatus::Converged) ctx.out->status = SolveStatus::BestEffort;
    ctx.out->level_reports.push_back(solved.report);

    if (level + 1 == factors.size()) {
        for (ConvexPolygon& cell : solved.cells.cells) ctx.out->cells.push_back(std::move(cell));
        return;
    }
    for (int child = 0; child < q; ++child) {
        const ConvexPolygon& cell = solved.cells.cells[child];
        const ConstraintSet next = restrict_constraints(constraints, body, cell);
        // per-branch deterministic seed stream
        RngStream mix(seed, 0x5bd1e995ULL * (static_cast<std::uint64_t>(child) + 1));
        solve_level(cell, next, factors, level + 1, mix.next_u64(), ctx);
    }
}

}  // namespace

IteratedResult solve_iterated(const ConvexPolygon& body, const ConstraintSet& constraints,
                              const std::vector<int>& q_factors, const SolverConfig& cfg) {
    if (q_factors.empty()) throw std::invalid_argument("q_factors is empty");
    for (int f : q_factors)
        if (f < 2) throw std::invalid_argument("every partition factor must be at least 2");
    if (constraints.has_functional_or_center())
        throw std::invalid_argument(
            "solve_iterated: functional and center constraints do not compose across levels");

    IteratedResult result;
    result.status = SolveStatus::Converged;
    IterationContext ctx{&constraints, &cfg, &result};
    solve_level(body, constraints, q_factors, 0, cfg.seed, ctx);

    // honest end-to-end deviation against the original measures
    long long q_total = 1;
    for (int f : q_factors) q_total *= f;
    for (const Constraint& c : constraints.items) {
        if (const auto* mc = std::get_if<MeasureConstraint>(&c)) {
            const double total = mass_in_cell(mc->measure, body);
            for (const ConvexPolygon& cell : result.cells)
                result.max_measure_deviation =
                    std::max(result.max_measure_deviation,
                             std::abs(mass_in_cell(mc->measure, cell) - total / q_total));
        } else if (const auto* bc = std::get_if<BoundaryConstraint>(&c)) {
            for (const ConvexPolygon& cell : result.cells)
                result.max_measure_deviation = std::max(
                    result.max_measure_deviation,
                    std::abs(boundary_mass(bc->density, cell, body) - 1.0 / q_total));
        }
    }
    return result;
}

// ---- ham sandwich ---------------------------------------------------------------

namespace {

void support_box(const AreaMeasure& m, Point2& lo, Point2& hi) {
    if (const auto* grid = std::get_if<DensityGrid>(&m)) {
        bounding_box(grid->domain(), lo, hi);
        return;
    }
    bounding_box(std::get<UniformPolygonMeasure>(m).region, lo, hi);
}

}  // namespace

HamSandwichResult ham_sandwich_2d(const AreaMeasure& m1, const AreaMeasure& m2,
                                  const SolverConfig& cfg) {
    Point2 lo1, hi1, lo2, hi2;
    support_box(m1, lo1, hi1);
    support_box(m2, lo2, hi2);
    const Point2 lo{std::min(lo1.x, lo2.x), std::min(lo1.y, lo2.y)};
    const Point2 hi{std::max(hi1.x, hi2.x), std::max(hi1.y, hi2.y)};
    const double pad = 0.01 * (norm(hi - lo) + 1.0);

    HamSandwichResult result;
    result.body = make_rect(lo.x - pad, lo.y - pad, hi.x + pad, hi.y + pad);

    ConstraintSet constraints;
    constraints.items.emplace_back(MeasureConstraint{m1, 1.0});
    constraints.items.emplace_back(MeasureConstraint{m2, 1.0});
    EquipartitionResult solved = solve_equipartition(result.body, constraints, 2, cfg);

    const Point2 da = solved.family.members[0].a - solved.family.members[1].a;
    const double db = solved.family.members[0].b - solved.family.members[1].b;
    const double s = norm(da);
    result.normal = da * (1.0 / s);
    result.offset = db / s;
    result.masses = {mass_in_cell(m1, solved.cells.cells[0]),
                     mass_in_cell(m2, solved.cells.cells[0])};
    result.report = std::move(solved.report);
    return result;
}

}  // namespace equipart
