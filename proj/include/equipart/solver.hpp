#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "equipart/residuals.hpp"

namespace equipart {

struct SolverConfig {
    double tol = 1e-6;             // convergence threshold, inf-norm on the residual
    int max_iter = 500;            // per start
    int multistart = 64;
    std::uint64_t seed = 0;
    double fd_step = 1e-6;         // forward-difference step
    double damping_init = 1e-3;    // initial Levenberg-Marquardt damping
    double penalty_weight = -1.0;  // empty-cell barrier weight; < 0 means 10*q
};

enum class SolveStatus { Converged, BestEffort };

struct SolveReport {
    SolveStatus status = SolveStatus::BestEffort;
    double residual_norm = 0.0;  // inf-norm over constraint blocks
    int iterations = 0;          // iterations of the winning start
    int starts_used = 0;
    // All measure blocks within tol: the configuration sits on the zero set
    // where functional and center blocks are honestly defined.
    bool on_zero_set = false;
    std::vector<ZeroSumVector> blocks;  // residual breakdown, declared order
    std::vector<std::string> warnings;
};

// ---- generic damped Gauss-Newton core ------------------------------------
//
// Minimizes 1/2 ||r(x)||^2 over a gauge quotient: the parameter vector is
// kept mean-free over the declared coordinate classes and unit-norm, and
// steps are taken in an orthonormal basis of the tangent space.  The
// Jacobian is forward-differenced; rank deficiency is handled by the
// Levenberg-Marquardt damping.

// Coordinate classes whose per-class sums are fixed to zero (the quotient by
// adding a common member), plus the unit-norm constraint (the quotient by
// positive scaling).
struct GaugeStructure {
    int dim = 0;
    std::vector<std::vector<int>> classes;

    Eigen::VectorXd project(Eigen::VectorXd x) const;
    // Orthonormal basis of {v : class sums zero, v ⊥ x}.
    Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& x) const;
};

struct LmProblem {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
    GaugeStructure gauge;
    int constraint_entries = 0;  // leading entries that count toward convergence
};

struct LmOutcome {
    Eigen::VectorXd x;
    double constraint_inf = 0.0;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

LmOutcome lm_minimize(const LmProblem& problem, const Eigen::VectorXd& x0,
                      const SolverConfig& cfg);

// ---- offset balancing -----------------------------------------------------

struct BalanceResult {
    std::vector<double> offsets;
    bool converged = false;
    double max_deviation = 0.0;
    int sweeps = 0;
};

// With directions fixed, finds offsets b so that every cell of the partition
// by u_j(x) = a_j.x + b_j carries mass total/q.  Coordinate ascent on the
// concave dual: each pass rebalances one offset by bisection, using the fact
// that raising b_j only grows cell j.
BalanceResult balance_offsets(const ConvexPolygon& body, const AreaMeasure& measure,
                              const std::vector<Point2>& directions, const SolverConfig& cfg);

// ---- equipartition solves -------------------------------------------------

struct EquipartitionResult {
    FunctionFamily family;
    CellSet cells;
    SolveReport report;
};

// Searches for a family whose partition zeroes every constraint block.
// Start 0 uses canonical evenly-spread directions with balanced offsets,
// further starts draw random directions from per-start streams; the first
// converged start wins.  Never throws on nonconvergence: the best
// configuration found is returned with status BestEffort.
EquipartitionResult solve_equipartition(const ConvexPolygon& body,
                                        const ConstraintSet& constraints, int q,
                                        const SolverConfig& cfg);

struct IteratedResult {
    std::vector<ConvexPolygon> cells;  // prod(q_factors) cells, depth-first order
    SolveStatus status = SolveStatus::BestEffort;
    std::vector<SolveReport> level_reports;
    // |mass - 1/q| over the original measures evaluated on the final cells.
    double max_measure_deviation = 0.0;
};

// Handles composite part counts by recursive solving: partition the body,
// then partition each cell with the measures restricted and renormalized.
// Only measure and boundary constraints compose across levels; functional
// and center constraints are rejected.
IteratedResult solve_iterated(const ConvexPolygon& body, const ConstraintSet& constraints,
                              const std::vector<int>& q_factors, const SolverConfig& cfg);

// ---- ham sandwich ----------------------------------------------------------

struct HamSandwichResult {
    Point2 normal;       // unit normal of the cut line
    double offset = 0.0;  // halfplane {normal.x + offset >= 0} gets mass 1/2 of each measure
    std::array<double, 2> masses{};  // achieved halfplane masses
    ConvexPolygon body;  // bounding body used for the solve
    SolveReport report;
};

HamSandwichResult ham_sandwich_2d(const AreaMeasure& m1, const AreaMeasure& m2,
                                  const SolverConfig& cfg);

}  // namespace equipart
