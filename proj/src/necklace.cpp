#include "equipart/necklace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "equipart/rng.hpp"

namespace equipart {

namespace {

constexpr double kTinySegment = 1e-9;

bool is_prime_power(int n, int& prime) {
    if (n < 2) return false;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        prime = p;
        return n == 1;
    }
    prime = n;
    return true;
}

std::vector<int> prime_power_factors(int r) {
    std::vector<int> factors;
    for (int p = 2; p <= r; ++p) {
        if (r % p) continue;
        int block = 1;
        while (r % p == 0) {
            r /= p;
            block *= p;
        }
        factors.push_back(block);
    }
    return factors;
}

Eigen::VectorXd pack_polys(const std::vector<Polynomial1D>& family, int n) {
    const int q = static_cast<int>(family.size());
    Eigen::VectorXd x(q * (n + 1));
    for (int j = 0; j < q; ++j)
        for (int k = 0; k <= n; ++k)
            x[j * (n + 1) + k] = k < static_cast<int>(family[j].coefficients.size())
                                     ? family[j].coefficients[static_cast<std::size_t>(k)]
                                     : 0.0;
    return x;
}

std::vector<Polynomial1D> unpack_polys(const Eigen::VectorXd& x, int q, int n) {
    std::vector<Polynomial1D> family(q);
    for (int j = 0; j < q; ++j) {
        family[j].coefficients.resize(static_cast<std::size_t>(n) + 1);
        for (int k = 0; k <= n; ++k)
            family[j].coefficients[static_cast<std::size_t>(k)] = x[j * (n + 1) + k];
    }
    return family;
}

GaugeStructure poly_gauge(int q, int n) {
    GaugeStructure g;
    g.dim = q * (n + 1);
    g.classes.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j < q; ++j)
        for (int k = 0; k <= n; ++k)
            g.classes[static_cast<std::size_t>(k)].push_back(j * (n + 1) + k);
    return g;
}

std::vector<std::vector<Interval>> profile_parts(const EnvelopeProfile& profile, int q) {
    std::vector<std::vector<Interval>> parts(q);
    std::vector<double> xs{profile.lo};
    xs.insert(xs.end(), profile.breakpoints.begin(), profile.breakpoints.end());
    xs.push_back(profile.hi);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        parts[static_cast<std::size_t>(profile.active[i])].push_back({xs[i], xs[i + 1]});
    return parts;
}

struct NecklaceResidual {
    const std::vector<IntervalMeasure>* measures;
    int q;
    int n;
    double penalty_weight;

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const {
        const std::size_t m = measures->size();
        const std::size_t nq = static_cast<std::size_t>(q);
        std::vector<Polynomial1D> family = unpack_polys(x, q, n);
        EnvelopeProfile profile;
        try {
            profile = upper_envelope(family, 0.0, 1.0);
        } catch (const DegenerateFamily&) {
            return Eigen::VectorXd::Constant(static_cast<int>(m * nq + nq), 1e6);
        }
        const std::vector<std::vector<Interval>> parts = profile_parts(profile, q);

        Eigen::VectorXd r(m * nq + nq);
        Eigen::VectorXd barrier = Eigen::VectorXd::Zero(static_cast<int>(nq));
        const double sw = std::sqrt(penalty_weight);
        int at = 0;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> masses(nq);
            double mean = 0.0;
            for (std::size_t j = 0; j < nq; ++j) {
                masses[j] = interval_mass((*measures)[i], parts[j]);
                mean += masses[j];
            }
            mean /= static_cast<double>(nq);
            for (std::size_t j = 0; j < nq; ++j) {
                const double v = masses[j] - mean;
                r[at++] = v;
                barrier[static_cast<int>(j)] += sw * std::max(0.0, -v);
            }
        }
        r.tail(static_cast<int>(nq)) = barrier;
        return r;
    }
};

// Family whose envelope realizes the quantile intervals of the first
// measure: lines with unit slope gaps for degree 1, downward parabolas
// centered on the interval midpoints otherwise.
std::vector<Polynomial1D> quantile_fan(const std::vector<IntervalMeasure>& measures, int q,
                                       int n) {
    std::vector<double> cuts(static_cast<std::size_t>(q) + 1);
    cuts[0] = 0.0;
    cuts[static_cast<std::size_t>(q)] = 1.0;
    for (int i = 1; i < q; ++i)
        cuts[static_cast<std::size_t>(i)] =
            measures[0].quantile(static_cast<double>(i) / static_cast<double>(q));

    std::vector<Polynomial1D> family(static_cast<std::size_t>(q));
    if (n == 1) {
        double b = 0.0;
        for (int j = 0; j < q; ++j) {
            if (j > 0) b -= cuts[static_cast<std::size_t>(j)];  // continuity at the cut
            family[static_cast<std::size_t>(j)].coefficients = {b, static_cast<double>(j)};
        }
    } else {
        for (int j = 0; j < q; ++j) {
            const double mid = 0.5 * (cuts[static_cast<std::size_t>(j)] +
                                      cuts[static_cast<std::size_t>(j) + 1]);
            // -(x - mid)^2, padded to degree n
            std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
            c[0] = -mid * mid;
            c[1] = 2.0 * mid;
            c[2] = -1.0;
            family[static_cast<std::size_t>(j)].coefficients = std::move(c);
        }
    }
    return family;
}

std::vector<Polynomial1D> random_polys(int q, int n, RngStream& rng) {
    std::vector<Polynomial1D> family(static_cast<std::size_t>(q));
    for (auto& p : family) {
        p.coefficients.resize(static_cast<std::size_t>(n) + 1);
        for (double& c : p.coefficients) c = rng.normal();
    }
    return family;
}

Polynomial1D from_roots(const std::vector<double>& roots, double sign) {
    Polynomial1D p{{sign}};
    for (double r : roots) {
        Polynomial1D next;
        next.coefficients.assign(p.coefficients.size() + 1, 0.0);
        for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
            next.coefficients[i + 1] += p.coefficients[i];
            next.coefficients[i] -= r * p.coefficients[i];
        }
        p = std::move(next);
    }
    return p;
}

// Quantile levels whose alternating segments each sum to one half: the
// ceil((n+1)/2) odd segments share 1/2, the rest share the other.
std::vector<double> alternating_quantiles(const IntervalMeasure& m, int n) {
    const int segments = n + 1;
    const int odd_count = (segments + 1) / 2;
    const int even_count = segments / 2;
    const double alpha = 0.5 / odd_count;
    const double beta = 0.5 / even_count;
    std::vector<double> roots;
    double level = 0.0;
    for (int k = 0; k < n; ++k) {
        level += (k % 2 == 0) ? alpha : beta;
        roots.push_back(m.quantile(level));
    }
    return roots;
}

// For two parts the family is determined by the difference g: cells are the
// sign sets of g.  Parameterizing g by its roots reaches every alternation
// pattern, which coefficient-space draws rarely do.
std::vector<Polynomial1D> two_part_init(const std::vector<IntervalMeasure>& measures, int n,
                                        int start, std::uint64_t seed) {
    std::vector<double> roots;
    double sign = 1.0;
    if (start <= 2) {
        roots = alternating_quantiles(measures[0], n);
        sign = start == 1 ? 1.0 : -1.0;
    } else {
        RngStream rng(seed, static_cast<std::uint64_t>(start));
        for (int k = 0; k < n; ++k) roots.push_back(rng.uniform(0.0, 1.0));
        std::sort(roots.begin(), roots.end());
        sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
    }
    const Polynomial1D g = from_roots(roots, sign);
    std::vector<Polynomial1D> family(2);
    family[0].coefficients.assign(static_cast<std::size_t>(n) + 1, 0.0);
    family[1].coefficients.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t i = 0; i < g.coefficients.size(); ++i) {
        family[0].coefficients[i] = 0.5 * g.coefficients[i];
        family[1].coefficients[i] = -0.5 * g.coefficients[i];
    }
    return family;
}

struct LevelSolve {
    std::vector<Polynomial1D> family;
    std::vector<std::vector<Interval>> parts;
    SolveReport report;
};

LevelSolve solve_level(const std::vector<IntervalMeasure>& measures, int q,
                       const SolverConfig& cfg) {
    const int n = static_cast<int>(measures.size());
    const double pw = cfg.penalty_weight < 0.0 ? 10.0 * q : cfg.penalty_weight;

    LmProblem problem;
    problem.gauge = poly_gauge(q, n);
    problem.constraint_entries = n * q;
    problem.residual = NecklaceResidual{&measures, q, n, pw};

    double best_inf = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x;
    int best_iters = 0, best_start = 0;
    const int starts = std::max(1, cfg.multistart);
    for (int start = 0; start < starts; ++start) {
        std::vector<Polynomial1D> init;
        if (start == 0) {
            init = quantile_fan(measures, q, n);
        } else if (q == 2) {
            init = two_part_init(measures, n, start, cfg.seed);
        } else {
            RngStream rng(cfg.seed, static_cast<std::uint64_t>(start));
            init = random_polys(q, n, rng);
        }
        const LmOutcome outcome = lm_minimize(problem, pack_polys(init, n), cfg);
        if (outcome.constraint_inf < best_inf) {
            best_inf = outcome.constraint_inf;
            best_x = outcome.x;
            best_iters = outcome.iterations;
            best_start = start;
        }
        if (outcome.converged) break;
    }

    LevelSolve solve;
    solve.family = unpack_polys(problem.gauge.project(best_x), q, n);
    const EnvelopeProfile profile = upper_envelope(solve.family, 0.0, 1.0);
    solve.parts = profile_parts(profile, q);

    solve.report.iterations = best_iters;
    solve.report.starts_used = best_start + 1;
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> masses(static_cast<std::size_t>(q));
        double mean = 0.0;
        for (int j = 0; j < q; ++j) {
            masses[static_cast<std::size_t>(j)] =
                interval_mass(measures[static_cast<std::size_t>(i)],
                              solve.parts[static_cast<std::size_t>(j)]);
            mean += masses[static_cast<std::size_t>(j)];
        }
        mean /= q;
        for (double& v : masses) v -= mean;
        norm = std::max(norm, ZeroSumVector(masses).inf_norm());
        solve.report.blocks.emplace_back(std::move(masses));
    }
    solve.report.residual_norm = norm;
    solve.report.on_zero_set = norm <= cfg.tol;
    solve.report.status =
        norm <= cfg.tol ? SolveStatus::Converged : SolveStatus::BestEffort;
    return solve;
}

}  // namespace

std::vector<std::vector<Interval>> split_parts(const NecklaceSplit& split, int r) {
    std::vector<std::vector<Interval>> parts(static_cast<std::size_t>(r));
    std::vector<double> xs{0.0};
    xs.insert(xs.end(), split.cuts.begin(), split.cuts.end());
    xs.push_back(1.0);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        parts[static_cast<std::size_t>(split.owners[i])].push_back({xs[i], xs[i + 1]});
    return parts;
}

namespace {

// Assemble the global segmentation from per-part interval unions: slivers
// below kTinySegment between same-owner segments are absorbed, cuts between
// same-owner segments are dropped.
NecklaceSplit assemble_split(const std::vector<std::vector<Interval>>& parts) {
    struct Seg {
        double lo, hi;
        int owner;
    };
    std::vector<Seg> segs;
    for (std::size_t j = 0; j < parts.size(); ++j)
        for (const Interval& iv : parts[j])
            if (iv.hi > iv.lo) segs.push_back({iv.lo, iv.hi, static_cast<int>(j)});
    std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.lo < b.lo; });

    std::vector<Seg> merged;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const Seg& s = segs[i];
        if (!merged.empty() && merged.back().owner == s.owner &&
            s.lo - merged.back().hi <= kTinySegment) {
            merged.back().hi = s.hi;
            continue;
        }
        if (s.hi - s.lo < kTinySegment) {
            // a sliver is dropped only between two segments of one part, so
            // its interval lands in that part; it is never handed across
            const int prev = merged.empty() ? -1 : merged.back().owner;
            const int next = i + 1 < segs.size() ? segs[i + 1].owner : -2;
            if (prev == next) continue;
        }
        merged.push_back(s);
    }
    // re-merge in case dropping a sliver united same-owner neighbors
    std::vector<Seg> final_segs;
    for (const Seg& s : merged) {
        if (!final_segs.empty() && final_segs.back().owner == s.owner) {
            final_segs.back().hi = s.hi;
            continue;
        }
        final_segs.push_back(s);
    }

    NecklaceSplit split;
    for (std::size_t i = 0; i < final_segs.size(); ++i) {
        split.owners.push_back(final_segs[i].owner);
        if (i + 1 < final_segs.size()) split.cuts.push_back(final_segs[i].hi);
    }
    return split;
}

}  // namespace

NecklaceResult split_necklace(const std::vector<IntervalMeasure>& measures, int r,
                              const SolverConfig& cfg) {
    if (measures.empty()) throw std::invalid_argument("split_necklace: no measures");
    if (r < 2) throw std::invalid_argument("split_necklace: need r >= 2");

    NecklaceResult result;
    result.parts = r;

    int prime = 0;
    if (is_prime_power(r, prime)) {
        LevelSolve solved = solve_level(measures, r, cfg);
        result.family = std::move(solved.family);
        result.report = std::move(solved.report);
        result.split = assemble_split(solved.parts);
        return result;
    }

    // composite: iterate over the prime-power factors, restricting measures
    const std::vector<int> factors = prime_power_factors(r);
    std::vector<std::vector<Interval>> final_parts(static_cast<std::size_t>(r));
    double worst = 0.0;
    bool all_converged = true;
    int total_iterations = 0, total_starts = 0;

    struct Job {
        std::vector<Interval> window;
        std::size_t level;
        int part_base;
        std::uint64_t seed;
    };
    std::vector<Job> stack{{{{0.0, 1.0}}, 0, 0, cfg.seed}};
    while (!stack.empty()) {
        const Job job = stack.back();
        stack.pop_back();
        const int q = factors[job.level];
        int rest = 1;
        for (std::size_t l = job.level + 1; l < factors.size(); ++l) rest *= factors[l];

        std::vector<IntervalMeasure> local;
        local.reserve(measures.size());
        const bool whole =
            job.window.size() == 1 && job.window[0].lo == 0.0 && job.window[0].hi == 1.0;
        for (const IntervalMeasure& m : measures)
            local.push_back(whole ? m : restrict_interval_measure(m, job.window));

        SolverConfig level_cfg = cfg;
        level_cfg.seed = job.seed;
        LevelSolve solved = solve_level(local, q, level_cfg);
        worst = std::max(worst, solved.report.residual_norm);
        all_converged = all_converged && solved.report.status == SolveStatus::Converged;
        total_iterations += solved.report.iterations;
        total_starts += solved.report.starts_used;
        if (job.level == 0) result.family = solved.family;

        for (int child = 0; child < q; ++child) {
            // intersect the child's intervals with the window
            std::vector<Interval> sub;
            for (const Interval& a : solved.parts[static_cast<std::size_t>(child)])
                for (const Interval& w : job.window) {
                    const double lo = std::max(a.lo, w.lo);
                    const double hi = std::min(a.hi, w.hi);
                    if (hi > lo) sub.push_back({lo, hi});
                }
            const int base = job.part_base + child * rest;
            if (job.level + 1 == factors.size()) {
                auto& dst = final_parts[static_cast<std::size_t>(base)];
                dst.insert(dst.end(), sub.begin(), sub.end());
            } else {
                RngStream mix(job.seed, 0x9e3779b9ULL * (static_cast<std::uint64_t>(child) + 1));
                stack.push_back({std::move(sub), job.level + 1, base, mix.next_u64()});
            }
        }
    }

    result.split = assemble_split(final_parts);
    result.report.status = all_converged ? SolveStatus::Converged : SolveStatus::BestEffort;
    result.report.iterations = total_iterations;
    result.report.starts_used = total_starts;
    // end-to-end residual against the original measures
    const SplitCheck check = verify_split(result.split, measures, r, cfg.tol * factors.size());
    double norm = 0.0;
    for (const auto& row : check.masses)
        for (double v : row) norm = std::max(norm, std::abs(v - 1.0 / r));
    result.report.residual_norm = norm;
    result.report.on_zero_set = check.ok;
    return result;
}

SplitCheck verify_split(const NecklaceSplit& split, const std::vector<IntervalMeasure>& measures,
                        int r, double tol) {
    const std::vector<std::vector<Interval>> parts = split_parts(split, r);
    SplitCheck check;
    check.ok = true;
    check.masses.resize(measures.size());
    for (std::size_t i = 0; i < measures.size(); ++i) {
        check.masses[i].resize(static_cast<std::size_t>(r));
        for (int j = 0; j < r; ++j) {
            const double mass = interval_mass(measures[i], parts[static_cast<std::size_t>(j)]);
            check.masses[i][static_cast<std::size_t>(j)] = mass;
            if (std::abs(mass - 1.0 / r) > tol) check.ok = false;
        }
    }
    return check;
}

}  // namespace equipart
