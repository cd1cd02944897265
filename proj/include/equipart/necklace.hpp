#pragma once

#include <vector>

#include "equipart/envelope.hpp"
#include "equipart/measures.hpp"
#include "equipart/solver.hpp"

namespace equipart {

// Segmentation of [0,1]: cuts ascending in (0,1), owners[i] in {0..r-1} is
// the part owning the i-th segment.
struct NecklaceSplit {
    std::vector<double> cuts;
    std::vector<int> owners;
};

struct NecklaceResult {
    NecklaceSplit split;
    SolveReport report;
    std::vector<Polynomial1D> family;  // family of the final (or only) level
    int parts = 0;
};

// Interval union of each part.
std::vector<std::vector<Interval>> split_parts(const NecklaceSplit& split, int r);

// Splits every measure into r equal parts using the argmax partition of r
// polynomials of degree <= n (n = measures.size()).  Prime-power r solves
// directly; composite r iterates over the prime-power factors with measures
// restricted and renormalized.  The achieved cut count is reported, not
// bounded: for n >= 3 the envelope complexity may exceed n(r-1).
NecklaceResult split_necklace(const std::vector<IntervalMeasure>& measures, int r,
                              const SolverConfig& cfg);

struct SplitCheck {
    bool ok = false;
    std::vector<std::vector<double>> masses;  // [measure][part]
};

SplitCheck verify_split(const NecklaceSplit& split, const std::vector<IntervalMeasure>& measures,
                        int r, double tol);

}  // namespace equipart
