#pragma once

#include <cstdint>
#include <vector>

#include "equipart/errors.hpp"

namespace equipart {

// Real polynomial with ascending-degree coefficients.
struct Polynomial1D {
    std::vector<double> coefficients;

    int degree() const;
    double operator()(double x) const;
    Polynomial1D derivative() const;
};

Polynomial1D subtract(const Polynomial1D& a, const Polynomial1D& b);

struct RootInfo {
    double x = 0.0;
    bool odd_crossing = true;  // false for even-multiplicity touches
};

struct RootScan {
    std::vector<RootInfo> roots;       // sorted
    bool ill_conditioned = false;      // two roots closer than 1e-10
};

// All real roots of p in [lo, hi].  Critical points of p are found by
// recursion on the derivative; each monotone piece holds at most one sign
// change, isolated by bisection and polished by Newton.  Roots of even
// multiplicity are reported once with the crossing flag cleared.
RootScan real_roots(const Polynomial1D& p, double lo, double hi);

// Piecewise description of max_j f_j over an interval: `active[i]` attains
// the maximum strictly between breakpoints i-1 and i.
struct EnvelopeProfile {
    double lo = 0.0, hi = 0.0;
    std::vector<double> breakpoints;  // strictly inside (lo, hi)
    std::vector<int> active;          // size breakpoints.size() + 1; consecutive entries differ
};

EnvelopeProfile upper_envelope(const std::vector<Polynomial1D>& polys, double lo, double hi);

int switch_count(const EnvelopeProfile& profile);

// Active-index word of an envelope; no two consecutive symbols are equal.
struct DSWord {
    std::vector<int> symbols;
};

DSWord ds_word(const EnvelopeProfile& profile);

// True when the word contains no alternating subsequence a,b,a,b,... of
// length s + 2 (the standard Davenport-Schinzel order-s condition).
bool ds_check(const DSWord& word, int s);

struct EnvelopeSearchResult {
    std::vector<Polynomial1D> best_family;
    int best_switches = 0;
    int bound = 0;          // n * (q - 1)
    bool exceeded = false;  // best_switches > bound
    double interval_lo = 0.0, interval_hi = 0.0;
};

// Randomized search (fresh draws interleaved with perturbations of the
// incumbent) for families of q degree-<=n polynomials with many envelope
// switches.  Reports whether any family beat n*(q-1); no guarantee either way.
EnvelopeSearchResult search_superlinear(int n, int q, int trials, std::uint64_t seed);

}  // namespace equipart
