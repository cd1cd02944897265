#include "equipart/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "equipart/rng.hpp"

namespace equipart {

int Polynomial1D::degree() const {
    for (int k = static_cast<int>(coefficients.size()) - 1; k >= 0; --k)
        if (coefficients[static_cast<std::size_t>(k)] != 0.0) return k;
    return 0;
}

double Polynomial1D::operator()(double x) const {
    double v = 0.0;
    for (std::size_t k = coefficients.size(); k-- > 0;) v = v * x + coefficients[k];
    return v;
}

Polynomial1D Polynomial1D::derivative() const {
    Polynomial1D d;
    for (std::size_t k = 1; k < coefficients.size(); ++k)
        d.coefficients.push_back(static_cast<double>(k) * coefficients[k]);
    if (d.coefficients.empty()) d.coefficients.push_back(0.0);
    return d;
}

Polynomial1D subtract(const Polynomial1D& a, const Polynomial1D& b) {
    Polynomial1D d;
    d.coefficients.resize(std::max(a.coefficients.size(), b.coefficients.size()), 0.0);
    for (std::size_t k = 0; k < a.coefficients.size(); ++k) d.coefficients[k] += a.coefficients[k];
    for (std::size_t k = 0; k < b.coefficients.size(); ++k) d.coefficients[k] -= b.coefficients[k];
    return d;
}

namespace {

// Leading coefficients below noise level are treated as zero so that a
// nominal degree does not force spurious root hunting.
std::vector<double> trimmed(const std::vector<double>& c) {
    double cmax = 0.0;
    for (double v : c) cmax = std::max(cmax, std::abs(v));
    std::vector<double> out = c;
    while (out.size() > 1 && std::abs(out.back()) <= 1e-14 * cmax) out.pop_back();
    return out;
}

double poly_value_scale(const std::vector<double>& c, double lo, double hi) {
    const double x = std::max({std::abs(lo), std::abs(hi), 1.0});
    double s = 0.0, p = 1.0;
    for (double v : c) {
        s += std::abs(v) * p;
        p *= x;
    }
    return std::max(s, 1e-300);
}

double eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

// One root inside a monotone bracket with a strict sign change.
double bisect_root(const std::vector<double>& c, const std::vector<double>& dc, double lo,
                   double hi) {
    double flo = eval(c, lo);
    for (int step = 0; step < 80; ++step) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval(c, mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-16 * std::max(1.0, std::abs(mid))) break;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {  // Newton polish within the bracket
        const double d = eval(dc, x);
        if (d == 0.0) break;
        const double step = eval(c, x) / d;
        const double xn = x - step;
        if (xn < lo || xn > hi) break;
        x = xn;
    }
    return x;
}

void scan_roots(const std::vector<double>& c, double lo, double hi, RootScan& out);

// Collect candidate subdivision points: the critical points of the piece.
std::vector<double> critical_points(const std::vector<double>& c, double lo, double hi) {
    std::vector<double> dc;
    for (std::size_t k = 1; k < c.size(); ++k) dc.push_back(static_cast<double>(k) * c[k]);
    dc = trimmed(dc);
    if (dc.size() <= 1) return {};  // constant derivative: monotone piece
    RootScan scan;
    scan_roots(dc, lo, hi, scan);
    std::vector<double> xs;
    for (const RootInfo& r : scan.roots) xs.push_back(r.x);
    return xs;
}

void scan_roots(const std::vector<double>& c, double lo, double hi, RootScan& out) {
    const std::vector<double> p = trimmed(c);
    const int d = static_cast<int>(p.size()) - 1;
    if (d <= 0) return;
    if (d == 1) {
        const double x = -p[0] / p[1];
        if (x >= lo && x <= hi) out.roots.push_back({x, true});
        return;
    }
    if (d == 2) {
        const double a = p[2], b = p[1], cc = p[0];
        const double disc = b * b - 4.0 * a * cc;
        const double scale = b * b + std::abs(4.0 * a * cc);
        if (disc > 1e-14 * scale) {
            const double s = std::sqrt(disc);
            const double qq = -0.5 * (b + (b >= 0.0 ? s : -s));
            double r1 = qq / a;
            double r2 = cc / qq;
            if (r1 > r2) std::swap(r1, r2);
            if (r1 >= lo && r1 <= hi) out.roots.push_back({r1, true});
            if (r2 >= lo && r2 <= hi) out.roots.push_back({r2, true});
        } else if (disc >= -1e-14 * scale) {
            const double x = -b / (2.0 * a);
            if (x >= lo && x <= hi) out.roots.push_back({x, false});
        }
        return;
    }

    std::vector<double> dc;
    for (std::size_t k = 1; k < p.size(); ++k) dc.push_back(static_cast<double>(k) * p[k]);

    std::vector<double> nodes{lo};
    for (double x : critical_points(p, lo, hi))
        if (x > nodes.back() + 1e-15) nodes.push_back(x);
    if (hi > nodes.back()) nodes.push_back(hi);

    const double ztol = 1e-11 * poly_value_scale(p, lo, hi);
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = eval(p, nodes[i]);

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::abs(vals[i]) > ztol) continue;
        // node sits on the axis: a tangential or transversal root at a
        // critical point or interval end
        bool odd = false;
        if (i > 0 && i + 1 < nodes.size())
            odd = (vals[i - 1] < 0.0) != (vals[i + 1] < 0.0);
        out.roots.push_back({nodes[i], odd});
    }
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (std::abs(vals[i]) <= ztol || std::abs(vals[i + 1]) <= ztol) continue;
        if ((vals[i] < 0.0) == (vals[i + 1] < 0.0)) continue;
        out.roots.push_back({bisect_root(p, dc, nodes[i], nodes[i + 1]), true});
    }
}

}  // namespace

RootScan real_roots(const Polynomial1D& p, double lo, double hi) {
    if (lo > hi) std::swap(lo, hi);
    const std::vector<double> c = trimmed(p.coefficients);
    if (c.size() == 1 && c[0] == 0.0)
        throw std::invalid_argument("real_roots: polynomial is identically zero");

    RootScan out;
    scan_roots(c, lo, hi, out);
    std::sort(out.roots.begin(), out.roots.end(),
              [](const RootInfo& a, const RootInfo& b) { return a.x < b.x; });

    // merge duplicates found from adjacent pieces
    const double merge_tol = 1e-12 * std::max({std::abs(lo), std::abs(hi), 1.0});
    std::vector<RootInfo> unique;
    for (const RootInfo& r : out.roots) {
        if (!unique.empty() && r.x - unique.back().x <= merge_tol) {
            unique.back().odd_crossing = unique.back().odd_crossing || r.odd_crossing;
            continue;
        }
        unique.push_back(r);
    }
    out.roots = std::move(unique);
    // an even-multiplicity report is a collapsed pair at separation zero, so
    // it is flagged along with genuinely close pairs
    for (const RootInfo& r : out.roots)
        if (!r.odd_crossing) out.ill_conditioned = true;
    for (std::size_t i = 0; i + 1 < out.roots.size(); ++i)
        if (out.roots[i + 1].x - out.roots[i].x < 1e-10) out.ill_conditioned = true;
    return out;
}

EnvelopeProfile upper_envelope(const std::vector<Polynomial1D>& polys, double lo, double hi) {
    const std::size_t q = polys.size();
    if (q == 0) throw std::invalid_argument("upper_envelope: empty family");
    EnvelopeProfile profile;
    profile.lo = lo;
    profile.hi = hi;
    if (q == 1) {
        profile.active = {0};
        return profile;
    }

    std::vector<double> candidates;
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = i + 1; j < q; ++j) {
            const Polynomial1D diff = subtract(polys[i], polys[j]);
            const std::vector<double> dc = trimmed(diff.coefficients);
            double dmax = 0.0;
            for (double v : dc) dmax = std::max(dmax, std::abs(v));
            if (dmax == 0.0)
                throw DegenerateFamily("upper_envelope: members " + std::to_string(i) + " and " +
                                       std::to_string(j) + " are identical");
            for (const RootInfo& r : real_roots(diff, lo, hi).roots)
                if (r.x > lo && r.x < hi) candidates.push_back(r.x);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    const double merge_tol = 1e-11 * std::max({std::abs(lo), std::abs(hi), 1.0});
    std::vector<double> xs{lo};
    for (double x : candidates)
        if (x > xs.back() + merge_tol) xs.push_back(x);
    if (hi > xs.back()) xs.push_back(hi);

    auto argmax_at = [&](double x) {
        int best = 0;
        double best_v = polys[0](x);
        for (std::size_t j = 1; j < q; ++j) {
            const double v = polys[j](x);
            if (v > best_v) {
                best_v = v;
                best = static_cast<int>(j);
            }
        }
        return best;
    };

    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const int who = argmax_at(0.5 * (xs[i] + xs[i + 1]));
        if (profile.active.empty() || profile.active.back() != who) {
            if (!profile.active.empty()) profile.breakpoints.push_back(xs[i]);
            profile.active.push_back(who);
        }
    }
    if (profile.active.empty()) profile.active.push_back(argmax_at(0.5 * (lo + hi)));
    return profile;
}

int switch_count(const EnvelopeProfile& profile) {
    return static_cast<int>(profile.breakpoints.size());
}

DSWord ds_word(const EnvelopeProfile& profile) { return {profile.active}; }

bool ds_check(const DSWord& word, int s) {
    // longest alternation a,b,a,b,... found greedily per ordered pair
    std::vector<int> alphabet = word.symbols;
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    for (int a : alphabet) {
        for (int b : alphabet) {
            if (a == b) continue;
            int expect = a, len = 0;
            for (int sym : word.symbols) {
                if (sym == expect) {
                    ++len;
                    expect = (expect == a) ? b : a;
                }
            }
            if (len >= s + 2) return false;
        }
    }
    return true;
}

EnvelopeSearchResult search_superlinear(int n, int q, int trials, std::uint64_t seed) {
    if (n < 1 || q < 2) throw std::invalid_argument("search_superlinear: need n >= 1, q >= 2");
    EnvelopeSearchResult result;
    result.bound = n * (q - 1);

    RngStream rng(seed);
    auto random_family = [&]() {
        std::vector<Polynomial1D> family(q);
        for (int j = 0; j < q; ++j) {
            family[j].coefficients.resize(static_cast<std::size_t>(n) + 1);
            for (double& c : family[j].coefficients) c = rng.normal();
        }
        return family;
    };
    auto perturbed = [&](const std::vector<Polynomial1D>& base) {
        std::vector<Polynomial1D> family = base;
        const double scale = std::pow(10.0, rng.uniform(-3.0, -0.5));
        for (Polynomial1D& p : family)
            for (double& c : p.coefficients) c += scale * rng.normal();
        return family;
    };
    auto family_range = [&](const std::vector<Polynomial1D>& family) {
        // all pairwise crossings lie within the Cauchy bound of the differences
        double r = 1.0;
        for (std::size_t i = 0; i < family.size(); ++i) {
            for (std::size_t j = i + 1; j < family.size(); ++j) {
                const std::vector<double> d = trimmed(subtract(family[i], family[j]).coefficients);
                if (d.size() <= 1) continue;
                double m = 0.0;
                for (std::size_t k = 0; k + 1 < d.size(); ++k) m = std::max(m, std::abs(d[k]));
                r = std::max(r, 1.0 + m / std::abs(d.back()));
            }
        }
        return std::min(r, 1e4);
    };

    for (int t = 0; t < std::max(trials, 1); ++t) {
        std::vector<Polynomial1D> family =
            (t % 2 == 0 || result.best_family.empty()) ? random_family()
                                                       : perturbed(result.best_family);
        const double r = family_range(family);
        int count = 0;
        try {
            count = switch_count(upper_envelope(family, -r, r));
        } catch (const DegenerateFamily&) {
            continue;
        }
        if (count > result.best_switches || result.best_family.empty()) {
            result.best_switches = count;
            result.best_family = std::move(family);
            result.interval_lo = -r;
            result.interval_hi = r;
        }
    }
    result.exceeded = result.best_switches > result.bound;
    return result;
}

}  // namespace equipart
