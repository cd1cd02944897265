#include "equipart/fuks.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace equipart {

int FuksTree::num_vertices() const {
    int n = 1;  // root
    for (const auto& row : child_counts)
        for (int c : row) n += c;
    return n;
}

int FuksTree::num_leaves() const {
    if (child_counts.empty()) return 1;
    int n = 0;
    for (int c : child_counts.back()) n += c;
    return n;
}

namespace {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Compositions of n into parts positive parts, lexicographic.
void compositions(int n, int parts, std::vector<int>& current,
                  const std::function<void(const std::vector<int>&)>& emit) {
    if (parts == 1) {
        current.push_back(n);
        emit(current);
        current.pop_back();
        return;
    }
    for (int first = 1; first <= n - parts + 1; ++first) {
        current.push_back(first);
        compositions(n - first, parts - 1, current, emit);
        current.pop_back();
    }
}

void fill_rows(const std::vector<int>& level_sizes, std::size_t row,
               std::vector<std::vector<int>>& rows, std::vector<FuksCell>& out,
               std::size_t cap) {
    // level_sizes[r] = number of vertices at depth r (root depth 0)
    if (row + 1 == level_sizes.size()) {
        if (out.size() >= cap) throw ResourceLimit("cell enumeration exceeds cap");
        FuksTree tree;
        tree.height = static_cast<int>(level_sizes.size()) - 1;
        tree.child_counts = rows;
        FuksCell cell{tree, tree.num_vertices() - 1};
        out.push_back(std::move(cell));
        return;
    }
    std::vector<int> current;
    compositions(level_sizes[row + 1], level_sizes[row], current,
                 [&](const std::vector<int>& comp) {
                     rows.push_back(comp);
                     fill_rows(level_sizes, row + 1, rows, out, cap);
                     rows.pop_back();
                 });
}

}  // namespace

std::vector<FuksCell> enumerate_cells(int d, int q, int max_dim, std::size_t cap) {
    if (d < 1 || q < 1) throw std::invalid_argument("enumerate_cells: need d >= 1, q >= 1");
    std::vector<FuksCell> cells;

    // depth sizes: 1 = n_root <= ... <= n_leaf = q, with d+1 levels
    std::vector<int> sizes(static_cast<std::size_t>(d) + 1);
    sizes[0] = 1;
    sizes[static_cast<std::size_t>(d)] = q;

    std::function<void(std::size_t)> choose_sizes = [&](std::size_t depth) {
        if (depth == static_cast<std::size_t>(d)) {
            int total = 0;
            for (int s : sizes) total += s;
            if (total - 1 > max_dim) return;
            std::vector<std::vector<int>> rows;
            fill_rows(sizes, 0, rows, cells, cap);
            return;
        }
        const int lo = sizes[depth - 1];
        for (int s = lo; s <= q; ++s) {
            sizes[depth] = s;
            // monotonicity alone cannot bound the partial sum, prune by it
            int partial = 0;
            for (std::size_t i = 0; i <= depth; ++i) partial += sizes[i];
            if (partial + (d - static_cast<int>(depth) - 1) + q - 1 > max_dim) continue;
            choose_sizes(depth + 1);
        }
    };
    if (d == 1) {
        std::vector<std::vector<int>> rows;
        if (1 + q - 1 <= max_dim) fill_rows(sizes, 0, rows, cells, cap);
    } else {
        choose_sizes(1);
    }

    // sanity: the unique minimum cell has dimension d + q - 1
    if (max_dim >= d + q - 1) {
        int at_min = 0;
        for (const FuksCell& c : cells) {
            if (c.dimension < d + q - 1)
                throw InconsistentChain("cell below the minimum dimension");
            if (c.dimension == d + q - 1) ++at_min;
        }
        if (at_min != 1) throw InconsistentChain("minimum-dimension cell is not unique");
    }
    return cells;
}

int permutation_parity(const Permutation& p) {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

Permutation compose(const Permutation& a, const Permutation& b) {
    Permutation c(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        c[i] = a[static_cast<std::size_t>(b[i])];
    return c;
}

std::vector<Permutation> shuffles(int k, int q) {
    if (k < 1 || k >= q) throw std::invalid_argument("shuffles: need 1 <= k <= q-1");
    std::vector<Permutation> out;
    std::vector<int> subset(static_cast<std::size_t>(k));
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
        Permutation sigma(static_cast<std::size_t>(q));
        std::vector<bool> used(static_cast<std::size_t>(q), false);
        for (int i = 0; i < k; ++i) {
            sigma[static_cast<std::size_t>(i)] = subset[static_cast<std::size_t>(i)];
            used[static_cast<std::size_t>(subset[static_cast<std::size_t>(i)])] = true;
        }
        int at = k;
        for (int v = 0; v < q; ++v)
            if (!used[static_cast<std::size_t>(v)]) sigma[static_cast<std::size_t>(at++)] = v;
        out.push_back(std::move(sigma));

        // next k-subset in lexicographic order
        int i = k - 1;
        while (i >= 0 && subset[static_cast<std::size_t>(i)] == q - k + i) --i;
        if (i < 0) break;
        ++subset[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

SignedChain two_block_cell_boundary(int q, int k) {
    SignedChain chain;
    for (const Permutation& sigma : shuffles(k, q))
        chain.terms[sigma] += permutation_parity(sigma);
    return chain;
}

namespace {

// Lehmer rank in the factorial number system.
std::size_t rank_of(const Permutation& p) {
    const std::size_t n = p.size();
    std::size_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (p[j] < p[i]) ++smaller;
        rank = rank * (n - i) + static_cast<std::size_t>(smaller);
    }
    return rank;
}

}  // namespace

long long equivariant_coefficient(int q, int k, int cap) {
    if (k < 1 || k >= q) throw std::invalid_argument("equivariant_coefficient: bad k");
    if (q > cap)
        throw ResourceLimit("equivariant_coefficient: q = " + std::to_string(q) +
                            " exceeds the enumeration cap " + std::to_string(cap));

    std::size_t factorial = 1;
    for (int i = 2; i <= q; ++i) factorial *= static_cast<std::size_t>(i);

    const std::vector<Permutation> shf = shuffles(k, q);
    std::vector<int> shf_parity(shf.size());
    for (std::size_t s = 0; s < shf.size(); ++s) shf_parity[s] = permutation_parity(shf[s]);

    std::vector<long long> coeff(factorial, 0);
    Permutation tau(static_cast<std::size_t>(q));
    std::iota(tau.begin(), tau.end(), 0);
    do {
        const int pt = permutation_parity(tau);
        for (std::size_t s = 0; s < shf.size(); ++s)
            coeff[rank_of(compose(tau, shf[s]))] += static_cast<long long>(pt) * shf_parity[s];
    } while (std::next_permutation(tau.begin(), tau.end()));

    // every labeled cell must carry c * parity for one integer c
    Permutation rho(static_cast<std::size_t>(q));
    std::iota(rho.begin(), rho.end(), 0);
    const long long c = coeff[rank_of(rho)];
    do {
        if (coeff[rank_of(rho)] != c * permutation_parity(rho))
            throw InconsistentChain("orbit coefficients are not proportional to parity");
    } while (std::next_permutation(rho.begin(), rho.end()));
    return c;
}

DivisibilityReport check_divisibility(int q, int chain_cap) {
    if (q < 2) throw std::invalid_argument("check_divisibility: need q >= 2");
    DivisibilityReport report;
    report.q = q;

    int rest = q;
    for (int p = 2; p * p <= rest; ++p) {
        if (rest % p) continue;
        while (rest % p == 0) rest /= p;
        report.prime = p;
        break;
    }
    if (report.prime == 0) report.prime = rest;  // q itself prime
    else if (rest != 1) report.prime = 0;        // two distinct prime factors
    report.is_prime_power = report.prime != 0;

    report.via_chain = q <= chain_cap;
    long long gcd = 0;
    for (int k = 1; k < q; ++k) {
        const long long c =
            report.via_chain ? equivariant_coefficient(q, k, chain_cap) : binomial(q, k);
        DivisibilityRow row{k, c, report.is_prime_power && c % report.prime == 0};
        gcd = std::gcd(gcd, c);
        report.rows.push_back(row);
    }
    report.gcd_over_k = gcd;
    return report;
}

std::vector<ZeroSumVector> configuration_residual(const PointConfiguration& pts) {
    const std::size_t q = pts.points.size();
    if (q == 0) throw std::invalid_argument("configuration_residual: empty configuration");
    const std::size_t d = pts.points.front().size();
    for (const auto& row : pts.points)
        if (row.size() != d) throw std::invalid_argument("configuration_residual: ragged rows");

    std::vector<ZeroSumVector> blocks;
    blocks.reserve(d > 0 ? d - 1 : 0);
    for (std::size_t j = 1; j < d; ++j) {
        std::vector<double> column(q);
        double mean = 0.0;
        for (std::size_t i = 0; i < q; ++i) {
            column[i] = pts.points[i][j];
            mean += column[i];
        }
        mean /= static_cast<double>(q);
        for (double& v : column) v -= mean;
        blocks.emplace_back(std::move(column));
    }
    return blocks;
}

}  // namespace equipart
