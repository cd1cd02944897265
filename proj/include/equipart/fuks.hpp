#pragma once

#include <map>
#include <optional>
#include <vector>

#include "equipart/residuals.hpp"

namespace equipart {

// Graded ordered tree of height d: levels run 1..d+1 from the leaves to the
// root, every vertex above level 1 has at least one child, and the q leaves
// all sit on level 1.  Row r of child_counts lists, left to right, the child
// counts of the vertices at depth r below the root, so row 0 has one entry
// and row d-1 sums to q.  Such a tree encodes an open stratum of the
// configuration space of q labeled points in R^d: siblings order their
// descendants' coordinate at the corresponding depth.
struct FuksTree {
    int height = 1;
    std::vector<std::vector<int>> child_counts;
    std::optional<std::vector<int>> leaf_labels;  // left-to-right labels, 0-based

    int num_vertices() const;
    int num_leaves() const;
};

struct FuksCell {
    FuksTree tree;
    int dimension = 0;  // number of vertices minus one
};

// All unlabeled cell shapes of height d with q leaves and dimension at most
// max_dim.  Verifies as a side effect that the unique minimum-dimension cell
// is the single chain-with-one-branching tree of dimension d + q - 1.
std::vector<FuksCell> enumerate_cells(int d, int q, int max_dim, std::size_t cap = 200000);

// ---- permutations ----------------------------------------------------------

using Permutation = std::vector<int>;  // images, 0-based

int permutation_parity(const Permutation& p);  // +1 or -1
Permutation compose(const Permutation& a, const Permutation& b);  // (a∘b)(i) = a[b[i]]

// Permutations increasing on the first k positions and on the rest; there
// are binom(q, k) of them.
std::vector<Permutation> shuffles(int k, int q);

// ---- chains ----------------------------------------------------------------

// Integer chain over labeled minimum-dimension cells; the key is the
// left-to-right leaf labeling.
struct SignedChain {
    std::map<std::vector<int>, long long> terms;
};

// Boundary of the cell whose leaves split into two increasing blocks of
// sizes k and q-k, written over the labeled minimum cells: one term per
// (k, q-k) shuffle, signed by the permutation parity.
SignedChain two_block_cell_boundary(int q, int k);

// Expands the boundary of the full signed orbit sum of the two-block cell
// and checks that every labeled minimum cell appears with coefficient
// c * parity; returns c (= binom(q, k)).  Throws InconsistentChain if the
// coefficients fail to be proportional to the parities, and ResourceLimit
// when q exceeds the enumeration cap.
long long equivariant_coefficient(int q, int k, int cap = 8);

struct DivisibilityRow {
    int k = 0;
    long long coefficient = 0;
    bool divisible = false;  // by the base prime, when q is a prime power
};

struct DivisibilityReport {
    int q = 0;
    bool is_prime_power = false;
    int prime = 0;  // base prime when q = p^l, else 0
    bool via_chain = false;  // coefficients from the chain expansion (q within cap)
    std::vector<DivisibilityRow> rows;
    long long gcd_over_k = 0;
};

// For prime powers every row must be divisible by the base prime; otherwise
// the gcd over k collapses to 1, which is exactly why the equal-partition
// obstruction needs prime powers.
DivisibilityReport check_divisibility(int q, int chain_cap = 8);

// ---- reference residual on point configurations -----------------------------

struct PointConfiguration {
    std::vector<std::vector<double>> points;  // q rows, d columns
};

// Blocks j = 2..d: centered j-th coordinates of the points.  All blocks
// vanish exactly when the configuration lies on a line parallel to the
// first axis.
std::vector<ZeroSumVector> configuration_residual(const PointConfiguration& pts);

}  // namespace equipart
