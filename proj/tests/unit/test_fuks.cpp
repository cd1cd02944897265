#include <doctest.h>

#include <cmath>
#include <numeric>

#include "equipart/fuks.hpp"
#include "equipart/rng.hpp"
#include "oracles.hpp"

using namespace equipart;

namespace {

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_SUITE("fuks") {

TEST_CASE("configuration residual vanishes exactly on axis-parallel lines") {
    PointConfiguration pts;
    pts.points = {{0.0, 2.0, -1.0}, {3.5, 2.0, -1.0}, {-1.2, 2.0, -1.0}};
    for (const ZeroSumVector& block : configuration_residual(pts))
        CHECK(block.inf_norm() == 0.0);
}

TEST_CASE("configuration residual of two stacked points") {
    PointConfiguration pts;
    pts.points = {{0.0, 0.0}, {0.0, 1.0}};
    const auto blocks = configuration_residual(pts);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].entries[0] == doctest::Approx(-0.5));
    CHECK(blocks[0].entries[1] == doctest::Approx(0.5));
}

TEST_CASE("configuration residual blocks sum to zero and detect non-collinearity") {
    RngStream rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        PointConfiguration pts;
        const int q = 2 + static_cast<int>(rng.below(4));
        const int d = 2 + static_cast<int>(rng.below(3));
        pts.points.assign(static_cast<std::size_t>(q), {});
        for (auto& row : pts.points)
            for (int j = 0; j < d; ++j) row.push_back(rng.uniform(-1, 1));
        bool nonzero = false;
        for (const ZeroSumVector& block : configuration_residual(pts)) {
            double sum = 0.0;
            for (double v : block.entries) sum += v;
            CHECK(sum == doctest::Approx(0.0).epsilon(1e-15));
            if (block.inf_norm() > 1e-6) nonzero = true;
        }
        CHECK(nonzero);  // random configurations are never axis-collinear
    }
}

TEST_CASE("the minimum cell is unique in the plane with three points") {
    const auto cells = enumerate_cells(2, 3, 4);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].dimension == 4);
    CHECK(cells[0].tree.num_vertices() == 5);
    CHECK(cells[0].tree.num_leaves() == 3);
}

TEST_CASE("two points on a line have a unique dimension-2 cell") {
    const auto cells = enumerate_cells(1, 2, 2);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].dimension == 2);
}

TEST_CASE("dimension counts match the brute-force tree oracle") {
    for (int d = 1; d <= 3; ++d) {
        for (int q = 2; q <= 4; ++q) {
            const int max_dim = d + q + 1;
            const auto cells = enumerate_cells(d, q, max_dim);
            for (int dim = d + q - 1; dim <= max_dim; ++dim) {
                long long ours = 0;
                for (const FuksCell& c : cells)
                    if (c.dimension == dim) ++ours;
                CHECK(ours == oracle::count_tree_shapes(d, q, dim + 1));
            }
        }
    }
}

TEST_CASE("three-dimensional four-point cells at the next dimension") {
    const auto cells = enumerate_cells(3, 4, 7);
    long long at6 = 0, at7 = 0;
    for (const FuksCell& c : cells) {
        if (c.dimension == 6) ++at6;
        if (c.dimension == 7) ++at7;
    }
    CHECK(at6 == 1);
    CHECK(at7 == 3);  // one chain refinement with three leaf compositions
    CHECK(at7 == oracle::count_tree_shapes(3, 4, 8));
}

TEST_CASE("every cell dimension is vertex count minus one") {
    for (const FuksCell& c : enumerate_cells(2, 4, 8))
        CHECK(c.dimension == c.tree.num_vertices() - 1);
}

TEST_CASE("shuffles of (1,1) are the two permutations") {
    const auto out = shuffles(1, 2);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == Permutation{0, 1});
    CHECK(out[1] == Permutation{1, 0});
}

TEST_CASE("shuffle counts and monotonicity") {
    for (int q = 2; q <= 7; ++q) {
        for (int k = 1; k < q; ++k) {
            const auto out = shuffles(k, q);
            CHECK(static_cast<long long>(out.size()) == binom(q, k));
            for (const Permutation& sigma : out) {
                for (int i = 1; i < k; ++i) CHECK(sigma[i - 1] < sigma[i]);
                for (int i = k + 1; i < q; ++i) CHECK(sigma[i - 1] < sigma[i]);
            }
        }
    }
}

TEST_CASE("two-block boundary for q=2 has two opposite-sign terms") {
    const SignedChain chain = two_block_cell_boundary(2, 1);
    REQUIRE(chain.terms.size() == 2);
    const auto id = chain.terms.at({0, 1});
    const auto swap = chain.terms.at({1, 0});
    CHECK(id == -swap);
    CHECK(std::abs(id) == 1);
}

TEST_CASE("two-block boundary for q=3, k=1 alternates signs in parity order") {
    const SignedChain chain = two_block_cell_boundary(3, 1);
    REQUIRE(chain.terms.size() == 3);
    CHECK(chain.terms.at({0, 1, 2}) == 1);
    CHECK(chain.terms.at({1, 0, 2}) == -1);
    CHECK(chain.terms.at({2, 0, 1}) == 1);
}

TEST_CASE("two-block boundary signs are the shuffle parities") {
    const SignedChain chain = two_block_cell_boundary(4, 2);
    REQUIRE(chain.terms.size() == 6);
    for (const auto& [labeling, coeff] : chain.terms) {
        // independent parity via inversion count
        int inversions = 0;
        for (std::size_t i = 0; i < labeling.size(); ++i)
            for (std::size_t j = i + 1; j < labeling.size(); ++j)
                if (labeling[i] > labeling[j]) ++inversions;
        CHECK(coeff == (inversions % 2 == 0 ? 1 : -1));
    }
}

TEST_CASE("equivariant coefficients reproduce binomials") {
    CHECK(equivariant_coefficient(2, 1) == 2);
    CHECK(equivariant_coefficient(4, 2) == 6);
    const long long c52 = equivariant_coefficient(5, 2);
    CHECK(c52 == 10);
    CHECK(c52 % 5 == 0);
}

TEST_CASE("sign multiplicativity over all pairs up to q = 5") {
    for (int q = 2; q <= 5; ++q) {
        std::vector<Permutation> all;
        Permutation p(static_cast<std::size_t>(q));
        std::iota(p.begin(), p.end(), 0);
        do all.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        for (const Permutation& a : all)
            for (const Permutation& b : all)
                CHECK(permutation_parity(compose(a, b)) ==
                      permutation_parity(a) * permutation_parity(b));
    }
}

TEST_CASE("prime powers divide every coefficient") {
    const DivisibilityReport q4 = check_divisibility(4);
    REQUIRE(q4.is_prime_power);
    CHECK(q4.prime == 2);
    REQUIRE(q4.rows.size() == 3);
    CHECK(q4.rows[0].coefficient == 4);
    CHECK(q4.rows[1].coefficient == 6);
    CHECK(q4.rows[2].coefficient == 4);
    for (const DivisibilityRow& row : q4.rows) CHECK(row.divisible);
}

TEST_CASE("q=9 uses the direct binomial route and divides by 3") {
    const DivisibilityReport q9 = check_divisibility(9);
    REQUIRE(q9.is_prime_power);
    CHECK(q9.prime == 3);
    CHECK_FALSE(q9.via_chain);
    for (const DivisibilityRow& row : q9.rows) {
        CHECK(row.coefficient == binom(9, row.k));
        CHECK(row.divisible);
    }
}

TEST_CASE("q=6 coefficients share no factor") {
    const DivisibilityReport q6 = check_divisibility(6);
    CHECK_FALSE(q6.is_prime_power);
    REQUIRE(q6.rows.size() == 5);
    CHECK(q6.rows[0].coefficient == 6);
    CHECK(q6.rows[1].coefficient == 15);
    CHECK(q6.rows[2].coefficient == 20);
    CHECK(q6.rows[3].coefficient == 15);
    CHECK(q6.rows[4].coefficient == 6);
    CHECK(q6.gcd_over_k == 1);
}

TEST_CASE("the enumeration caps are enforced") {
    CHECK_THROWS_AS(equivariant_coefficient(9, 1, 8), ResourceLimit);
    CHECK_THROWS_AS(enumerate_cells(3, 6, 12, 4), ResourceLimit);
}

}  // TEST_SUITE
