#include <doctest.h>

#include "klim/random.hpp"
#include "klim/ratlin.hpp"

using namespace klim;

namespace {

SparseMatrix M(std::vector<std::vector<int>> rows)
{
    std::vector<std::vector<Rational>> r;
    for (auto& row : rows)
        r.emplace_back(row.begin(), row.end());
    return SparseMatrix::from_rows(r);
}

SparseVector V(std::vector<int> dense)
{
    SparseVector v;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i])
            v.emplace_back(i, Rational(dense[i]));
    return v;
}

SparseMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c)
{
    SparseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (uniform_index(rng, 3) == 0)
                m.add(i, j, Rational(static_cast<long>(uniform_index(rng, 7)) - 3));
    return m;
}

} // namespace

TEST_CASE("rank")
{
    CHECK(rank(SparseMatrix(3, 3)) == 0);
    CHECK(rank(SparseMatrix::identity(4)) == 4);
    CHECK(rank(M({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("kernel basis")
{
    CHECK(kernel_basis(SparseMatrix::identity(3)).empty());
    auto k = kernel_basis(M({{1, -1}}));
    REQUIRE(k.size() == 1);
    CHECK(k[0] == V({1, 1}));
    auto k2 = kernel_basis(M({{1, 2}, {2, 4}}));
    REQUIRE(k2.size() == 1);
    // proportional to (2,-1)
    const Rational ratio = k2[0][0].second / Rational(2);
    CHECK(k2[0] == SparseVector{{0, 2 * ratio}, {1, -ratio}});
}

TEST_CASE("image basis")
{
    CHECK(image_basis(SparseMatrix(2, 2)).empty());
    CHECK(image_basis(SparseMatrix::identity(3)).size() == 3);
    auto im = image_basis(M({{1}, {1}}));
    REQUIRE(im.size() == 1);
    CHECK(im[0] == V({1, 1}));
}

TEST_CASE("homology_dim")
{
    CHECK(homology_dim(SparseMatrix(0, 5), SparseMatrix(5, 0)) == 5);
    // 0 -> Q --1--> Q -> 0 is exact in the middle
    CHECK(homology_dim(SparseMatrix(0, 1), M({{1}})) == 0);
    // middle dim 3, rank(d_in) = 1, d_out = 0
    CHECK(homology_dim(SparseMatrix(0, 3), M({{1}, {1}, {0}})) == 2);
    CHECK_THROWS_AS(homology_dim(M({{1, 0}}), M({{1}, {1}})), VerificationFailure);
    CHECK_THROWS_AS(homology_dim(M({{1, 0}}), M({{1}})), InvalidInput);
}

TEST_CASE("span membership and quotients")
{
    VectorSpaceBasis b(2, {V({0, 1})});
    CHECK(in_span(SparseVector{}, b));
    CHECK_FALSE(in_span(V({1, 0}), b));
    CHECK(in_span(V({2, 2}), VectorSpaceBasis(2, {V({1, 1})})));
    CHECK_THROWS_AS(VectorSpaceBasis(2, {V({1, 1}), V({2, 2})}), InvalidInput);

    VectorSpaceBasis cyc(2, {V({1, 0}), V({0, 1})});
    CHECK(quotient_representatives(cyc, VectorSpaceBasis(2)).size() == 2);
    CHECK(quotient_representatives(cyc, cyc).empty());
    auto q = quotient_representatives(cyc, VectorSpaceBasis(2, {V({1, 1})}));
    REQUIRE(q.size() == 1);
    CHECK_FALSE(in_span(q[0], VectorSpaceBasis(2, {V({1, 1})})));
    CHECK_THROWS_AS(quotient_representatives(VectorSpaceBasis(2, {V({1, 0})}), VectorSpaceBasis(2, {V({0, 1})})),
                    InvalidInput);
}

TEST_CASE("rank-nullity and transpose rank on random matrices")
{
    Rng rng(20240611);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t r = 1 + uniform_index(rng, 9);
        const std::size_t c = 1 + uniform_index(rng, 9);
        SparseMatrix m = random_matrix(rng, r, c);
        const std::size_t rk = rank(m);
        auto ker = kernel_basis(m);
        CHECK(rk + ker.size() == c);
        CHECK(rank(m.transposed()) == rk);
        CHECK(image_basis(m).size() == rk);
        for (const auto& v : ker.vectors()) {
            SparseMatrix col(c, 1);
            for (const auto& [i, x] : v)
                col.add(i, 0, x);
            CHECK((m * col).is_zero());
        }
    }
}

TEST_CASE("exact arithmetic survives entry growth")
{
    // Hilbert matrix: full rank, badly conditioned in floating point
    const std::size_t n = 12;
    SparseMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h.add(i, j, Rational(1, static_cast<unsigned long>(i + j + 1)));
    CHECK(rank(h) == n);
}
