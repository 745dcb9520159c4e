#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ellfib/exact_linalg.hpp"
#include "oracles.hpp"

using namespace ellfib;

namespace {

IntMatrix from(const oracle::Matrix& m, std::size_t cols) {
    IntMatrix out(m.size(), cols);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = m[i][j];
    return out;
}

void check_decomposition(const IntMatrix& A) {
    const auto snf = smith_normal_form(A);
    CHECK(snf.U * snf.D * snf.V == A);
    CHECK(abs(snf.U.determinant()) == 1);
    CHECK(abs(snf.V.determinant()) == 1);
    CHECK(snf.U * snf.U_inverse == IntMatrix::identity(A.rows()));
    CHECK(snf.V * snf.V_inverse == IntMatrix::identity(A.cols()));
    for (std::size_t i = 0; i < snf.D.rows(); ++i)
        for (std::size_t j = 0; j < snf.D.cols(); ++j) {
            if (i == j && i < snf.rank) {
                CHECK(snf.D(i, j) > 0);
                if (i + 1 < snf.rank) CHECK(mpz_divisible_p(snf.D(i + 1, i + 1).get_mpz_t(), snf.D(i, i).get_mpz_t()));
            } else {
                CHECK(snf.D(i, j) == 0);
            }
        }
}

}  // namespace

TEST_CASE("smith normal form of the identity") {
    const auto snf = smith_normal_form(IntMatrix::identity(2));
    CHECK(snf.U == IntMatrix::identity(2));
    CHECK(snf.D == IntMatrix::identity(2));
    CHECK(snf.V == IntMatrix::identity(2));
    CHECK(snf.rank == 2);
}

TEST_CASE("smith normal form of [[2,4],[6,8]] matches the minors oracle") {
    const IntMatrix A{{2, 4}, {6, 8}};
    const auto expected = oracle::invariant_factors_by_minors({{2, 4}, {6, 8}});
    REQUIRE(expected == std::vector<long>{2, 4});
    const auto snf = smith_normal_form(A);
    CHECK(snf.rank == 2);
    CHECK(snf.diagonal() == std::vector<Integer>{2, 4});
    check_decomposition(A);
}

TEST_CASE("smith normal form of a zero matrix and of empty shapes") {
    const auto snf = smith_normal_form(IntMatrix(3, 2));
    CHECK(snf.rank == 0);
    CHECK(snf.D.is_zero());
    check_decomposition(IntMatrix(3, 2));
    check_decomposition(IntMatrix(0, 3));
    check_decomposition(IntMatrix(2, 0));
    CHECK(smith_normal_form(IntMatrix(0, 0)).rank == 0);
}

TEST_CASE("smith decomposition invariants on random matrices") {
    std::mt19937 rng(20261015);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t rows = 1 + rng() % 5;
        const std::size_t cols = 1 + rng() % 5;
        const auto m = oracle::random_matrix(rng, rows, cols, 9);
        const IntMatrix A = from(m, cols);
        check_decomposition(A);
        std::vector<Integer> expected;
        for (long f : oracle::invariant_factors_by_minors(m)) expected.emplace_back(f);
        CHECK(smith_normal_form(A).diagonal() == expected);
    }
}

TEST_CASE("divisible groups are canonical") {
    CHECK(DivisibleGroup(0, {2, 3}) == DivisibleGroup::cyclic(6));
    CHECK(DivisibleGroup(0, {1, 1, 4}) == DivisibleGroup::cyclic(4));
    CHECK(DivisibleGroup(0, {4, 6}).invariant_factors() == std::vector<Integer>{2, 12});
    CHECK(DivisibleGroup().to_string() == "0");
    CHECK(DivisibleGroup(1, {5}).to_string() == "(Q/Z)^1 + Z/5");
    CHECK(DivisibleGroup(0, {2, 2}).to_string() == "Z/2 + Z/2");
    CHECK(DivisibleGroup(2, {}).to_string() == "(Q/Z)^2");
    CHECK(DivisibleGroup(1, {4}).torsion_order(6) == 12);
}

TEST_CASE("qz_kernel examples") {
    CHECK(qz_kernel(IntMatrix{{2}}) == DivisibleGroup::cyclic(2));
    CHECK(qz_kernel(IntMatrix{{1, 0}, {0, 0}}) == DivisibleGroup(1, {}));
    // Z/2 + Z/3 = Z/6; the 6-torsion of (Q/Z)^2 killed by diag(2,3) has 6 points.
    CHECK(oracle::torsion_kernel_count({{2, 0}, {0, 3}}, 2, 6) == 6);
    CHECK(qz_kernel(IntMatrix{{2, 0}, {0, 3}}) == DivisibleGroup::cyclic(6));
    CHECK(qz_kernel(IntMatrix(0, 2)) == DivisibleGroup(2, {}));
}

TEST_CASE("qz_kernel torsion agrees with enumeration for small matrices") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t cols = 1 + rng() % 4;
        const std::size_t rows = rng() % 4;
        const auto m = oracle::random_matrix(rng, rows, cols, 5);
        const auto group = qz_kernel(from(m, cols));
        for (long n = 1; n <= 12; ++n) {
            if (cols == 4 && n > 8) continue;  // keeps the enumeration small
            CHECK(group.torsion_order(n) == oracle::torsion_kernel_count(m, cols, n));
        }
    }
}

TEST_CASE("cokernel charts") {
    CHECK(cokernel_chart(IntMatrix{{2}}).cokernel_rank() == 0);

    IntMatrix R(7, 2);
    const long a[7] = {1, 1, 0, 0, 0, 0, 0};
    const long b[7] = {0, 0, 1, 1, 2, 1, 1};
    for (int i = 0; i < 7; ++i) {
        R(i, 0) = a[i];
        R(i, 1) = b[i];
    }
    const auto chart = cokernel_chart(R);
    CHECK(chart.rank == 2);
    CHECK(chart.cokernel_rank() == 5);

    const auto zero = cokernel_chart(IntMatrix(3, 1));
    CHECK(zero.cokernel_rank() == 3);
    CHECK(zero.basis_transform == IntMatrix::identity(3));
}

namespace {

struct I2I0StarData {
    IntMatrix R{{1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 2}, {0, 1}, {0, 1}};
    IntMatrix N{{1, 0, 1, 0, 0, 0, 0}, {1, 0, 0, 1, 0, 0, 0}, {2, 0, 0, 0, 1, 0, 0},
                {0, 2, 0, 0, 1, 0, 0}, {0, 1, 0, 0, 0, 1, 0}, {0, 1, 0, 0, 0, 0, 1}};
    IntMatrix M0 = IntMatrix::column({1, 1, 2, 2, 1, 1});
    IntMatrix Sigma = IntMatrix::row({1, 1});
};

}  // namespace

TEST_CASE("induced_kernel examples") {
    CHECK(induced_kernel(IntMatrix{{3}}, IntMatrix{{1}}, IntMatrix{{3}}, IntMatrix{{1}}).is_trivial());

    const I2I0StarData d;
    const auto k = induced_kernel_with_generators(d.R, d.N, d.M0, d.Sigma);
    CHECK(k.group == DivisibleGroup::cyclic(2));
    REQUIRE(k.generators.size() == 1);
    const RationalVector reference{Rational(1, 2), 0, Rational(1, 2), Rational(1, 2), 0, 0, 0};
    CHECK(same_class_mod_image(k.generators[0], reference, d.R));
    CHECK(to_string(canonical_witness(k.generators[0], d.R, 2)) == "(1/2, 0, 1/2, 1/2, 0, 0, 0)");

    // No quotients taken: the answer is ker(N tensor Q/Z).
    const IntMatrix N{{2, 0}, {0, 3}, {0, 0}};
    CHECK(induced_kernel(IntMatrix(2, 0), N, IntMatrix(3, 0), IntMatrix(0, 0)) == qz_kernel(N));
}

TEST_CASE("induced_kernel error paths") {
    const I2I0StarData d;
    IntMatrix broken = d.N;
    broken(0, 0) = 2;
    CHECK_THROWS_AS(induced_kernel(d.R, broken, d.M0, d.Sigma), Error);
    try {
        induced_kernel(d.R, broken, d.M0, d.Sigma);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CommutationFailure);
    }
    try {
        induced_kernel(d.R, d.N, d.M0, IntMatrix::row({1, 1, 1}));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
}

TEST_CASE("induced_kernel is trivial for the identity square") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 3;
        const IntMatrix R = from(oracle::random_matrix(rng, rows, cols, 4), cols);
        CHECK(induced_kernel(R, IntMatrix::identity(rows), R, IntMatrix::identity(cols)).is_trivial());
    }
}

TEST_CASE("induced_kernel is invariant under unimodular change of presentation") {
    const I2I0StarData d;
    const IntMatrix W{{2, 1}, {1, 1}};  // det 1
    REQUIRE(W.determinant() == 1);
    CHECK(induced_kernel(d.R * W, d.N, d.M0, d.Sigma * W) == induced_kernel(d.R, d.N, d.M0, d.Sigma));

    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        // Random unimodular W as a product of elementary operations.
        IntMatrix V = IntMatrix::identity(2);
        for (int step = 0; step < 4; ++step) V.add_col_multiple(rng() % 2 ? 0 : 1, rng() % 2 ? 1 : 0, Integer(long(rng() % 5) - 2));
        if (abs(V.determinant()) != 1) continue;
        CHECK(induced_kernel(d.R * V, d.N, d.M0, d.Sigma * V) == DivisibleGroup::cyclic(2));
    }
}
