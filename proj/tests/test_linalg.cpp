#include <gtest/gtest.h>

#include <random>

#include "ltc/linalg.hpp"
#include "test_util.hpp"

using namespace ltc;

TEST(SolveZp, RecoversKnownSolution) {
    auto ctx = RingContext::make(3, 12, 1, 1);
    const RingContext& R = *ctx;
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        const int n = 6, m = 9;
        ZpMatrix A(m, std::vector<u64>(n));
        for (auto& row : A)
            for (auto& v : row) v = rng() % R.mod();
        // scale one column so a positive pivot valuation appears
        for (auto& row : A) row[2] = R.mmul(row[2], 9);
        std::vector<u64> x(n), b(m, 0);
        for (auto& v : x) v = rng() % R.mod();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) b[i] = R.madd(b[i], R.mmul(A[i][j], x[j]));
        ZpSolution s = solve_zp(A, b, R, R.N());
        ASSERT_GE(s.reliable, R.N() - 2 - s.max_pivot_valuation + 2);
        u64 mask = ipow(3, s.reliable);
        for (int j = 0; j < n; ++j) EXPECT_EQ(s.x[j] % mask, x[j] % mask);
    }
}

TEST(SolveZp, RejectsInconsistentSystem) {
    auto ctx = RingContext::make(5, 8, 1, 1);
    const RingContext& R = *ctx;
    ZpMatrix A{{1, 0}, {0, 1}, {1, 1}};
    EXPECT_NO_THROW(solve_zp(A, {2, 3, 5}, R, R.N()));
    EXPECT_THROW(solve_zp(A, {2, 3, 6}, R, R.N()), DomainError);
    EXPECT_THROW(solve_zp({{5, 0}, {0, 1}}, {1, 0}, R, R.N()), DomainError);
    EXPECT_THROW(solve_zp({{0, 0}, {0, 1}}, {0, 0}, R, R.N()), PrecisionFault);
}

TEST(Determinant, RingAgreesWithBerkowitz) {
    for (auto ctx : test::all_contexts()) {
        const RingContext& R = *ctx;
        std::mt19937_64 rng(11);
        for (int n = 1; n <= 5; ++n) {
            std::vector<std::vector<FieldElement>> A(n, std::vector<FieldElement>(n));
            std::vector<std::vector<Series>> S(n, std::vector<Series>(n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    A[i][j] = test::random_element(R, rng);
                    if (rng() % 2) A[i][j] = R.mul(A[i][j], R.pi());
                    S[i][j] = Series::constant(R, 2, A[i][j]);
                }
            FieldElement d1 = det_ring(A, R);
            Series d2 = det_berkowitz(S);
            EXPECT_EQ(d1, d2.c[0]) << n;
        }
    }
}

TEST(Determinant, SmallIntegerExamples) {
    auto ctx = RingContext::make(5, 8, 1, 1);
    const RingContext& R = *ctx;
    auto mat = [&](std::vector<std::vector<i64>> v) {
        std::vector<std::vector<FieldElement>> A;
        for (auto& row : v) {
            A.emplace_back();
            for (i64 x : row) A.back().push_back(R.from_int(x));
        }
        return A;
    };
    EXPECT_EQ(det_ring(mat({{2, 1}, {7, 3}}), R), R.from_int(-1));
    EXPECT_EQ(det_ring(mat({{5, 0, 0}, {1, 25, 0}, {3, 4, 2}}), R), R.from_int(250));
    EXPECT_EQ(det_ring(mat({{0, 1}, {1, 0}}), R), R.from_int(-1));
    // det [[1, T], [T, 1]] = 1 - T^2
    std::vector<std::vector<Series>> S{{Series::from_ints(R, 4, {1}), Series::from_ints(R, 4, {0, 1})},
                                       {Series::from_ints(R, 4, {0, 1}), Series::from_ints(R, 4, {1})}};
    EXPECT_TRUE(equal_mod(det_berkowitz(S), Series::from_ints(R, 4, {1, 0, -1}), R.N()));
}
