#include <gtest/gtest.h>

#include <random>

#include "ltc/lubin_tate.hpp"
#include "test_util.hpp"

using namespace ltc;
using ltc::test::random_series;

namespace {

// (1+T)^n - 1 by repeated multiplication.
Series cyclo_power(const RingContext& c, int D, int n) {
    Series base = Series::from_ints(c, D, {1, 1});
    Series acc = Series::constant(c, D, c.one());
    for (int i = 0; i < n; ++i) acc = mul(acc, base);
    acc.c[0] = c.sub(acc.c[0], c.one());
    return acc;
}

int group_degree(const RingContext& c) { return c.q() > 5 ? 12 : 16; }

}  // namespace

TEST(Frame, RejectsEachCondition) {
    auto ctx = RingContext::make(3, 12, 1, 1);
    const RingContext& R = *ctx;
    // T^2 is not congruent to T^3 and has a zero linear coefficient
    EXPECT_THROW(check_frame(Series::from_ints(R, 6, {0, 0, 1}), R.from_int(3)), DomainError);
    EXPECT_THROW(check_frame(Series::from_ints(R, 6, {1, 3, 0, 1}), R.from_int(3)), DomainError);
    EXPECT_THROW(check_frame(Series::from_ints(R, 6, {0, 3, 0, 1}), R.from_int(9)), DomainError);
    EXPECT_THROW(check_frame(Series::from_ints(R, 6, {0, 6, 0, 1}), R.from_int(3)), DomainError);
    EXPECT_THROW(check_frame(Series::from_ints(R, 6, {0, 3, 1, 1}), R.from_int(3)), DomainError);
    EXPECT_THROW(check_frame(Series::from_ints(R, 2, {0, 3, 0}), R.from_int(3)), DomainError);
    Frame ok = check_frame(Series::from_ints(R, 6, {0, 3, 3, 1}), R.from_int(3));
    EXPECT_TRUE(ok.monic_q);
    EXPECT_FALSE(ok.special);
    EXPECT_TRUE(default_frame(R, 6).special);
}

TEST(FormalGroup, AxiomsAndTwist) {
    for (auto ctx : test::all_contexts()) {
        const RingContext& R = *ctx;
        const int D2 = group_degree(R);
        Frame fr = default_frame(R, D2);
        FormalGroup G = formal_group(fr, D2);
        for (int a = 0; a <= D2; ++a) {
            EXPECT_EQ(G.F.at(a, 0), a == 1 ? R.one() : R.zero());
            EXPECT_EQ(G.F.at(0, a), a == 1 ? R.one() : R.zero());
            for (int b = 0; a + b <= D2; ++b) EXPECT_EQ(G.F.at(a, b), G.F.at(b, a));
        }
        // f(F(X, Y)) = F^phi(f(X), f(Y)) exactly at total degree D2
        Bivariate fX = bv_compose(fr.f, Bivariate::X(R, D2));
        Bivariate fY = bv_compose(fr.f, Bivariate::Y(R, D2));
        EXPECT_TRUE(bv_equal(bv_compose(fr.f, G.F), bv_subst(bv_frob(G.F, 1), fX, fY), G.prec))
            << R.p() << " " << R.e() << " " << R.d();
        // associativity on random slices
        std::mt19937_64 rng(7);
        for (int t = 0; t < 3; ++t) {
            Series A = random_series(R, D2, rng, true), B = random_series(R, D2, rng, true),
                   C = random_series(R, D2, rng, true);
            EXPECT_TRUE(equal_mod(bv_eval(G.F, bv_eval(G.F, A, B), C), bv_eval(G.F, A, bv_eval(G.F, B, C)), G.prec));
        }
        for (int a = 0; a < D2; ++a) EXPECT_EQ(G.F1.c[a], G.F.at(a, 1));
    }
}

TEST(FormalGroup, CyclotomicIsMultiplicative) {
    for (u64 p : {2, 3, 5}) {
        auto ctx = RingContext::make(p, p == 2 ? 20 : 10, 1, 1);
        const RingContext& R = *ctx;
        const int D2 = 14;
        FormalGroup G = formal_group(cyclotomic_frame(R, D2), D2);
        for (int a = 0; a <= D2; ++a)
            for (int b = 0; a + b <= D2; ++b) {
                bool expect_one = (a + b == 1) || (a == 1 && b == 1);
                EXPECT_EQ(G.F.at(a, b), expect_one ? R.one() : R.zero());
            }
        // p^B log(1 + T)
        int B = 0;
        Series lam = formal_log_scaled(G, B);
        for (int k = 1; k <= D2; ++k) {
            FieldElement expect = R.from_int(k % 2 ? 1 : -1);
            expect = R.mul(expect, R.from_int(static_cast<i64>(ipow(p, B))));
            // expect / k, exact since p^B is divisible by the p-part of k
            EXPECT_TRUE(R.equal_mod(R.mul(lam.c[k], R.from_int(k)), expect, lam.prec));
        }
    }
}

TEST(FormalGroup, LogarithmIsAdditive) {
    for (auto ctx : test::all_contexts()) {
        const RingContext& R = *ctx;
        const int D2 = group_degree(R);
        FormalGroup G = formal_group(default_frame(R, D2), D2);
        int B = 0;
        Series lam = formal_log_scaled(G, B);
        Bivariate lhs = bv_compose(lam, G.F);
        Bivariate rhs = bv_add(bv_compose(lam, Bivariate::X(R, D2)), bv_compose(lam, Bivariate::Y(R, D2)));
        EXPECT_TRUE(bv_equal(lhs, rhs, lam.prec)) << R.p() << " " << R.e() << " " << R.d();
        EXPECT_EQ(lam.c[1], R.from_int(static_cast<i64>(ipow(R.p(), B))));
    }
}

TEST(IsoSeries, EndomorphismLaws) {
    for (auto ctx : test::all_contexts()) {
        const RingContext& R = *ctx;
        const int D = 120, D2 = group_degree(R);
        Frame fr = default_frame(R, D);
        FormalGroup G = formal_group(fr, D2);
        std::mt19937_64 rng(17);
        Series Tser = Series::T(R, D);
        EXPECT_TRUE(equal_mod(iso_series(R.one(), fr, fr, D), Tser, R.N()));
        for (int t = 0; t < 4; ++t) {
            FieldElement a = test::random_in_H(R, rng), b = test::random_in_H(R, rng);
            Series ia = iso_series(a, fr, fr, D), ib = iso_series(b, fr, fr, D);
            const int k = ia.prec;
            ASSERT_GT(k, 0);
            EXPECT_TRUE(equal_mod(compose(fr.f, ia), compose(frob(ia, 1), truncate(fr.f, D)), k));
            EXPECT_TRUE(equal_mod(compose(ia, ib), iso_series(R.mul(a, b), fr, fr, D), k));
            EXPECT_TRUE(equal_mod(bv_eval(G.F, truncate(ia, D2), truncate(ib, D2)),
                                  iso_series(R.add(a, b), fr, fr, D2), k));
        }
    }
}

TEST(IsoSeries, CyclotomicBinomialOracle) {
    auto ctx = RingContext::make(5, 10, 1, 1);
    const RingContext& R = *ctx;
    const int D = 60;
    Frame fr = cyclotomic_frame(R, D);
    for (int a : {2, 7, 26}) {
        Series ia = iso_series(R.from_int(a), fr, fr, D);
        EXPECT_TRUE(equal_mod(ia, cyclo_power(R, D, a), ia.prec));
    }
}

TEST(IsoSeries, TwistedFrameIsomorphism) {
    for (auto ctx : test::all_contexts()) {
        const RingContext& R = *ctx;
        if (R.d() != 2) continue;
        const int D = 60, D2 = group_degree(R);
        Frame f = default_frame(R, D);
        Frame g = twist_frame(f, 1);
        // phi(a) / a = phi(pi') / pi' has the solution a = pi' / pi_H
        FieldElement a = R.div_exact(f.pi_prime, R.pi());
        Series ia = iso_series(a, f, g, D);
        EXPECT_TRUE(equal_mod(compose(g.f, ia), compose(frob(ia, 1), truncate(f.f, D)), ia.prec));
        FormalGroup Ff = formal_group(f, D2), Fg = formal_group(g, D2);
        Bivariate lhs = bv_compose(truncate(ia, D2), Ff.F);
        Bivariate A = bv_compose(truncate(ia, D2), Bivariate::X(R, D2));
        Bivariate B = bv_compose(truncate(ia, D2), Bivariate::Y(R, D2));
        EXPECT_TRUE(bv_equal(lhs, bv_subst(Fg.F, A, B), ia.prec));
        EXPECT_THROW(iso_series(R.one(), f, g, D), DomainError);
    }
}

TEST(IsoSeries, PrecisionBoundHoldsAcrossWorkingPrecision) {
    for (auto [p, e, d] : std::vector<std::array<int, 3>>{{3, 1, 1}, {3, 1, 2}, {2, 2, 1}, {5, 1, 1}}) {
        auto lo = RingContext::make(p, 9, e, d);
        auto hi = RingContext::make(p, 15, e, d);
        const int D = 300;
        Series a = iso_series(lo->from_int(1 + p), default_frame(*lo, D), default_frame(*lo, D), D);
        Series b = iso_series(hi->from_int(1 + p), default_frame(*hi, D), default_frame(*hi, D), D);
        for (int k = 0; k <= D; ++k)
            for (int i = 0; i < lo->dim(); ++i)
                EXPECT_EQ(a.c[k].c[i] % ipow(p, a.prec), b.c[k].c[i] % ipow(p, a.prec)) << k;
    }
}

TEST(IterateF, CyclotomicIterate) {
    auto ctx = RingContext::make(3, 12, 1, 1);
    Frame fr = cyclotomic_frame(*ctx, 3);
    EXPECT_TRUE(equal_mod(iterate_f(fr, 2), cyclo_power(*ctx, 9, 9), ctx->N()));
    Frame sp = default_frame(*ctx, 3);
    Series f2 = iterate_f(sp, 2);
    EXPECT_EQ(degree(f2), 9);
    EXPECT_TRUE(equal_mod(f2, compose(truncate(sp.f, 9), truncate(sp.f, 9)), ctx->N()));
}

TEST(NormOperator, Oracles) {
    for (auto ctx : test::all_contexts()) {
        const RingContext& R = *ctx;
        const int q = static_cast<int>(R.q());
        const int D = q * (R.e() * R.N() + 12);
        Frame fr = default_frame(R, q);
        Series T = Series::T(R, D);
        Series nT = norm_operator(fr, T);
        // prod (T +_F omega) = (-1)^{q+1} f(T), so N T = -T when q is even
        Series expectT = q % 2 ? T : neg(T);
        EXPECT_TRUE(equal_mod(nT, truncate(expectT, nT.D()), R.N()));
        FieldElement c = R.from_int(7);
        Series nc = norm_operator(fr, Series::constant(R, D, c));
        EXPECT_EQ(nc.c[0], R.pow(c, R.q()));
        for (int k = 1; k <= nc.D(); ++k) EXPECT_TRUE(R.is_zero(nc.c[k]));
    }
    auto c3 = RingContext::make(3, 12, 1, 1);
    Frame cyc = cyclotomic_frame(*c3, 3);
    Series h = Series::from_ints(*c3, 80, {1, 1});
    Series nh = norm_operator(cyc, h);
    EXPECT_TRUE(equal_mod(nh, truncate(h, nh.D()), c3->N()));
}

TEST(NormOperator, Properties) {
    for (auto ctx : test::all_contexts()) {
        const RingContext& R = *ctx;
        const int q = static_cast<int>(R.q());
        const int D = q * (R.e() * R.N() + 6);
        Frame fr = default_frame(R, q);
        Frame tw = twist_frame(fr, 1);
        std::mt19937_64 rng(5);
        for (int t = 0; t < (q > 5 ? 3 : 10); ++t) {
            Series h = random_series(R, D, rng, false);
            h.c[0] = test::random_unit(R, rng);
            Series g = random_series(R, D, rng, false);
            g.c[0] = test::random_unit(R, rng);
            Series nh = norm_operator(fr, h);
            const int K = nh.D();
            // N h == h^phi modulo the maximal ideal
            Series diff = sub(nh, truncate(frob(h, 1), K));
            for (int k = 0; k <= K; ++k) EXPECT_FALSE(R.is_unit(diff.c[k]));
            // Frobenius equivariance
            EXPECT_TRUE(equal_mod(norm_operator(tw, frob(h, 1)), frob(nh, 1), R.N()));
            // multiplicativity
            Series ngh = norm_operator(fr, mul(g, h));
            EXPECT_TRUE(equal_mod(ngh, mul(norm_operator(fr, g), nh), R.N(), K));
            // h == 1 mod pi^i  =>  N h == 1 mod pi^{i+1}
            Series u = scal(random_series(R, D, rng, false), R.pi());
            u.c[0] = R.add(u.c[0], R.one());
            Series nu = norm_operator(fr, u);
            nu.c[0] = R.sub(nu.c[0], R.one());
            for (int k = 0; k <= nu.D(); ++k) EXPECT_GE(R.valuation_or(nu.c[k], 99), 2);
        }
    }
}

TEST(NormOperator, StableUnderLongerTruncation) {
    auto ctx = RingContext::make(3, 10, 1, 2);
    const RingContext& R = *ctx;
    Frame fr = default_frame(R, 3);
    std::mt19937_64 rng(8);
    Series h = random_series(R, 200, rng, false);
    h.c[0] = test::random_unit(R, rng);
    Series a = norm_operator(fr, truncate(h, 100));
    Series b = norm_operator(fr, h);
    EXPECT_EQ(a.D(), 101 / 3 - 10);
    EXPECT_TRUE(equal_mod(a, b, R.N(), a.D()));
}

TEST(NormOperator, GroupRouteAgrees) {
    for (auto ctx : test::all_contexts()) {
        const RingContext& R = *ctx;
        const int q = static_cast<int>(R.q());
        if (q > 5) continue;
        const int D2 = 20;
        Frame fr = default_frame(R, q);
        FormalGroup G = formal_group(fr, D2);
        std::mt19937_64 rng(3);
        Series h = random_series(R, q * (R.e() * R.N() + D2), rng, false);
        h.c[0] = test::random_unit(R, rng);
        Series nh = norm_operator(fr, h);
        Series P = norm_product_group_route(G, h);
        // (N h) o f == prod h(T +_F omega) at low degree, to the precision the truncated group carries
        const int K = 4;
        Series lhs = compose(truncate(nh, K), truncate(fr.f, K));
        int prec = std::max(1, (D2 - K) / (q - 1) / R.e() - 1);
        prec = std::min(prec, R.N());
        EXPECT_TRUE(equal_mod(lhs, truncate(P, K), prec)) << R.p() << " " << R.e() << " " << R.d();
        Series rec = norm_from_product(fr, P, 2);
        EXPECT_TRUE(equal_mod(rec, truncate(nh, 2), std::min(prec, rec.prec) - 1));
    }
}

TEST(NormOperator, FixedPointCertificate) {
    for (auto [p, N] : std::vector<std::array<int, 2>>{{3, 8}, {5, 6}}) {
        auto ctx = RingContext::make(p, N, 1, 2);
        const RingContext& R = *ctx;
        const int q = static_cast<int>(R.q());
        Frame fr = default_frame(R, q);
        const int D = q * (20 + R.N());
        Series g0 = Series::from_ints(R, D, {1, 1});
        FixedPoint fp = norm_fixed_point(fr, g0, 4 * R.N() + 8);
        EXPECT_EQ(fp.certified_prec, R.N());
        EXPECT_GE(fp.reliable_degree, 20);
        EXPECT_LT(fp.iterations, 4 * R.N() + 8);
    }
}
