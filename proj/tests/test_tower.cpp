#include <gtest/gtest.h>

#include <random>

#include "ltc/tower.hpp"
#include "test_util.hpp"

using namespace ltc;

namespace {

struct Case {
    Ctx ctx;
    bool cyclotomic;
    int levels;
};

std::vector<Case> tower_cases() {
    return {
        {RingContext::make(ContextParams{3, 10, 1, 1, 1, {}}), true, 2},
        {RingContext::make(ContextParams{5, 8, 1, 1, 1, {}}), true, 1},
        {RingContext::make(ContextParams{3, 10, 1, 1, 2, {}}), false, 1},
        {RingContext::make(ContextParams{3, 10, 2, 1, 1, {}}), false, 1},
        {RingContext::make(ContextParams{2, 16, 2, 1, 1, {}}), false, 2},
        {RingContext::make(ContextParams{3, 8, 1, 2, 1, {}}), false, 0},
    };
}

Frame frame_for(const Case& c) {
    const int q = static_cast<int>(c.ctx->q());
    return c.cyclotomic ? cyclotomic_frame(*c.ctx, q) : default_frame(*c.ctx, q);
}

LayerElement random_layer(const Layer& L, std::mt19937_64& rng) {
    LayerElement x = L.zero();
    for (auto& a : x.c) a = test::random_element(L.ring(), rng);
    return x;
}

LayerElement random_layer_unit(const Layer& L, std::mt19937_64& rng) {
    LayerElement x = random_layer(L, rng);
    x.c[0] = test::random_unit(L.ring(), rng);
    return x;
}

}  // namespace

TEST(Layer, CyclotomicMinimalPolynomialAndAction) {
    auto ctx = RingContext::make(3, 10, 1, 1);
    const RingContext& R = *ctx;
    Tower tw(cyclotomic_frame(R, 3), 0);
    const Layer& L = tw.layer(0);
    ASSERT_EQ(L.degree(), 2);
    EXPECT_EQ(L.minpoly()[0], R.from_int(3));
    EXPECT_EQ(L.minpoly()[1], R.from_int(3));
    EXPECT_EQ(L.minpoly()[2], R.one());
    // rec(2) sends omega to (1 + omega)^2 - 1
    LayerElement s = tw.galois_act(0, R.from_int(2), L.omega());
    LayerElement expect = L.eval(Series::from_ints(R, 2, {0, 2, 1}), 0, true);
    EXPECT_TRUE(L.equal(s, expect));
    // N(zeta_3 - 1) = 3
    EXPECT_EQ(tw.full_norm(L.omega(), 0, false), R.from_int(3));
}

TEST(Layer, NormOfGeneratorIsConstantTerm) {
    for (const Case& c : tower_cases()) {
        const RingContext& R = *c.ctx;
        Tower tw(frame_for(c), c.levels);
        for (int l = 0; l <= c.levels; ++l) {
            const Layer& L = tw.layer(l);
            FieldElement n0 = L.minpoly()[0];
            if (L.degree() % 2) n0 = R.neg(n0);
            int prec = 0;
            FieldElement nm = tw.full_norm(L.omega(), l, false, &prec);
            EXPECT_GE(prec, iso_series_prec(R, tw.eval_degree(l)));
            EXPECT_TRUE(R.equal_mod(nm, n0, prec)) << "p=" << R.p() << " l=" << l;
            EXPECT_EQ(L.valuation(L.omega()), Rational::make(1, L.degree()));
        }
    }
}

TEST(Layer, ArithmeticAndMinimumRule) {
    std::mt19937_64 rng(11);
    for (const Case& c : tower_cases()) {
        Tower tw(frame_for(c), 0);
        const Layer& L = tw.layer(0);
        for (int t = 0; t < 5; ++t) {
            LayerElement x = random_layer(L, rng), y = random_layer(L, rng), z = random_layer(L, rng);
            EXPECT_TRUE(L.equal(L.mul(L.mul(x, y), z), L.mul(x, L.mul(y, z))));
            EXPECT_TRUE(L.equal(L.mul(x, L.add(y, z)), L.add(L.mul(x, y), L.mul(x, z))));
            LayerElement u = random_layer_unit(L, rng);
            EXPECT_TRUE(L.equal(L.mul(u, L.inv(u)), L.one()));
            // v(omega^k u) = k / n for a unit u
            int k = static_cast<int>(rng() % 5);
            EXPECT_EQ(L.valuation(L.mul(L.pow(L.omega(), k), u)), Rational::make(k, L.degree()));
        }
    }
}

TEST(Tower, EmbedAndProjectDown) {
    std::mt19937_64 rng(5);
    for (const Case& c : tower_cases()) {
        if (c.levels < 1) continue;
        Tower tw(frame_for(c), 1);
        const Layer& B = tw.layer(0);
        const Layer& L = tw.layer(1);
        for (int t = 0; t < 3; ++t) {
            LayerElement x = random_layer(B, rng), y = random_layer(B, rng);
            LayerElement ex = tw.embed(x, 0), ey = tw.embed(y, 0);
            EXPECT_TRUE(L.equal(tw.embed(B.mul(x, y), 0), L.mul(ex, ey)));
            LayerElement back = tw.project_down(ex, 1);
            EXPECT_TRUE(B.equal(back, x));
        }
        // omega_1 has valuation q / n_1 in the upper layer
        EXPECT_EQ(L.valuation(tw.omega_below(1)), Rational::make(1, B.degree()));
        EXPECT_THROW(tw.project_down(L.omega(), 1), DomainError);
    }
}

TEST(Tower, GaloisActionIsAHomomorphism) {
    std::mt19937_64 rng(7);
    for (const Case& c : tower_cases()) {
        Tower tw(frame_for(c), 0);
        const Layer& L = tw.layer(0);
        for (bool over_H : {false, true}) {
            const TowerGroup& G = tw.group(0, over_H);
            auto elts = G.elements();
            ASSERT_EQ(elts.size(), G.order());
            for (int t = 0; t < 4; ++t) {
                GalElt g = elts[rng() % elts.size()], h = elts[rng() % elts.size()];
                LayerElement x = random_layer(L, rng), y = random_layer(L, rng);
                EXPECT_TRUE(L.equal(tw.act(0, over_H, g, L.mul(x, y)),
                                    L.mul(tw.act(0, over_H, g, x), tw.act(0, over_H, g, y))));
                EXPECT_TRUE(L.equal(tw.act(0, over_H, G.mul(g, h), x),
                                    tw.act(0, over_H, g, tw.act(0, over_H, h, x))));
            }
            // the action is faithful: distinct elements move omega to distinct conjugates
            std::vector<LayerElement> images;
            for (const GalElt& g : elts) {
                LayerElement s = tw.act(0, over_H, g, L.omega());
                if (g.k == 0) {
                    for (const auto& prev : images) EXPECT_FALSE(L.equal(prev, s));
                    images.push_back(s);
                }
            }
        }
    }
}

TEST(Tower, NormTransitivity) {
    std::mt19937_64 rng(3);
    for (const Case& c : tower_cases()) {
        if (c.levels < 1) continue;
        Tower tw(frame_for(c), 1);
        const Layer& L = tw.layer(1);
        LayerElement x = random_layer_unit(L, rng);
        LayerElement down = tw.relative_norm(x, 1);
        const RingContext& R = *c.ctx;
        int p1 = 0, p0 = 0;
        FieldElement n1 = tw.full_norm(x, 1, false, &p1), n0 = tw.full_norm(down, 0, false, &p0);
        EXPECT_TRUE(R.equal_mod(n1, n0, std::min(p0, p1)));
        // the relative norm of an embedded element is its q-th power
        LayerElement y = random_layer_unit(tw.layer(0), rng);
        EXPECT_TRUE(tw.layer(0).equal(tw.relative_norm(tw.embed(y, 0), 1), tw.layer(0).pow(y, c.ctx->q())));
        if (c.ctx->d() == 2) {
            int pH = 0;
            FieldElement nH = tw.full_norm(x, 1, true, &pH);
            EXPECT_TRUE(R.in_H(nH));
            EXPECT_TRUE(R.equal_mod(nH, R.norm_to_H(n1), std::min(pH, p1)));
        }
    }
}

TEST(RRing, ThreeNormRoutesAgree) {
    std::mt19937_64 rng(17);
    for (const Case& c : tower_cases()) {
        const RingContext& R = *c.ctx;
        const int m = std::min(c.levels, 1);
        Tower tw(frame_for(c), m);
        RRing ring(tw, m);
        for (int t = 0; t < 3; ++t) {
            Series g = test::random_series(R, ring.rank() - 1, rng, false);
            g.prec = R.N();
            FieldElement a = ring.norm_det(g);
            EXPECT_EQ(a, ring.norm_resultant(g)) << "p=" << R.p();
            int prec = 0;
            FieldElement b = ring.norm_product(g, &prec);
            EXPECT_GE(prec, iso_series_prec(R, tw.eval_degree(m)));
            EXPECT_TRUE(R.equal_mod(a, b, prec)) << "p=" << R.p();
        }
        if (c.cyclotomic) {
            Series g = Series::from_ints(R, 1, {1, 1});
            g.prec = R.N();
            EXPECT_EQ(ring.norm_det(g), R.one());
        }
    }
}

TEST(RRing, IotaIsGaloisStable) {
    std::mt19937_64 rng(23);
    for (const Case& c : tower_cases()) {
        const RingContext& R = *c.ctx;
        const int m = std::min(c.levels, 1);
        Tower tw(frame_for(c), m);
        RRing ring(tw, m);
        Series g = test::random_series(R, ring.rank() - 1, rng, false);
        g.prec = R.N();
        for (int l = 0; l <= m; ++l) {
            const TowerGroup& G = tw.group(l, false);
            if (G.units().gens.empty()) continue;
            FieldElement b = G.units().gens.back();
            const int D = tw.eval_degree(l);
            Series gu = compose(truncate(g, D), iso_series(b, tw.frame(), tw.frame(), D));
            LayerElement lhs = tw.act(l, false, G.from_multiplier(b), tw.iota(g, l, true));
            LayerElement rhs = tw.iota(gu, l);
            EXPECT_TRUE(tw.layer(l).equal(lhs, rhs)) << "p=" << R.p() << " l=" << l;
        }
    }
}
