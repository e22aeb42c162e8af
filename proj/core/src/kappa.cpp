#include "ltc/kappa.hpp"

namespace ltc {

namespace {

void require_quadratic(const RingContext& R) {
    if (R.d() != 1) throw DomainError("kappa: needs H' = H (d = 1)");
    if (R.e() * R.fH() != 2) throw DomainError("kappa: H must be quadratic over Q_p");
}

FieldElement pi_pow(const RingContext& R, int k) { return R.pow(R.pi(), static_cast<u64>(k)); }

// smallest k with x^k = 1 exactly, up to `bound`; 0 if none
u64 exact_order(const RingContext& R, const FieldElement& x, u64 bound) {
    FieldElement y = x;
    for (u64 k = 1; k <= bound; ++k) {
        if (y == R.one()) return k;
        y = R.mul(y, x);
    }
    return 0;
}

// beta only matters modulo H^x: strip pi^{floor(v_H(beta))} so that its norm stays above precision
LayerElement strip_base_power(const Layer& L, LayerElement b) {
    const RingContext& R = L.ring();
    Rational v = L.valuation(b);
    const i64 k = v.num >= 0 ? v.num / v.den : -((-v.num + v.den - 1) / v.den);
    if (k <= 0) return b;
    const FieldElement z = R.pow(R.pi(), static_cast<u64>(k));
    for (auto& a : b.c) a = R.div_exact(R.reduce_mod(a, b.prec), z);
    b.prec -= static_cast<int>((k + R.e() - 1) / R.e());
    if (b.prec <= 0) throw PrecisionFault("kappa: beta has no digits left after removing its base valuation");
    return b;
}

}  // namespace

GammaFrame build_gamma_frame(const RingContext& R, std::optional<std::array<FieldElement, 2>> gammas) {
    require_quadratic(R);
    GammaFrame F;
    F.ctx = &R;
    F.s = R.s();
    const FieldElement ps = pi_pow(R, F.s);
    if (gammas) {
        F.gamma = *gammas;
    } else {
        F.gamma[0] = R.add(R.one(), ps);
        F.gamma[1] = R.add(R.one(), R.e() == 1 ? R.mul(R.theta(), ps) : pi_pow(R, F.s + 1));
    }
    for (int i = 0; i < 2; ++i) {
        if (!R.is_unit(F.gamma[i]) || R.valuation_or(R.sub(F.gamma[i], R.one()), F.s) < F.s)
            throw DomainError("gamma frame: gamma_" + std::to_string(i + 1) + " is not in 1 + p_H^s");
        F.omega[i] = R.iwasawa_log(F.gamma[i]);
        std::vector<u64> c = R.coords_H(R.div_exact(F.omega[i], ps));
        F.basis[0][i] = c[0];
        F.basis[1][i] = c[1];
    }
    const u64 det = R.msub(R.mmul(F.basis[0][0], F.basis[1][1]), R.mmul(F.basis[0][1], F.basis[1][0]));
    if (R.vp(det) != 0) throw DomainError("gamma frame: log(gamma_1), log(gamma_2) is not a basis of p_H^s");
    F.det_inv = R.minv(det);
    F.teich_gen = R.residue_teichmuller_generator();
    F.teich_order = ipow(R.p(), R.fH()) - 1;
    // (1 + p_H)_tors has order [1 + p : 1 + p^s] = q^{s-1}; for the supported fields it is
    // generated by 1 + pi (zeta_3 or zeta_4) when nontrivial
    F.tors_order = ipow(R.q(), F.s - 1);
    F.tors_gen = R.one();
    if (F.tors_order > 1) {
        F.tors_gen = R.add(R.one(), R.pi());
        if (exact_order(R, F.tors_gen, F.tors_order) != F.tors_order)
            throw DomainError("gamma frame: 1 + pi does not generate the principal torsion");
    }
    return F;
}

std::array<u64, 2> omega_coords(const GammaFrame& F, const FieldElement& x, int k) {
    const RingContext& R = *F.ctx;
    std::vector<u64> c = R.coords_H(R.div_exact(x, pi_pow(R, F.s)));
    // inverse of the 2x2 basis matrix via its adjugate
    const auto& B = F.basis;
    u64 x1 = R.mmul(F.det_inv, R.msub(R.mmul(B[1][1], c[0]), R.mmul(B[0][1], c[1])));
    u64 x2 = R.mmul(F.det_inv, R.msub(R.mmul(B[0][0], c[1]), R.mmul(B[1][0], c[0])));
    const u64 m = ipow(R.p(), k);
    return {x1 % m, x2 % m};
}

bool check_decomposition(const GammaFrame& F, int level) {
    const RingContext& R = *F.ctx;
    const u64 qr = ipow(R.p(), R.fH());
    // |(1 + p) / (1 + p^{level+1})| = |(1 + p^s) / (1 + p^{level+1})| * |tors|
    const u64 principal = ipow(qr, level);
    const u64 gamma_part = ipow(qr, level + 1 - F.s);
    if (principal != gamma_part * F.tors_order) return false;
    FieldElement t = F.tors_gen;
    for (u64 k = 1; k < F.tors_order; ++k) {
        if (R.valuation_or(R.sub(t, R.one()), F.s) >= F.s) return false;
        t = R.mul(t, F.tors_gen);
    }
    return true;
}

int kappa_level(const GammaFrame& F, int n) { return F.s + F.ctx->e() * n - 1; }

Character build_chi(const Tower& tw, const GammaFrame& F, int i, int n) {
    const RingContext& R = tw.ring();
    if (n < 1) throw DomainError("build_chi: n >= 1");
    if (i < 0 || i > 1) throw DomainError("build_chi: i in {0, 1}");
    const int j = 1 - i;
    const int level = kappa_level(F, n);
    const TowerGroup& G = tw.group(level, false);
    const i64 pn = static_cast<i64>(ipow(R.p(), n));
    auto chi_of = [&](const FieldElement& b) {
        auto x = omega_coords(F, R.iwasawa_log(b), n);
        return RationalModZ::make(static_cast<i64>(x[j]), pn);
    };
    Character chi = character_from_units(G, chi_of);
    auto at = [&](const FieldElement& a) { return char_eval(G, chi, G.from_multiplier(a)); };
    if (!at(F.gamma[i]).is_zero()) throw PrecisionFault("build_chi: chi(gamma_i) != 0");
    if (!(at(F.gamma[j]) == RationalModZ::make(1, pn))) throw PrecisionFault("build_chi: chi(gamma_j) != 1/p^n");
    if (!at(F.teich_gen).is_zero() || !at(F.tors_gen).is_zero()) throw PrecisionFault("build_chi: chi is not trivial on Delta");
    return chi;
}

KappaResult compute_epsilon_beta_kappa(const Tower& tw, const GammaFrame& F, int i, int n,
                                       const NormCoherentSequence& u) {
    const RingContext& R = tw.ring();
    const int M = kappa_level(F, n);
    if (u.levels() < M) throw DomainError("kappa: sequence does not reach level s + e n - 1");
    if (!R.equal_mod(u.u_base, R.one(), u.prec)) throw DomainError("kappa: the sequence has nontrivial norm to H");
    const Layer& L = tw.layer(M);
    const TowerGroup& G = tw.group(M, false);
    Character chi = build_chi(tw, F, i, n);
    const u64 pn = ipow(R.p(), n);
    std::vector<GalElt> ker;
    for (const GalElt& g : G.elements())
        if (char_eval(G, chi, g).is_zero()) ker.push_back(g);
    Subgroup K = make_subgroup(G, ker);
    if (K.size * pn != G.order()) throw PrecisionFault("kappa: ker chi has the wrong index");

    KappaResult r;
    r.i = i;
    r.n = n;
    r.epsilon = tw.norm_subgroup(M, false, K, u.u[M]);
    const GalElt gj = G.from_multiplier(F.gamma[1 - i]);
    Hilbert90 h = hilbert90_solve(tw, M, false, r.epsilon, gj, pn, &K);
    r.beta = strip_base_power(L, h.b);
    r.candidate = h.candidate;
    LayerElement acc = r.beta, cur = r.beta;
    for (u64 t = 1; t < pn; ++t) {
        cur = tw.act(M, false, gj, cur);
        acc = L.mul(acc, cur);
    }
    if (!L.in_base(acc)) throw PrecisionFault("kappa: N(beta) is not in H at precision");
    r.kappa = R.reduce_mod(acc.c[0], acc.prec);
    Rational v = L.valuation(acc);
    if (v.den != 1) throw PrecisionFault("kappa: v_H(kappa) is not an integer");
    r.v_kappa = v.num;
    r.v_mod = static_cast<u64>(((v.num % static_cast<i64>(pn)) + static_cast<i64>(pn)) % static_cast<i64>(pn));
    return r;
}

MainCongruenceReport verify_main_congruence(const Tower& tw, const GammaFrame& F, int n, const NormCoherentSequence& u) {
    const RingContext& R = tw.ring();
    const int M = kappa_level(F, n);
    if (u.levels() < M) throw DomainError("main congruence: sequence does not reach level s + e n - 1");
    NormCoherentSequence top = u;
    top.u.resize(M + 1);
    ColemanSeries C = coleman_recover(tw, top);
    if (C.const_valuation < M + 1) throw PrecisionFault("main congruence: Col_u(0) not known modulo p_H^{s+en}");
    MainCongruenceReport rep;
    rep.n = n;
    rep.modulus = ipow(R.p(), n);
    const i64 pn = static_cast<i64>(rep.modulus);
    rep.col0 = R.reduce_mod(R.norm_to_H(C.C.c[0]), (M + 1 + R.e() - 1) / R.e());
    rep.log_value = R.iwasawa_log(rep.col0);
    const auto x = omega_coords(F, rep.log_value, n);
    const TowerGroup& G = tw.group(M, false);
    auto scaled = [&](const RationalModZ& r) {
        if (pn % r.den != 0) throw PrecisionFault("main congruence: value outside (1/p^n)Z");
        return static_cast<u64>(r.num * (pn / r.den));
    };
    for (int i = 0; i < 2; ++i) {
        CongruenceLeg& leg = rep.legs[i];
        leg.i = i;
        leg.j = 1 - i;
        Character chi = build_chi(tw, F, i, n);
        rep.kappa[i] = compute_epsilon_beta_kappa(tw, F, i, n, top);
        leg.log_coord = x[leg.j];
        leg.valuation = rep.kappa[i].v_mod;
        leg.pairing = scaled(pairing_eval_tower(tw, top.u, chi, M));
        leg.reciprocity = scaled(kConstantTermSign * reciprocity_value(G, chi, rep.col0));
        leg.agree = leg.log_coord == leg.valuation && leg.valuation == leg.pairing && leg.pairing == leg.reciprocity;
    }
    // log - v(kappa_2) omega_1 - v(kappa_1) omega_2 in p^n p_H^s
    FieldElement rest = rep.log_value;
    rest = R.sub(rest, R.mul(R.from_int(rep.kappa[1].v_kappa), F.omega[0]));
    rest = R.sub(rest, R.mul(R.from_int(rep.kappa[0].v_kappa), F.omega[1]));
    const int need = F.s + R.e() * n;
    rep.combined_holds = R.valuation_or(R.reduce_mod(rest, (need + R.e() - 1) / R.e() + 1), need) >= need;
    return rep;
}

}  // namespace ltc
