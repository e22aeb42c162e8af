#include "ltc/coleman.hpp"

#include "ltc/linalg.hpp"

namespace ltc {

NormCoherentSequence make_sequence(const Tower& tw, std::vector<LayerElement> u) {
    const RingContext& R = tw.ring();
    if (u.empty()) throw DomainError("sequence: no levels");
    if (static_cast<int>(u.size()) - 1 > tw.max_level()) throw DomainError("sequence: deeper than the tower");
    NormCoherentSequence s;
    s.prec = R.N();
    for (std::size_t l = 0; l < u.size(); ++l) {
        const Layer& L = tw.layer(static_cast<int>(l));
        if (!L.is_unit(u[l])) throw DomainError("sequence: u_" + std::to_string(l) + " is not a unit");
        s.prec = std::min(s.prec, u[l].prec);
        if (l == 0) continue;
        LayerElement down = tw.relative_norm(u[l], static_cast<int>(l));
        if (!tw.layer(static_cast<int>(l) - 1).equal(down, u[l - 1]))
            throw DomainError("sequence: N(u_" + std::to_string(l) + ") != u_" + std::to_string(l - 1));
        s.prec = std::min(s.prec, down.prec);
    }
    LayerElement base = tw.relative_norm(u[0], 0);
    s.prec = std::min(s.prec, base.prec);
    s.u_base = R.reduce_mod(base.c[0], s.prec);
    s.u = std::move(u);
    return s;
}

NormCoherentSequence sequence_from_series(const Tower& tw, const Series& g, int m, bool polynomial) {
    std::vector<LayerElement> u;
    for (int l = 0; l <= m; ++l) u.push_back(tw.iota(g, l, polynomial));
    NormCoherentSequence s = make_sequence(tw, std::move(u));
    s.g = g;
    return s;
}

Series cyclotomic_type_series(const Frame& frame, const FieldElement& c, int D) {
    Series S = iso_series(c, frame, frame, D + 1);
    Series g = truncate(shift_down(S, 1), D);
    g.prec = S.prec;
    return g;
}

NormCoherentSequence sequence_product(const Tower& tw, const NormCoherentSequence& a, const NormCoherentSequence& b) {
    const int m = std::min(a.levels(), b.levels());
    std::vector<LayerElement> u;
    for (int l = 0; l <= m; ++l) u.push_back(tw.layer(l).mul(a.u[l], b.u[l]));
    NormCoherentSequence s = make_sequence(tw, std::move(u));
    if (a.g && b.g) s.g = mul(*a.g, truncate(*b.g, a.g->D()));
    return s;
}

GalElt restrict_to_level(const Tower& tw, int m, bool over_H, const GalElt& g, int l) {
    if (l == m) return g;
    const TowerGroup& Gm = tw.group(m, over_H);
    const TowerGroup& Gl = tw.group(l, over_H);
    return {g.k, Gl.units().dlog(Gm.units().element(g.e))};
}

NormCoherentSequence act_on_sequence(const Tower& tw, const NormCoherentSequence& u, bool over_H, const GalElt& g) {
    const int m = u.levels();
    std::vector<LayerElement> out;
    for (int l = 0; l <= m; ++l) out.push_back(tw.act(l, over_H, restrict_to_level(tw, m, over_H, g, l), u.u[l]));
    return make_sequence(tw, std::move(out));
}

ColemanSeries coleman_recover(const Tower& tw, const NormCoherentSequence& u, const GalElt* shift) {
    const RingContext& R = tw.ring();
    const int m = u.levels(), dim = R.dim();
    const int M = static_cast<int>(ipow(R.q(), m + 1));
    const int unknowns = (M - 1) * dim;
    ZpMatrix A;
    std::vector<u64> b;
    A.reserve(unknowns);
    for (int l = 0; l <= m; ++l) {
        const Layer& L = tw.layer(l);
        const int n = L.degree();
        std::vector<FieldElement> basis(dim);
        for (int t = 0; t < dim; ++t) {
            FieldElement bt{};
            bt.c[t] = 1;
            basis[t] = R.frob(bt, -(l + 1));
        }
        LayerElement w = L.omega();
        if (shift) w = tw.act(l, false, restrict_to_level(tw, m, false, *shift, l), w);
        std::vector<std::vector<u64>> rows(static_cast<std::size_t>(n) * dim, std::vector<u64>(unknowns));
        LayerElement wi = L.one();
        // column (i, t) holds phi^{-(l+1)}(beta_t) w^i
        for (int i = 0; i < M - 1; ++i) {
            for (int t = 0; t < dim; ++t) {
                LayerElement col = L.scal(wi, basis[t]);
                for (int j = 0; j < n; ++j)
                    for (int s = 0; s < dim; ++s) rows[j * dim + s][i * dim + t] = col.c[j].c[s];
            }
            wi = shift ? L.mul(wi, w) : L.mul_omega(wi);
        }
        for (auto& r : rows) A.push_back(std::move(r));
        for (int j = 0; j < n; ++j)
            for (int s = 0; s < dim; ++s) b.push_back(R.reduce_mod(u.u[l].c[j], u.prec).c[s]);
    }
    ZpSolution sol = solve_zp(std::move(A), std::move(b), R, u.prec);
    ColemanSeries out;
    out.m = m;
    out.C = Series(R, M - 1);
    for (int i = 0; i < M - 1; ++i)
        for (int t = 0; t < dim; ++t) out.C.c[i].c[t] = sol.x[i * dim + t];
    out.reliable = sol.reliable;
    out.C.prec = sol.reliable;
    out.const_valuation = std::min(m + 1, R.e() * sol.reliable);
    return out;
}

Series coleman_normalize(const Tower& tw, const Series& h, int m) {
    const RingContext& R = tw.ring();
    Series mod = iterate_f(tw.frame(), m + 1);
    const int M = degree(mod);
    Series r = rem_monic(h, mod);
    r = truncate(r, M - 1);
    // tail beyond h.D() reduces into pi^{floor((D+1)/M)}
    r.prec = std::min(h.prec, (h.D() + 1) / (M * R.e()));
    Series K = shift_down(mod, 1);
    FieldElement top = r.c[M - 1];
    for (int i = 0; i < M; ++i) r.c[i] = R.sub(r.c[i], R.mul(top, K.c[i]));
    return r;
}

bool constant_terms_agree(const RingContext& R, const FieldElement& a, const FieldElement& b, int v, int prec) {
    const int cap = std::min(v, R.e() * prec);
    FieldElement x = R.reduce_mod(R.sub(a, b), prec);
    return R.valuation_or(x, cap) >= cap;
}

CocycleReport conjugate_cocycle(const Tower& tw, const NormCoherentSequence& u, const GalElt& sigma,
                                std::optional<FieldElement> kappa) {
    const RingContext& R = tw.ring();
    const int m = u.levels();
    const TowerGroup& G = tw.group(m, true);
    NormCoherentSequence su = act_on_sequence(tw, u, true, sigma);
    ColemanSeries C0 = coleman_recover(tw, u);
    ColemanSeries C1 = coleman_recover(tw, su);
    CocycleReport rep;
    rep.kappa = kappa.value_or(G.multiplier(sigma));
    const int D = tw.eval_degree(m);
    Series S = iso_series(rep.kappa, tw.frame(), twist_frame(tw.frame(), sigma.k), D);
    Series rhs = compose(frob(truncate(C0.C, D), sigma.k), S);
    rhs.prec = std::min(C0.C.prec, S.prec);
    rep.relation_holds = true;
    rep.prec = std::min(rhs.prec, su.prec);
    for (int l = 0; l <= m; ++l) {
        LayerElement x = tw.iota(rhs, l);
        rep.prec = std::min(rep.prec, x.prec);
        if (!tw.layer(l).equal(x, su.u[l])) rep.relation_holds = false;
    }
    Series nr = coleman_normalize(tw, rhs, m);
    const int k = std::min(nr.prec, C1.reliable);
    rep.coefficients_agree = equal_mod(nr, C1.C, k);
    rep.prec = std::min(rep.prec, k);
    (void)R;
    return rep;
}

WReport relative_reduce(const Tower& tw, const NormCoherentSequence& u, const std::vector<GalElt>& reps) {
    const RingContext& R = tw.ring();
    const int m = u.levels();
    if (static_cast<int>(reps.size()) != R.d()) throw DomainError("relative_reduce: need [H':H] representatives");
    std::vector<LayerElement> w;
    for (int l = 0; l <= m; ++l) {
        const Layer& L = tw.layer(l);
        LayerElement acc = L.one();
        for (const GalElt& t : reps) acc = L.mul(acc, tw.act(l, true, restrict_to_level(tw, m, true, t, l), u.u[l]));
        w.push_back(acc);
    }
    WReport rep;
    try {
        rep.w = make_sequence(tw, w);
        rep.coherent = true;
    } catch (const DomainError&) {
        rep.w.u = w;
        return rep;
    }
    rep.base_norm_one = R.equal_mod(rep.w.u_base, R.one(), rep.w.prec);
    for (int l = 0; l <= m; ++l) {
        int pl = 0;
        FieldElement nl = tw.full_norm(w[l], l, false, &pl);
        if (!R.equal_mod(nl, R.one(), pl)) rep.base_norm_one = false;
    }
    ColemanSeries Cu = coleman_recover(tw, u), Cw = coleman_recover(tw, rep.w);
    rep.constant_term = constant_terms_agree(R, Cw.C.c[0], R.norm_to_H(Cu.C.c[0]),
                                             std::min(Cu.const_valuation, Cw.const_valuation),
                                             std::min(Cu.reliable, Cw.reliable));
    return rep;
}

RationalModZ reciprocity_value(const TowerGroup& G, const Character& chi, const FieldElement& x) {
    return char_eval(G, chi, G.rec_unit(x));
}

ConstantTermReport verify_constant_term(const Tower& tw, const NormCoherentSequence& u, const Character& chi) {
    const RingContext& R = tw.ring();
    const int m = chi.level;
    if (u.levels() < m) throw DomainError("verify_constant_term: sequence shorter than the character level");
    ColemanSeries C = coleman_recover(tw, u);
    if (C.const_valuation < m + 1) throw PrecisionFault("verify_constant_term: Col_u(0) not known modulo p^{m+1}");
    ConstantTermReport rep;
    const bool corollary = chi.over_H && R.d() > 1;
    rep.path = corollary ? "corollary" : "theorem";
    const int digits = (m + 1 + R.e() - 1) / R.e();
    if (corollary) {
        rep.col0 = R.reduce_mod(R.norm_to_H(C.C.c[0]), digits);
    } else {
        if (!R.equal_mod(u.u_base, R.one(), u.prec)) throw DomainError("verify_constant_term: u_{H'} != 1");
        rep.col0 = R.reduce_mod(C.C.c[0], digits);
        if (!R.in_H(rep.col0)) throw DomainError("verify_constant_term: Col_u(0) is not in O_H");
    }
    if (!R.is_unit(rep.col0)) throw DomainError("verify_constant_term: Col_u(0) is not a unit");
    const TowerGroup& G = tw.group(m, chi.over_H);
    rep.lhs = pairing_eval_tower(tw, u.u, chi);
    rep.rhs = kConstantTermSign * reciprocity_value(G, chi, rep.col0);
    rep.equal = rep.lhs == rep.rhs;
    return rep;
}

}  // namespace ltc
