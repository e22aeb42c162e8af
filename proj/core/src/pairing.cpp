#include "ltc/pairing.hpp"

#include <numeric>

namespace ltc {

RationalModZ RationalModZ::make(i64 a, i64 b) {
    Rational r = Rational::make(a, b);
    i64 n = r.num % r.den;
    if (n < 0) n += r.den;
    Rational s = Rational::make(n, r.den);
    return {s.num, s.den};
}

std::string RationalModZ::str() const { return std::to_string(num) + "/" + std::to_string(den); }

RationalModZ operator+(const RationalModZ& a, const RationalModZ& b) {
    i64 l = std::lcm(a.den, b.den);
    return RationalModZ::make(a.num * (l / a.den) + b.num * (l / b.den), l);
}

RationalModZ operator-(const RationalModZ& a) { return RationalModZ::make(-a.num, a.den); }

RationalModZ operator-(const RationalModZ& a, const RationalModZ& b) { return a + (-b); }

RationalModZ operator*(i64 k, const RationalModZ& a) {
    return RationalModZ::make(static_cast<i64>((static_cast<i128>(k) * a.num) % a.den), a.den);
}

// ---------------------------------------------------------------------------
// Characters

namespace {

u64 order_of(const std::vector<RationalModZ>& v) {
    u64 d = 1;
    for (const auto& x : v) d = std::lcm(d, static_cast<u64>(x.den));
    return d;
}

}  // namespace

Character make_character(const TowerGroup& G, std::vector<RationalModZ> values) {
    const auto gens = G.generators();
    if (values.size() != gens.size()) throw DomainError("character: wrong number of generator images");
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (!(static_cast<i64>(G.elt_order(gens[i])) * values[i]).is_zero())
            throw DomainError("character: image incompatible with the generator order");
    Character chi;
    chi.level = G.level();
    chi.over_H = G.frob_order() > 1;
    chi.values = std::move(values);
    chi.order = order_of(chi.values);
    if (G.frob_order() == 2) {
        // 2 chi(t) = chi(nu)
        GalElt nu = G.from_multiplier(G.nu());
        if (!(2 * chi.values[0] == char_eval(G, chi, nu)))
            throw DomainError("character: Frobenius image violates the square relation");
    }
    return chi;
}

Character character_from_units(const TowerGroup& G, const std::function<RationalModZ(const FieldElement&)>& on_unit,
                               RationalModZ on_frobenius) {
    std::vector<RationalModZ> vals;
    if (G.frob_order() == 2) vals.push_back(on_frobenius);
    for (const auto& g : G.units().gens) vals.push_back(on_unit(g));
    return make_character(G, vals);
}

RationalModZ char_eval(const TowerGroup& G, const Character& chi, const GalElt& g) {
    RationalModZ acc;
    std::size_t off = 0;
    if (G.frob_order() == 2) {
        acc = static_cast<i64>(g.k) * chi.values[0];
        off = 1;
    }
    for (std::size_t i = 0; i < g.e.size(); ++i) acc = acc + static_cast<i64>(g.e[i]) * chi.values[off + i];
    return acc;
}

Character char_mul(const TowerGroup& G, const Character& a, const Character& b) {
    std::vector<RationalModZ> v(a.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] + b.values[i];
    return make_character(G, v);
}

std::vector<Character> all_characters(const TowerGroup& G) {
    const auto& ord = G.units().orders;
    std::vector<u64> j(ord.size(), 0);
    std::vector<Character> out;
    const GalElt nu = G.from_multiplier(G.nu());
    for (u64 t = 0; t < G.units().order(); ++t) {
        std::vector<RationalModZ> uv;
        for (std::size_t i = 0; i < ord.size(); ++i) uv.push_back(RationalModZ::make(static_cast<i64>(j[i]), static_cast<i64>(ord[i])));
        if (G.frob_order() == 2) {
            RationalModZ x;
            for (std::size_t i = 0; i < ord.size(); ++i) x = x + static_cast<i64>(nu.e[i]) * uv[i];
            // the two square roots of chi(nu) in Q/Z
            RationalModZ half = RationalModZ::make(x.num, 2 * x.den);
            for (RationalModZ h : {half, half + RationalModZ::make(1, 2)}) {
                std::vector<RationalModZ> v{h};
                v.insert(v.end(), uv.begin(), uv.end());
                out.push_back(make_character(G, v));
            }
        } else {
            out.push_back(make_character(G, uv));
        }
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (++j[i] < ord[i]) break;
            j[i] = 0;
        }
    }
    return out;
}

Character inflate_character(const TowerGroup& from, const TowerGroup& to, const Character& chi) {
    if (from.frob_order() != to.frob_order()) throw DomainError("inflate_character: base fields differ");
    return character_from_units(
        to, [&](const FieldElement& b) { return char_eval(from, chi, from.from_multiplier(b)); },
        from.frob_order() == 2 ? chi.values[0] : RationalModZ{});
}

// ---------------------------------------------------------------------------
// Hilbert 90

int h90_candidate_count(const Tower& tw, int l) {
    const u64 q = tw.ring().q();
    return tw.layer(l).degree() * static_cast<int>(q > 2 ? q - 1 : 1) * tw.ring().d();
}

// theta^j (j < d) is the slowest index, so for d = 1 the list is Teichmuller powers times omega^k;
// for d = 2 the factor theta supplies candidates not fixed by Frobenius.
LayerElement h90_candidate(const Tower& tw, int l, int index) {
    const RingContext& R = tw.ring();
    const Layer& L = tw.layer(l);
    const int nt = static_cast<int>(R.q() > 2 ? R.q() - 1 : 1);
    const int per = nt * L.degree();
    const int j = index / per;
    index %= per;
    const int k = index / nt, t = index % nt;
    FieldElement z = R.pow(R.residue_teichmuller_generator(), static_cast<u64>(t));
    if (R.q() <= 2) z = R.one();
    z = R.mul(z, R.pow(R.theta(), static_cast<u64>(j)));
    return L.scal(L.pow(L.omega(), static_cast<u64>(k)), z);
}

Hilbert90 hilbert90_solve(const Tower& tw, int l, bool over_H, const LayerElement& u, const GalElt& sigma, u64 n,
                          const Subgroup* average, int first_candidate) {
    const Layer& L = tw.layer(l);
    {
        // prod_{i<n} sigma^i(u) = 1
        LayerElement prod = u, cur = u;
        for (u64 i = 1; i < n; ++i) {
            cur = tw.act(l, over_H, sigma, cur);
            prod = L.mul(prod, cur);
        }
        if (!L.equal(prod, L.one())) throw DomainError("hilbert90_solve: u is not norm-one for the cyclic action");
    }
    const LayerElement uinv = L.inv(u);
    const int count = h90_candidate_count(tw, l);
    for (int idx = first_candidate; idx < count; ++idx) {
        LayerElement c = h90_candidate(tw, l, idx);
        if (average) c = tw.trace_subgroup(l, over_H, *average, c);
        // b = sum_i P_i sigma^i(c), P_{i+1} = P_i sigma^i(u^{-1})
        LayerElement b = L.zero(), P = L.one(), sc = c, su = uinv;
        for (u64 i = 0; i < n; ++i) {
            b = L.add(b, L.mul(P, sc));
            if (i + 1 == n) break;
            P = L.mul(P, su);
            sc = tw.act(l, over_H, sigma, sc);
            su = tw.act(l, over_H, sigma, su);
        }
        if (L.is_zero(b)) continue;
        if (!L.equal(tw.act(l, over_H, sigma, b), L.mul(u, b)))
            throw PrecisionFault("hilbert90_solve: sigma(b) != u b at precision");
        return {b, idx};
    }
    throw PrecisionFault("hilbert90_solve: every candidate gives b = 0 at precision");
}

// ---------------------------------------------------------------------------
// Pairing

namespace {

// Shared core: G-elements `B` = Gal(L/M), psi on B of order d, v_M = scale * v_H on M.
RationalModZ pairing_core(const Tower& tw, int l, bool over_H, const LayerElement& u, const std::vector<GalElt>& B,
                          const std::function<RationalModZ(const GalElt&)>& psi, u64 d, i64 scale,
                          const PairingOptions& opt) {
    const TowerGroup& G = tw.group(l, over_H);
    const Layer& L = tw.layer(l);
    Subgroup all = make_subgroup(G, B);
    if (!L.equal(tw.norm_subgroup(l, over_H, all, u), L.one())) throw DomainError("pairing: u is not norm-one");
    if (d == 1) return {};
    std::vector<GalElt> ker;
    const GalElt* sigma = opt.sigma;
    const RationalModZ gen = RationalModZ::make(1, static_cast<i64>(d));
    for (const GalElt& g : B) {
        RationalModZ v = psi(g);
        if (v.is_zero()) ker.push_back(g);
        else if (!sigma && v == gen) sigma = &g;
    }
    if (!sigma) throw DomainError("pairing: no sigma with chi(sigma) = 1/d");
    if (!(psi(*sigma) == gen)) throw DomainError("pairing: chi(sigma) != 1/d");
    Subgroup K = make_subgroup(G, ker);
    if (K.size * d != B.size()) throw DomainError("pairing: character order does not match its kernel");
    LayerElement uchi = tw.norm_subgroup(l, over_H, K, u);
    Hilbert90 h = hilbert90_solve(tw, l, over_H, uchi, *sigma, d, &K, opt.first_candidate);
    for (const GalElt& t : K.gens)
        if (!L.equal(tw.act(l, over_H, t, h.b), h.b)) throw PrecisionFault("pairing: b is not fixed by ker chi");
    Rational v = L.valuation(h.b);
    RationalModZ out = RationalModZ::make(v.num * scale, v.den);
    if (static_cast<i64>(d) % out.den != 0) throw PrecisionFault("pairing: value denominator does not divide d_chi");
    return out;
}

}  // namespace

RationalModZ pairing_eval(const Tower& tw, int l, const LayerElement& u, const Character& chi,
                          const PairingOptions& opt) {
    if (chi.level != l) throw DomainError("pairing_eval: character level differs from the layer");
    const TowerGroup& G = tw.group(l, chi.over_H);
    auto elts = G.elements();
    return pairing_core(
        tw, l, chi.over_H, u, elts, [&](const GalElt& g) { return char_eval(G, chi, g); }, chi.order, 1, opt);
}

RationalModZ pairing_eval_over(const Tower& tw, int l, const LayerElement& w, const std::vector<GalElt>& B,
                               const std::function<RationalModZ(const GalElt&)>& psi, u64 d) {
    const TowerGroup& G = tw.group(l, false);
    if (G.order() % B.size() != 0) throw DomainError("pairing_eval_over: B is not a subgroup");
    // M / H' is totally ramified of degree [G : B]
    return pairing_core(tw, l, false, w, B, psi, d, static_cast<i64>(G.order() / B.size()), {});
}

RationalModZ pairing_eval_tower(const Tower& tw, const std::vector<LayerElement>& seq, const Character& chi,
                                int level) {
    if (level < 0) level = chi.level;
    if (level < chi.level || level >= static_cast<int>(seq.size()))
        throw DomainError("pairing_eval_tower: level does not contain the character's field");
    LayerElement x = seq[level];
    for (int l = level; l > chi.level; --l) x = tw.relative_norm(x, l);
    return pairing_eval(tw, chi.level, x, chi);
}

}  // namespace ltc
