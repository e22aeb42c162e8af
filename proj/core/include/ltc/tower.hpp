#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ltc/lubin_tate.hpp"
#include "ltc/padic.hpp"
#include "ltc/series.hpp"

namespace ltc {

// Rational number a/b, b > 0, in lowest terms.
struct Rational {
    i64 num = 0;
    i64 den = 1;
    static Rational make(i64 a, i64 b);
    friend bool operator==(const Rational&, const Rational&) = default;
};

// Element of O_{H'}[omega] written in the power basis; coordinates reliable modulo p^prec.
struct LayerElement {
    std::vector<FieldElement> c;
    int prec = 0;
};

// Layer l of the tower: H'_l = H'(omega_{l+1}), omega_{l+1} a primitive root of
// phi^{-(l+1)}(f^{(l+1)}).  Degree (q-1) q^l, totally ramified over H'.
class Layer {
public:
    Layer(const Frame& frame, int level);

    int level() const { return level_; }
    int degree() const { return n_; }
    const RingContext& ring() const { return *R_; }
    // Monic Eisenstein minimal polynomial of omega, low to high, length n + 1.
    const std::vector<FieldElement>& minpoly() const { return mp_; }

    LayerElement zero() const;
    LayerElement one() const;
    LayerElement from_base(const FieldElement& a) const;
    LayerElement omega() const;

    LayerElement add(const LayerElement& x, const LayerElement& y) const;
    LayerElement sub(const LayerElement& x, const LayerElement& y) const;
    LayerElement neg(const LayerElement& x) const;
    LayerElement mul(const LayerElement& x, const LayerElement& y) const;
    LayerElement scal(const LayerElement& x, const FieldElement& a) const;
    LayerElement mul_omega(const LayerElement& x) const;
    LayerElement pow(const LayerElement& x, u64 k) const;
    // Inverse of a unit by Newton iteration.
    LayerElement inv(const LayerElement& x) const;
    // z with y z = x, by a Z_p-linear solve; DomainError when y does not divide x.
    LayerElement div(const LayerElement& x, const LayerElement& y) const;
    // Coefficientwise phi^k.
    LayerElement frob(const LayerElement& x, int k) const;

    bool is_zero(const LayerElement& x) const;
    bool is_unit(const LayerElement& x) const;
    bool equal(const LayerElement& x, const LayerElement& y) const;  // at the common precision
    // v_H(x) = min_i (v_H(a_i) + i / n); exact by the minimum rule.
    Rational valuation(const LayerElement& x) const;
    // x in O_{H'} (all higher coordinates vanish at precision).
    bool in_base(const LayerElement& x) const;

    // (phi^{twist} g)(omega).  Truncation error is accounted in prec unless g is a polynomial.
    LayerElement eval(const Series& g, int twist, bool polynomial = false) const;

private:
    void reduce(std::vector<FieldElement>& wide, LayerElement& out) const;
    const RingContext* R_;
    int level_, n_;
    std::vector<FieldElement> mp_;
};

// Element of Gal(H'_l / K): Frobenius power k (K = H, d = 2 only) and exponents over the
// generators of (O_H / p_H^{l+1})^x.  Acts on omega through [a_k b]_{f, phi^k f}, b the unit.
struct GalElt {
    int k = 0;
    std::vector<u64> e;
    friend bool operator==(const GalElt&, const GalElt&) = default;
};

// Gal(H'_l / H') (over_H = false) or Gal(H'_l / H) as an abstract group.
class TowerGroup {
public:
    TowerGroup(const Frame& frame, int level, bool over_H);
    const RingContext& ring() const { return *R_; }
    const UnitGroup& units() const { return U_; }
    int level() const { return level_; }
    int frob_order() const { return dk_; }  // 1 or d
    u64 order() const { return U_.order() * static_cast<u64>(dk_); }

    GalElt identity() const;
    GalElt mul(const GalElt& x, const GalElt& y) const;
    GalElt inv(const GalElt& x) const;
    GalElt pow(const GalElt& x, u64 k) const;
    u64 elt_order(const GalElt& x) const;
    // Element acting on torsion through [b], b a unit of O_H.
    GalElt from_multiplier(const FieldElement& b) const;
    // Reciprocity: rec_H(x) for a unit x acts through [x^{-1}].
    GalElt rec_unit(const FieldElement& x) const;
    GalElt frobenius_lift() const;  // (1, a_1); identity when frob_order() == 1
    // a_k * b, the linear coefficient of the isomorphism f -> phi^k f.
    FieldElement multiplier(const GalElt& x) const;
    std::vector<GalElt> generators() const;
    // All elements in a fixed deterministic order.
    std::vector<GalElt> elements() const;
    u64 index(const GalElt& x) const;  // position in elements()
    const FieldElement& a1() const { return a1_; }
    const FieldElement& nu() const { return nu_; }

private:
    const RingContext* R_;
    int level_, dk_;
    UnitGroup U_;
    FieldElement a1_{}, nu_{};
    std::vector<u64> nu_e_;
};

// Subgroup generated by `gens`, with the orders of each generator modulo the previous ones.
struct Subgroup {
    std::vector<GalElt> gens;
    std::vector<u64> rel_orders;
    u64 size = 1;
};
Subgroup make_subgroup(const TowerGroup& G, const std::vector<GalElt>& members);

// Action of one group element on a layer: omega^i -> sigma(omega)^i with coefficients twisted by phi^k.
struct Action {
    int k = 0;
    std::vector<LayerElement> cols;
    int prec = 0;
};

class Tower {
public:
    Tower(const Frame& frame, int max_level);
    const Frame& frame() const { return frame_; }
    const RingContext& ring() const { return *frame_.ctx; }
    int max_level() const { return static_cast<int>(layers_.size()) - 1; }
    const Layer& layer(int l) const { return *layers_.at(l); }
    const TowerGroup& group(int l, bool over_H) const;

    // Image of omega_l under layer l-1 -> l, i.e. (phi^{-(l+1)} f)(omega_{l+1}).
    const LayerElement& omega_below(int l) const;
    LayerElement embed(const LayerElement& x, int from_level) const;
    LayerElement embed_base(const FieldElement& a, int level) const;
    // Inverse of embed; DomainError when x is not in the lower layer.
    LayerElement project_down(const LayerElement& x, int level) const;
    FieldElement to_base(const LayerElement& x) const;

    const Action& action(int l, bool over_H, const GalElt& g) const;
    LayerElement act(int l, bool over_H, const GalElt& g, const LayerElement& x) const;
    // Action of rec_H(u): omega -> [u^{-1}](omega).
    LayerElement galois_act(int l, const FieldElement& u, const LayerElement& x) const;

    LayerElement norm_subgroup(int l, bool over_H, const Subgroup& S, const LayerElement& x) const;
    LayerElement trace_subgroup(int l, bool over_H, const Subgroup& S, const LayerElement& x) const;
    // Norm to layer l-1 (l >= 1) or to H' (l = 0, returned as a layer-0 constant).
    LayerElement relative_norm(const LayerElement& x, int l) const;
    // Full norm of layer l over H' (or over H), certified to lie in the base and
    // reduced modulo p^prec (prec written to *prec_out when given).
    FieldElement full_norm(const LayerElement& x, int l, bool over_H, int* prec_out = nullptr) const;
    // (phi^{-(l+1)} g)(omega_{l+1}).
    LayerElement iota(const Series& g, int l, bool polynomial = false) const;
    // Truncation degree used for series evaluated on layer l.
    int eval_degree(int l) const;

private:
    Frame frame_;
    std::vector<std::unique_ptr<Layer>> layers_;
    std::vector<LayerElement> omega_below_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, bool>, std::unique_ptr<TowerGroup>> groups_;
    mutable std::map<std::tuple<int, int, std::vector<u64>>, std::unique_ptr<Action>> actions_;
};

// R = O_{H'}[[T]] / (f^{(m+1)}), free of rank q^{m+1} with basis 1, T, ..., T^{q^{m+1}-1}.
class RRing {
public:
    RRing(const Tower& tower, int m);
    int rank() const { return rank_; }
    const Series& modulus() const { return mod_; }
    Series reduce(const Series& g) const;
    Series mul(const Series& a, const Series& b) const;
    // (g(0), iota_0(g), ..., iota_m(g))
    std::pair<FieldElement, std::vector<LayerElement>> iota(const Series& g) const;
    // det of multiplication by g
    FieldElement norm_det(const Series& g) const;
    // g(0) prod_l phi^{l+1}(N_{H'_l/H'}(iota_l(g)))
    FieldElement norm_product(const Series& g, int* prec_out = nullptr) const;
    // Res(f^{(m+1)}, g) by a Sylvester determinant
    FieldElement norm_resultant(const Series& g) const;

private:
    const Tower* tower_;
    int m_, rank_;
    Series mod_;
};

}  // namespace ltc
