#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltc/pairing.hpp"
#include "ltc/tower.hpp"

namespace ltc {

// u_l in layer l for l = 0..m, each a unit, with N_{l -> l-1}(u_l) = u_{l-1}.
struct NormCoherentSequence {
    std::vector<LayerElement> u;
    std::optional<Series> g;  // generating series, when built forward
    FieldElement u_base{};    // N_{H'_0 / H'}(u_0)
    int prec = 0;
    int levels() const { return static_cast<int>(u.size()) - 1; }
};

// Checks units and relative-norm coherence; fills u_base and prec.  DomainError on failure.
NormCoherentSequence make_sequence(const Tower& tw, std::vector<LayerElement> u);
// u_l = (phi^{-(l+1)} g)(omega_{l+1}) for l <= m; `polynomial` declares g has no tail.
NormCoherentSequence sequence_from_series(const Tower& tw, const Series& g, int m, bool polynomial = false);
// [c]_f(T) / T to degree D; its constant term is c.
Series cyclotomic_type_series(const Frame& frame, const FieldElement& c, int D);
NormCoherentSequence sequence_product(const Tower& tw, const NormCoherentSequence& a, const NormCoherentSequence& b);

struct ColemanSeries {
    // Polynomial of degree < q^{m+1} with vanishing top coefficient, so unique.
    Series C;
    int m = 0;
    int reliable = 0;  // coefficients of C are reliable modulo p^reliable
    // C(0) = Col_u(0) modulo pi_H^{const_valuation} (the kernel is spanned by f^{(m+1)} / T)
    int const_valuation = 0;
};
// Interpolation by a Z_p-linear solve on all layers at once.  `shift` replaces omega_{l+1}
// by sigma(omega_{l+1}) (sigma in Gal(H'_m / H'), restricted to each layer).
ColemanSeries coleman_recover(const Tower& tw, const NormCoherentSequence& u, const GalElt* shift = nullptr);
// Canonical representative modulo f^{(m+1)} with vanishing top coefficient.
Series coleman_normalize(const Tower& tw, const Series& h, int m);
// h(0) == k(0) modulo pi^v at p-adic precision prec.
bool constant_terms_agree(const RingContext& R, const FieldElement& a, const FieldElement& b, int v, int prec);

// Restriction of an element of Gal(H'_m / K) to layer l <= m.
GalElt restrict_to_level(const Tower& tw, int m, bool over_H, const GalElt& g, int l);
NormCoherentSequence act_on_sequence(const Tower& tw, const NormCoherentSequence& u, bool over_H, const GalElt& g);

struct CocycleReport {
    FieldElement kappa{};
    bool relation_holds = false;  // iota(Col_u^sigma o [kappa]) = sigma(u) on every layer
    bool coefficients_agree = false;  // Col_{sigma u} == normalized Col_u^sigma o [kappa]
    int prec = 0;
};
// Col_{sigma(u)} = Col_u^sigma o [kappa(sigma)]_{f, sigma f}, sigma in Gal(H'_m / H).
CocycleReport conjugate_cocycle(const Tower& tw, const NormCoherentSequence& u, const GalElt& sigma,
                                std::optional<FieldElement> kappa = std::nullopt);

struct WReport {
    NormCoherentSequence w;
    bool coherent = false;
    bool base_norm_one = false;
    bool constant_term = false;  // Col_w(0) = N_{H'/H}(Col_u(0))
};
// w_l = prod_i tau_i(u_l) over a transversal of Gal(H'_inf / H) modulo Gal(H'_inf / H').
WReport relative_reduce(const Tower& tw, const NormCoherentSequence& u, const std::vector<GalElt>& reps);

// The sign in (u, chi) = sign * chi(rec_H(Col_u(0))).
inline constexpr i64 kConstantTermSign = -1;
// chi(rec_H(x)) for a unit x of O_H; rec_H(x) acts through [x^{-1}].
RationalModZ reciprocity_value(const TowerGroup& G, const Character& chi, const FieldElement& x);

struct ConstantTermReport {
    RationalModZ lhs, rhs;
    FieldElement col0{};  // Col_u(0), or N_{H'/H}(Col_u(0)) on the corollary path
    bool equal = false;
    std::string path;  // "theorem" (K = H') or "corollary" (K = H)
};
// Theorem path for characters of Gal(H'_m / H'); corollary path for characters over H.
ConstantTermReport verify_constant_term(const Tower& tw, const NormCoherentSequence& u, const Character& chi);

}  // namespace ltc
