#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ltc/tower.hpp"

namespace ltc {

// Reduced fraction num/den with 0 <= num < den, read modulo 1.
struct RationalModZ {
    i64 num = 0;
    i64 den = 1;
    static RationalModZ make(i64 a, i64 b);
    static RationalModZ from(const Rational& r) { return make(r.num, r.den); }
    bool is_zero() const { return num == 0; }
    std::string str() const;
    friend bool operator==(const RationalModZ&, const RationalModZ&) = default;
};
RationalModZ operator+(const RationalModZ& a, const RationalModZ& b);
RationalModZ operator-(const RationalModZ& a);
RationalModZ operator-(const RationalModZ& a, const RationalModZ& b);
RationalModZ operator*(i64 k, const RationalModZ& a);

// Homomorphism Gal(H'_m / K) -> Q/Z given by its images of TowerGroup::generators().
struct Character {
    int level = 0;
    bool over_H = false;
    std::vector<RationalModZ> values;
    u64 order = 1;  // d_chi
};

// Validates the relations (generator orders, and (1, a1)^2 = (0, nu) when over H).
Character make_character(const TowerGroup& G, std::vector<RationalModZ> values);
// Character of Gal(H'_m / H') or of the unit part, through its values on unit classes.
Character character_from_units(const TowerGroup& G, const std::function<RationalModZ(const FieldElement&)>& on_unit,
                               RationalModZ on_frobenius = {});
RationalModZ char_eval(const TowerGroup& G, const Character& chi, const GalElt& g);
Character char_mul(const TowerGroup& G, const Character& a, const Character& b);
std::vector<Character> all_characters(const TowerGroup& G);
// chi o (restriction to the lower level) as a character of the group at level `to.level()`.
Character inflate_character(const TowerGroup& from, const TowerGroup& to, const Character& chi);

// b != 0 with sigma(b) = u b, sigma of order n on the span of the candidates.  When `average` is
// given every candidate c is first replaced by its trace over that subgroup.
struct Hilbert90 {
    LayerElement b;
    int candidate = 0;  // index into the deterministic candidate list
};
Hilbert90 hilbert90_solve(const Tower& tw, int l, bool over_H, const LayerElement& u, const GalElt& sigma, u64 n,
                          const Subgroup* average = nullptr, int first_candidate = 0);
// Teichmuller powers times powers of omega times theta^j (j < d), in the order tried by hilbert90_solve.
LayerElement h90_candidate(const Tower& tw, int l, int index);
int h90_candidate_count(const Tower& tw, int l);

struct PairingOptions {
    int first_candidate = 0;        // skip candidates, for independence checks
    const GalElt* sigma = nullptr;  // override the minimal sigma with chi(sigma) = 1/d
};

// (u, chi)_{L/K}, L = layer l, K = H' or H.
RationalModZ pairing_eval(const Tower& tw, int l, const LayerElement& u, const Character& chi,
                          const PairingOptions& opt = {});
// (w, psi)_{L/M} for M the fixed field of the subgroup B of Gal(L/H') (listed by its elements),
// psi given on B with order d.
RationalModZ pairing_eval_over(const Tower& tw, int l, const LayerElement& w, const std::vector<GalElt>& B,
                               const std::function<RationalModZ(const GalElt&)>& psi, u64 d);
// Tower version: evaluate at `level` (default: the character's level), pushing down by norms.
RationalModZ pairing_eval_tower(const Tower& tw, const std::vector<LayerElement>& seq, const Character& chi,
                                int level = -1);

}  // namespace ltc
