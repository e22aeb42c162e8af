#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ltc/coleman.hpp"

namespace ltc {

// Gamma = 1 + p_H^s with generators gamma_1, gamma_2 and omega_i = log(gamma_i), together with
// the torsion complement Delta = mu_{q-1} x (1 + p_H)_tors.  Indices i are 0-based here.
struct GammaFrame {
    const RingContext* ctx = nullptr;
    int s = 1;
    std::array<FieldElement, 2> gamma{};
    std::array<FieldElement, 2> omega{};
    // coords_H(omega_i / pi^s) in column i; a unit determinant certifies the basis.
    std::array<std::array<u64, 2>, 2> basis{};
    u64 det_inv = 0;
    FieldElement teich_gen{};
    u64 teich_order = 1;
    FieldElement tors_gen{};  // generator of (1 + p_H)_tors
    u64 tors_order = 1;
};

// Default gamma_1 = 1 + pi^s, gamma_2 = 1 + theta pi^s (inert) or 1 + pi^{s+1} (ramified).
// Needs d = 1 and H quadratic over Q_p.  DomainError when the logarithms are not a basis.
GammaFrame build_gamma_frame(const RingContext& R, std::optional<std::array<FieldElement, 2>> gammas = {});
// (x_1, x_2) with x = x_1 omega_1 + x_2 omega_2, x in p_H^s, reduced modulo p^k.
std::array<u64, 2> omega_coords(const GammaFrame& F, const FieldElement& x, int k);
// (1 + p^s) x (1 + p)_tors = 1 + p modulo p_H^{level+1}, by counting and a trivial intersection.
bool check_decomposition(const GammaFrame& F, int level);

// Tower layer whose Galois group over H is (O_H / p_H^{s+en})^x.
int kappa_level(const GammaFrame& F, int n);

// chi_{i,n} = (1/p^n) pi_{omega_j} o log o chi_ell, j != i, trivial on Delta.  chi_ell sends an
// element to its multiplier, so chi_ell o rec_H is inversion.  Certifies chi(gamma_i) = 0,
// chi(gamma_j) = 1/p^n and triviality on Delta.
Character build_chi(const Tower& tw, const GammaFrame& F, int i, int n);

struct KappaResult {
    int i = 0, n = 1;
    LayerElement epsilon, beta;
    FieldElement kappa{};
    i64 v_kappa = 0;  // v_H(kappa), an integer
    u64 v_mod = 0;    // v_kappa modulo p^n
    int candidate = 0;
};
// epsilon = N over ker chi_{i,n} of u at kappa_level, beta from Hilbert 90 for gamma_j, and
// kappa = prod_{t < p^n} gamma_j^t(beta) in H.
KappaResult compute_epsilon_beta_kappa(const Tower& tw, const GammaFrame& F, int i, int n,
                                       const NormCoherentSequence& u);

struct CongruenceLeg {
    int i = 0, j = 1;
    u64 log_coord = 0;    // pi_{omega_j}(log N(Col_u(0))) mod p^n
    u64 valuation = 0;    // v(kappa_{i,n}) mod p^n
    u64 pairing = 0;      // p^n (u, chi_{i,n})
    u64 reciprocity = 0;  // p^n * sign * chi_{i,n}(rec_H(N(Col_u(0))))
    bool agree = false;
};
struct MainCongruenceReport {
    int n = 1;
    u64 modulus = 1;  // p^n
    FieldElement col0{};
    FieldElement log_value{};
    std::array<CongruenceLeg, 2> legs;
    std::array<KappaResult, 2> kappa;
    // log = v(kappa_2) omega_1 + v(kappa_1) omega_2 modulo p^n p_H^s
    bool combined_holds = false;
    bool holds() const { return legs[0].agree && legs[1].agree && combined_holds; }
};
// u must reach kappa_level(F, n) and have trivial norm to H.
MainCongruenceReport verify_main_congruence(const Tower& tw, const GammaFrame& F, int n, const NormCoherentSequence& u);

}  // namespace ltc
