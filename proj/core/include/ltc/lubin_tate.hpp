#pragma once

#include <string>
#include <vector>

#include "ltc/padic.hpp"
#include "ltc/series.hpp"

namespace ltc {

// A frame series f: linear coefficient pi' with N_{H'/H}(pi') = xi, v_H(xi) = d,
// and f = T^q modulo the maximal ideal.
struct Frame {
    const RingContext* ctx = nullptr;
    Series f;
    FieldElement xi{};
    FieldElement pi_prime{};
    // f = pi' T + T^q exactly; enables closed-form powers of f.
    bool special = false;
    // f is a monic polynomial of degree q; required by the determinant norm.
    bool monic_q = false;
    int twist = 0;  // f = phi^twist(base frame)
};

// Validates the three frame conditions; the DomainError names the violated one.
Frame check_frame(const Series& f, const FieldElement& xi);
Frame special_frame(const RingContext& ctx, const FieldElement& pi_prime, int D);
// pi' = pi_H when d = 1; pi' = pi_H * zeta / phi(zeta) for a Teichmuller zeta when d = 2.
Frame default_frame(const RingContext& ctx, int D);
// (1 + T)^p - 1; needs q = p.
Frame cyclotomic_frame(const RingContext& ctx, int D);
// phi^k(f), same xi.
Frame twist_frame(const Frame& f, int k);
Frame with_degree(const Frame& f, int D);

// Dense bivariate series truncated at total degree D2.
struct Bivariate {
    const RingContext* ctx = nullptr;
    int D2 = 0;
    std::vector<FieldElement> a;  // index i * (D2 + 1) + j for X^i Y^j
    Bivariate() = default;
    Bivariate(const RingContext& c, int deg);
    FieldElement& at(int i, int j) { return a[static_cast<std::size_t>(i) * (D2 + 1) + j]; }
    const FieldElement& at(int i, int j) const { return a[static_cast<std::size_t>(i) * (D2 + 1) + j]; }
    static Bivariate X(const RingContext& c, int deg);
    static Bivariate Y(const RingContext& c, int deg);
};
Bivariate bv_add(const Bivariate& x, const Bivariate& y);
Bivariate bv_mul(const Bivariate& x, const Bivariate& y);
// g(B) for a univariate g and B with zero constant term.
Bivariate bv_compose(const Series& g, const Bivariate& B);
// G(A, B) for a bivariate G and univariate A, B of zero constant term, valid to degree min(D, D2).
Series bv_eval(const Bivariate& G, const Series& A, const Series& B);
// G(A, B) for bivariate A, B of zero constant term.
Bivariate bv_subst(const Bivariate& G, const Bivariate& A, const Bivariate& B);
Bivariate bv_frob(const Bivariate& x, int k);
bool bv_equal(const Bivariate& x, const Bivariate& y, int k);

struct FormalGroup {
    Frame frame;
    Bivariate F;
    int prec = 0;  // coefficients of F are reliable modulo p^prec
    // F(X, Y) = X + Y F1(X) + O(Y^2), solved separately to degree Dlog.
    Series F1;
    // lambda = p^{-B} lambda_int
    Series lambda_int;
    int B = 0;
};

// F to total degree D2; F1 and lambda to degree Dlog (default D2).
FormalGroup formal_group(const Frame& frame, int D2, int Dlog = -1);
Series formal_log_scaled(const FormalGroup& G, int& B);

// [a]_{f,g}: linear coefficient a, g o [a] = [a]^phi o f.  Needs phi(a) pi_f = a pi_g.
Series iso_series(const FieldElement& a, const Frame& f, const Frame& g, int D);
// Precision (p-digits) guaranteed for iso_series coefficients at truncation D.
int iso_series_prec(const RingContext& ctx, int D);

// f^{(n)} = phi^{n-1}(f) o ... o f, exact as a polynomial of degree q^n for polynomial frames.
Series iterate_f(const Frame& frame, int n);

// Coleman norm operator via det of multiplication by h(X) on O[[S]][X]/(f(X) - S).
// Returns the coefficients that are reliable at the input precision.
Series norm_operator(const Frame& frame, const Series& h);
// Full-length result including the unreliable tail; reliable_degree receives the cut.
Series norm_operator_full(const Frame& frame, const Series& h, int& reliable_degree);
int norm_reliable_degree(const Frame& frame, int D, int prec);
// prod_{omega in W^1 \ {0}} h(T +_F omega) times h(T), via the formal group and the
// distinguished factor of f/T.  Valid to degree about D2 of the group.
Series norm_product_group_route(const FormalGroup& G, const Series& h);
// Recover N h from P = (N h) o f by the triangular solve dividing by pi'^k.
Series norm_from_product(const Frame& frame, const Series& P, int K);

Series iterated_norm(const Frame& frame, const Series& h, int i);

struct FixedPoint {
    Series g;
    int iterations = 0;
    int reliable_degree = 0;
    int certified_prec = 0;  // N g == g^phi modulo p^certified_prec up to reliable_degree
};
// Iterates h <- phi^{-1}(N h) at fixed truncation until stable, then certifies.
FixedPoint norm_fixed_point(const Frame& frame, const Series& g0, int K);

}  // namespace ltc
