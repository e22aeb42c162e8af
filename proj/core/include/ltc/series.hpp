#pragma once

#include <utility>
#include <vector>

#include "ltc/padic.hpp"

namespace ltc {

// Power series over O_{H'} truncated after T^D.  Every coefficient is reliable
// modulo p^prec; prec never exceeds the context's N.
struct Series {
    const RingContext* ctx = nullptr;
    std::vector<FieldElement> c;
    int prec = 0;

    Series() = default;
    Series(const RingContext& ring, int D);
    int D() const { return static_cast<int>(c.size()) - 1; }
    const FieldElement& operator[](int i) const { return c[i]; }
    FieldElement& operator[](int i) { return c[i]; }

    static Series zero(const RingContext& ring, int D);
    static Series constant(const RingContext& ring, int D, const FieldElement& a);
    static Series T(const RingContext& ring, int D);
    // Coefficients low to high; missing tail is zero.
    static Series poly(const RingContext& ring, int D, const std::vector<FieldElement>& coeffs);
    static Series from_ints(const RingContext& ring, int D, const std::vector<i64>& coeffs);
};

Series truncate(const Series& g, int D);
Series add(const Series& a, const Series& b);
Series sub(const Series& a, const Series& b);
Series neg(const Series& a);
Series mul(const Series& a, const Series& b);
Series scal(const Series& a, const FieldElement& x);
// Coefficientwise phi^k.
Series frob(const Series& a, int k);
Series pow(const Series& a, u64 k);
// a * T^k, truncated.
Series shift_up(const Series& a, int k);
// a / T^k; the dropped coefficients must vanish.
Series shift_down(const Series& a, int k);

// g o h for h(0) = 0 (Brent-Kung baby-step giant-step).
Series compose(const Series& g, const Series& h);
Series invert_mul(const Series& g);
Series reversion(const Series& h);
Series derivative(const Series& g);

// Index of the last nonzero coefficient, or -1.
int degree(const Series& g);
bool is_zero(const Series& g);
// Coefficientwise equality modulo p^k up to degree `upto` (default: all).
bool equal_mod(const Series& a, const Series& b, int k, int upto = -1);

struct Preparation {
    Series distinguished;  // monic polynomial of degree mu, lower coefficients in p_{H'}
    Series unit;
    int mu = 0;
};
// g = distinguished * unit.  `polynomial_input` declares that g has no tail beyond D.
Preparation weierstrass_prep(const Series& g, bool polynomial_input = false);

// Remainder of the polynomial g (degree <= D) modulo the monic polynomial m.
Series rem_monic(const Series& g, const Series& m);
// Quotient and remainder of polynomial division by a monic m.
std::pair<Series, Series> divmod_monic(const Series& g, const Series& m);

}  // namespace ltc
