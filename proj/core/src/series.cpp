#include "ltc/series.hpp"

#include <algorithm>
#include <cmath>

namespace ltc {

Series::Series(const RingContext& ring, int D) : ctx(&ring), c(static_cast<std::size_t>(D) + 1), prec(ring.N()) {
    if (D < 0) throw DomainError("negative truncation degree");
}

Series Series::zero(const RingContext& ring, int D) { return Series(ring, D); }

Series Series::constant(const RingContext& ring, int D, const FieldElement& a) {
    Series s(ring, D);
    s.c[0] = a;
    return s;
}

Series Series::T(const RingContext& ring, int D) {
    Series s(ring, D);
    if (D >= 1) s.c[1] = ring.one();
    return s;
}

Series Series::poly(const RingContext& ring, int D, const std::vector<FieldElement>& coeffs) {
    Series s(ring, D);
    for (std::size_t i = 0; i < coeffs.size() && static_cast<int>(i) <= D; ++i) s.c[i] = coeffs[i];
    return s;
}

Series Series::from_ints(const RingContext& ring, int D, const std::vector<i64>& coeffs) {
    Series s(ring, D);
    for (std::size_t i = 0; i < coeffs.size() && static_cast<int>(i) <= D; ++i) s.c[i] = ring.from_int(coeffs[i]);
    return s;
}

namespace {

void check_same(const Series& a, const Series& b) {
    if (a.ctx != b.ctx) throw DomainError("series from different contexts");
}

int low_index(const Series& a) {
    for (int i = 0; i <= a.D(); ++i)
        if (!a.ctx->is_zero(a.c[i])) return i;
    return a.D() + 1;
}

}  // namespace

Series truncate(const Series& g, int D) {
    Series r(*g.ctx, D);
    r.prec = g.prec;
    for (int i = 0; i <= std::min(D, g.D()); ++i) r.c[i] = g.c[i];
    return r;
}

Series add(const Series& a, const Series& b) {
    check_same(a, b);
    int D = std::min(a.D(), b.D());
    Series r(*a.ctx, D);
    r.prec = std::min(a.prec, b.prec);
    for (int i = 0; i <= D; ++i) r.c[i] = a.ctx->add(a.c[i], b.c[i]);
    return r;
}

Series sub(const Series& a, const Series& b) {
    check_same(a, b);
    int D = std::min(a.D(), b.D());
    Series r(*a.ctx, D);
    r.prec = std::min(a.prec, b.prec);
    for (int i = 0; i <= D; ++i) r.c[i] = a.ctx->sub(a.c[i], b.c[i]);
    return r;
}

Series neg(const Series& a) {
    Series r = a;
    for (auto& x : r.c) x = a.ctx->neg(x);
    return r;
}

Series mul(const Series& a, const Series& b) {
    check_same(a, b);
    const RingContext& R = *a.ctx;
    int D = std::min(a.D(), b.D());
    Series r(R, D);
    r.prec = std::min(a.prec, b.prec);
    int la = low_index(a), lb = low_index(b);
    int ha = std::min(D, degree(a)), hb = std::min(D, degree(b));
    for (int k = la + lb; k <= D; ++k) {
        MulAcc acc;
        int lo = std::max(la, k - hb), hi = std::min(ha, k - lb);
        for (int i = lo; i <= hi; ++i) R.acc_mul(acc, a.c[i], b.c[k - i]);
        r.c[k] = R.acc_reduce(acc);
    }
    return r;
}

Series scal(const Series& a, const FieldElement& x) {
    Series r = a;
    for (auto& y : r.c) y = a.ctx->mul(y, x);
    return r;
}

Series frob(const Series& a, int k) {
    Series r = a;
    for (auto& y : r.c) y = a.ctx->frob(y, k);
    return r;
}

Series pow(const Series& a, u64 k) {
    Series r = Series::constant(*a.ctx, a.D(), a.ctx->one());
    r.prec = a.prec;
    Series b = a;
    while (k) {
        if (k & 1) r = mul(r, b);
        k >>= 1;
        if (k) b = mul(b, b);
    }
    return r;
}

Series shift_up(const Series& a, int k) {
    Series r(*a.ctx, a.D());
    r.prec = a.prec;
    for (int i = 0; i + k <= a.D(); ++i) r.c[i + k] = a.c[i];
    return r;
}

Series shift_down(const Series& a, int k) {
    for (int i = 0; i < k && i <= a.D(); ++i)
        if (!a.ctx->is_zero(a.c[i])) throw DomainError("shift_down drops a nonzero coefficient");
    Series r(*a.ctx, std::max(0, a.D() - k));
    r.prec = a.prec;
    for (int i = k; i <= a.D(); ++i) r.c[i - k] = a.c[i];
    return r;
}

int degree(const Series& g) {
    for (int i = g.D(); i >= 0; --i)
        if (!g.ctx->is_zero(g.c[i])) return i;
    return -1;
}

bool is_zero(const Series& g) { return degree(g) < 0; }

bool equal_mod(const Series& a, const Series& b, int k, int upto) {
    int D = std::min(a.D(), b.D());
    if (upto >= 0) D = std::min(D, upto);
    for (int i = 0; i <= D; ++i)
        if (!a.ctx->equal_mod(a.c[i], b.c[i], k)) return false;
    return true;
}

Series compose(const Series& g, const Series& h) {
    check_same(g, h);
    if (!h.ctx->is_zero(h.c[0])) throw DomainError("compose: inner series has nonzero constant term");
    const RingContext& R = *g.ctx;
    int D = std::min(g.D(), h.D());
    Series hh = truncate(h, D);
    int gdeg = std::min(D, degree(g));
    Series res(R, D);
    res.prec = std::min(g.prec, h.prec);
    if (gdeg < 0) return res;
    int k = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(gdeg + 1)))));
    std::vector<Series> pw;
    pw.push_back(Series::constant(R, D, R.one()));
    for (int i = 1; i <= k; ++i) pw.push_back(mul(pw.back(), hh));
    const Series& big = pw[k];
    int blocks = gdeg / k + 1;
    for (int j = blocks - 1; j >= 0; --j) {
        Series blk(R, D);
        for (int t = 0; t <= D; ++t) {
            MulAcc acc;
            bool any = false;
            for (int i = 0; i < k; ++i) {
                int gi = j * k + i;
                if (gi > gdeg) break;
                if (t < i) break;  // h^i starts at T^i
                R.acc_mul(acc, g.c[gi], pw[i].c[t]);
                any = true;
            }
            if (any) blk.c[t] = R.acc_reduce(acc);
        }
        res = j == blocks - 1 ? blk : add(mul(res, big), blk);
    }
    res.prec = std::min(g.prec, h.prec);
    return res;
}

Series invert_mul(const Series& g) {
    const RingContext& R = *g.ctx;
    if (!R.is_unit(g.c[0])) throw DomainError("invert_mul: constant term is not a unit");
    int D = g.D();
    Series b(R, D);
    b.prec = g.prec;
    FieldElement g0i = R.inv(g.c[0]);
    b.c[0] = g0i;
    int gd = degree(g);
    for (int k = 1; k <= D; ++k) {
        MulAcc acc;
        for (int i = 1; i <= std::min(k, gd); ++i) R.acc_mul(acc, g.c[i], b.c[k - i]);
        b.c[k] = R.neg(R.mul(g0i, R.acc_reduce(acc)));
    }
    return b;
}

Series derivative(const Series& g) {
    const RingContext& R = *g.ctx;
    Series r(R, std::max(0, g.D() - 1));
    r.prec = g.prec;
    for (int i = 1; i <= g.D(); ++i) r.c[i - 1] = R.scal(g.c[i], static_cast<u64>(i));
    return r;
}

Series reversion(const Series& h) {
    const RingContext& R = *h.ctx;
    if (!R.is_zero(h.c[0])) throw DomainError("reversion: nonzero constant term");
    if (h.D() < 1 || !R.is_unit(h.c[1])) throw DomainError("reversion: linear coefficient is not a unit");
    int D = h.D();
    Series T = Series::T(R, D);
    Series r = scal(T, R.inv(h.c[1]));
    Series dh = derivative(h);
    dh = truncate(dh, D);
    for (int it = 0; it < 64; ++it) {
        Series err = sub(compose(h, r), T);
        if (is_zero(err)) {
            r.prec = h.prec;
            return r;
        }
        Series corr = mul(err, invert_mul(compose(dh, r)));
        r = sub(r, corr);
    }
    throw PrecisionFault("reversion: Newton iteration did not stabilize");
}

std::pair<Series, Series> divmod_monic(const Series& g, const Series& m) {
    const RingContext& R = *g.ctx;
    int mu = degree(m);
    if (mu < 0 || !(m.c[mu] == R.one())) throw DomainError("divmod_monic: modulus is not monic");
    std::vector<FieldElement> t(g.c.begin(), g.c.end());
    int top = degree(g);
    Series q(R, std::max(0, top - mu));
    q.prec = std::min(g.prec, m.prec);
    for (int k = top; k >= mu; --k) {
        FieldElement c = t[k];
        if (R.is_zero(c)) continue;
        q.c[k - mu] = c;
        for (int i = 0; i < mu; ++i) t[k - mu + i] = R.sub(t[k - mu + i], R.mul(c, m.c[i]));
        t[k] = R.zero();
    }
    Series rem(R, std::max(0, mu - 1));
    rem.prec = q.prec;
    for (int i = 0; i < mu && i <= g.D(); ++i) rem.c[i] = t[i];
    return {q, rem};
}

Series rem_monic(const Series& g, const Series& m) { return divmod_monic(g, m).second; }

namespace {

// Product in O[T]/(m), inputs and output of degree < deg m.
Series mulmod_poly(const Series& a, const Series& b, const Series& m) {
    const RingContext& R = *a.ctx;
    int mu = degree(m);
    Series A = truncate(a, 2 * mu), B = truncate(b, 2 * mu);
    return rem_monic(truncate(mul(A, B), 2 * mu), m);
    (void)R;
}

}  // namespace

Preparation weierstrass_prep(const Series& g, bool polynomial_input) {
    const RingContext& R = *g.ctx;
    int D = g.D();
    int mu = -1;
    for (int i = 0; i <= D; ++i)
        if (R.is_unit(g.c[i])) {
            mu = i;
            break;
        }
    if (mu < 0) throw DomainError("weierstrass_prep: every coefficient lies in the maximal ideal");
    Preparation out;
    out.mu = mu;
    int prec = g.prec;
    if (!polynomial_input) {
        if (mu >= D) throw PrecisionFault("weierstrass_prep: truncation too short");
        prec = std::min(prec, mu == 0 ? prec : (D + 1) / mu);
    }
    if (mu == 0) {
        out.distinguished = Series::constant(R, 0, R.one());
        out.unit = g;
        out.distinguished.prec = prec;
        return out;
    }
    // Newton iteration P <- P + (S Q^{-1} mod P) where g = Q P + S.
    Series P(R, mu);
    P.c[mu] = R.one();
    for (int it = 0; it < 96; ++it) {
        auto [Q, S] = divmod_monic(g, P);
        if (is_zero(S)) {
            out.distinguished = P;
            out.distinguished.prec = prec;
            out.unit = truncate(Q, D);
            out.unit.prec = prec;
            return out;
        }
        Series Qr = rem_monic(Q, P);
        // inverse of Q modulo P by Newton, starting from the constant inverse
        Series y = Series::constant(R, mu - 1, R.inv(Qr.c[0]));
        Series two = Series::constant(R, mu - 1, R.from_int(2));
        for (int jt = 0; jt < 96; ++jt) {
            Series ny = mulmod_poly(y, sub(two, mulmod_poly(Qr, y, P)), P);
            ny = truncate(ny, mu - 1);
            if (equal_mod(ny, y, R.N())) break;
            y = ny;
        }
        Series delta = mulmod_poly(S, y, P);
        for (int i = 0; i < mu; ++i) P.c[i] = R.add(P.c[i], i <= delta.D() ? delta.c[i] : R.zero());
    }
    throw PrecisionFault("weierstrass_prep: iteration did not stabilize");
}

}  // namespace ltc
