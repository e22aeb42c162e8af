#include "ltc/lubin_tate.hpp"

#include <algorithm>

#include "ltc/linalg.hpp"

namespace ltc {

namespace {

FieldElement scalar(u64 v) {
    FieldElement x{};
    x.c[0] = v;
    return x;
}

// Solves A c - B phi(c) = E for v(B) > v(A).  When d = 1 phi is trivial.
FieldElement solve_semilinear(const RingContext& R, const FieldElement& E, const FieldElement& A,
                              const FieldElement& B) {
    if (R.is_zero(E)) return R.zero();
    if (R.d() == 1) return R.div_exact(E, R.sub(A, B));
    FieldElement c = R.div_exact(E, A);
    for (int it = 0; it < 4 * R.e() * R.N() + 8; ++it) {
        FieldElement nc = R.div_exact(R.add(E, R.mul(B, R.frob(c, 1))), A);
        if (nc == c) return c;
        c = nc;
    }
    throw PrecisionFault("semilinear solve did not stabilize");
}

// x / z where x is only known to be divisible up to its low digits: digits that
// would block exact division are discarded first.
FieldElement div_rounded(const RingContext& R, const FieldElement& x, const FieldElement& z) {
    try {
        return R.div_exact(x, z);
    } catch (const PrecisionFault&) {
        int v = R.valuation(z);
        u64 pk = ipow(R.p(), (v + R.e() - 1) / R.e());
        FieldElement y = x;
        for (int i = 0; i < R.dim(); ++i) y.c[i] -= y.c[i] % pk;
        return R.div_exact(y, z);
    }
}

// Coefficients [f^j]_k of powers of a frame.  Closed form for pi' T + T^q, stored powers otherwise.
class FramePowers {
public:
    FramePowers(const Frame& fr, int D) : R_(*fr.ctx), D_(D), special_(fr.special), q_(static_cast<int>(fr.ctx->q())) {
        if (special_) {
            pip_.push_back(R_.one());
            for (int t = 1; t <= D; ++t) pip_.push_back(R_.mul(pip_.back(), fr.pi_prime));
            vfact_.assign(D + 1, 0);
            ufact_.assign(D + 1, 1);
            uinv_.assign(D + 1, 1);
            const u64 p = R_.p();
            for (int n = 1; n <= D; ++n) {
                u64 m = static_cast<u64>(n);
                int v = 0;
                while (m % p == 0) {
                    m /= p;
                    ++v;
                }
                vfact_[n] = vfact_[n - 1] + v;
                ufact_[n] = R_.mmul(ufact_[n - 1], m % R_.mod());
                uinv_[n] = R_.minv(ufact_[n]);
            }
        } else {
            Series f = truncate(fr.f, D);
            pw_.push_back(Series::constant(R_, D, R_.one()));
            for (int j = 1; j <= D; ++j) pw_.push_back(mul(pw_.back(), f));
        }
    }

    // Calls fn(j, [f^j]_k) for 1 <= j < k with nonzero coefficient.
    template <class Fn>
    void row(int k, Fn&& fn) const {
        if (special_) {
            // f^j = sum_i binom(j, i) pi'^{j-i} T^{j + i(q-1)}
            for (int i = 1;; ++i) {
                const int j = k - (q_ - 1) * i;
                if (j < i) break;
                int v = vfact_[j] - vfact_[i] - vfact_[j - i];
                if (v >= R_.N()) continue;
                u64 b = R_.mmul(R_.mmul(ufact_[j], uinv_[i]), uinv_[j - i]);
                b = R_.mmul(b, ipow(R_.p(), v));
                fn(j, R_.mul(scalar(b), pip_[j - i]));
            }
        } else {
            for (int j = 1; j < k && j <= D_; ++j)
                if (!R_.is_zero(pw_[j].c[k])) fn(j, pw_[j].c[k]);
        }
    }

    const Series& power(int j) const { return pw_[j]; }

private:
    const RingContext& R_;
    int D_;
    bool special_;
    int q_;
    std::vector<FieldElement> pip_;
    std::vector<int> vfact_;
    std::vector<u64> ufact_, uinv_;
    std::vector<Series> pw_;
};

Series extend_frame(const Frame& fr, int D) {
    if (D <= fr.f.D()) return truncate(fr.f, D);
    if (!fr.monic_q) throw DomainError("frame series is too short for the requested degree");
    return truncate(fr.f, D);
}

}  // namespace

Frame check_frame(const Series& f, const FieldElement& xi) {
    const RingContext& R = *f.ctx;
    const int q = static_cast<int>(R.q());
    if (f.D() < q) throw DomainError("frame: truncation below T^q");
    if (!R.is_zero(f.c[0])) throw DomainError("frame: f(0) is not zero");
    if (R.is_zero(xi) || !R.in_H(xi) || R.valuation(xi) != R.d())
        throw DomainError("frame: xi must lie in H with v_H(xi) = [H':H]");
    if (!(R.norm_to_H(f.c[1]) == xi)) throw DomainError("frame: norm of the linear coefficient differs from xi");
    for (int i = 1; i <= f.D(); ++i) {
        FieldElement c = i == q ? R.sub(f.c[i], R.one()) : f.c[i];
        if (R.is_unit(c)) throw DomainError("frame: f is not congruent to T^q modulo the maximal ideal");
    }
    Frame fr;
    fr.ctx = &R;
    fr.f = f;
    fr.xi = xi;
    fr.pi_prime = f.c[1];
    fr.monic_q = degree(f) == q && f.c[q] == R.one();
    fr.special = fr.monic_q;
    for (int i = 2; i < q; ++i)
        if (!R.is_zero(f.c[i])) fr.special = false;
    return fr;
}

Frame special_frame(const RingContext& R, const FieldElement& pi_prime, int D) {
    const int q = static_cast<int>(R.q());
    Series f(R, std::max(D, q));
    f.c[1] = pi_prime;
    f.c[q] = R.add(f.c[q], R.one());
    return check_frame(f, R.norm_to_H(pi_prime));
}

Frame default_frame(const RingContext& R, int D) {
    FieldElement pp = R.pi();
    if (R.d() == 2) {
        // u = zeta / phi(zeta) has norm 1; pick zeta so that u is not in H
        for (i64 k = 0;; ++k) {
            FieldElement z = R.add(R.theta(), R.from_int(k));
            if (!R.is_unit(z)) continue;
            FieldElement zeta = R.teichmuller(z);
            FieldElement u = R.mul(zeta, R.inv(R.frob(zeta, 1)));
            if (R.in_H(u)) continue;
            pp = R.mul(pp, u);
            break;
        }
    }
    return special_frame(R, pp, D);
}

Frame cyclotomic_frame(const RingContext& R, int D) {
    if (R.fH() != 1 || R.e() != 1) throw DomainError("cyclotomic frame needs H = Q_p");
    const int p = static_cast<int>(R.p());
    Series f(R, std::max(D, p));
    i64 b = 1;
    for (int i = 1; i <= p; ++i) {
        b = b * (p - i + 1) / i;
        f.c[i] = R.from_int(b);
    }
    return check_frame(f, R.norm_to_H(R.from_int(p)));
}

Frame twist_frame(const Frame& f, int k) {
    Frame g = f;
    g.f = frob(f.f, k);
    g.pi_prime = f.ctx->frob(f.pi_prime, k);
    g.twist = f.twist + k;
    return g;
}

Frame with_degree(const Frame& f, int D) {
    Frame g = f;
    g.f = extend_frame(f, D);
    return g;
}

Bivariate::Bivariate(const RingContext& c, int deg)
    : ctx(&c), D2(deg), a(static_cast<std::size_t>(deg + 1) * (deg + 1)) {}

Bivariate Bivariate::X(const RingContext& c, int deg) {
    Bivariate b(c, deg);
    if (deg >= 1) b.at(1, 0) = c.one();
    return b;
}

Bivariate Bivariate::Y(const RingContext& c, int deg) {
    Bivariate b(c, deg);
    if (deg >= 1) b.at(0, 1) = c.one();
    return b;
}

Bivariate bv_add(const Bivariate& x, const Bivariate& y) {
    Bivariate r(*x.ctx, std::min(x.D2, y.D2));
    for (int i = 0; i <= r.D2; ++i)
        for (int j = 0; i + j <= r.D2; ++j) r.at(i, j) = x.ctx->add(x.at(i, j), y.at(i, j));
    return r;
}

Bivariate bv_mul(const Bivariate& x, const Bivariate& y) {
    const RingContext& R = *x.ctx;
    Bivariate r(R, std::min(x.D2, y.D2));
    const int D = r.D2;
    for (int i = 0; i <= D; ++i)
        for (int j = 0; i + j <= D; ++j) {
            MulAcc acc;
            bool any = false;
            for (int a = 0; a <= i; ++a)
                for (int b = 0; b <= j; ++b) {
                    const FieldElement& u = x.at(a, b);
                    if (R.is_zero(u)) continue;
                    R.acc_mul(acc, u, y.at(i - a, j - b));
                    any = true;
                }
            if (any) r.at(i, j) = R.acc_reduce(acc);
        }
    return r;
}

Bivariate bv_compose(const Series& g, const Bivariate& B) {
    const RingContext& R = *B.ctx;
    if (!R.is_zero(B.at(0, 0))) throw DomainError("bv_compose: inner series has nonzero constant term");
    Bivariate r(R, B.D2);
    for (int k = std::min(degree(g), B.D2); k >= 0; --k) {
        r = bv_mul(r, B);
        r.at(0, 0) = R.add(r.at(0, 0), g.c[k]);
    }
    return r;
}

Series bv_eval(const Bivariate& G, const Series& A, const Series& B) {
    const RingContext& R = *G.ctx;
    if (!R.is_zero(A.c[0]) || !R.is_zero(B.c[0])) throw DomainError("bv_eval: nonzero constant term");
    const int D = std::min({A.D(), B.D(), G.D2});
    Series a = truncate(A, D), b = truncate(B, D);
    std::vector<Series> bp{Series::constant(R, D, R.one())};
    for (int j = 1; j <= D; ++j) bp.push_back(mul(bp.back(), b));
    Series res(R, D), ap = Series::constant(R, D, R.one());
    for (int i = 0; i <= D; ++i) {
        Series inner(R, D);
        for (int j = 0; i + j <= D; ++j) {
            const FieldElement& g = G.at(i, j);
            if (R.is_zero(g)) continue;
            for (int t = j; t <= D; ++t) inner.c[t] = R.add(inner.c[t], R.mul(g, bp[j].c[t]));
        }
        res = add(res, mul(ap, inner));
        ap = mul(ap, a);
    }
    res.prec = std::min(A.prec, B.prec);
    return res;
}

Bivariate bv_subst(const Bivariate& G, const Bivariate& A, const Bivariate& B) {
    const RingContext& R = *G.ctx;
    const int D = std::min({G.D2, A.D2, B.D2});
    std::vector<Bivariate> bp{Bivariate(R, D)};
    bp[0].at(0, 0) = R.one();
    for (int j = 1; j <= D; ++j) bp.push_back(bv_mul(bp.back(), B));
    Bivariate res(R, D), ap(R, D);
    ap.at(0, 0) = R.one();
    for (int i = 0; i <= D; ++i) {
        Bivariate inner(R, D);
        for (int j = 0; i + j <= D; ++j) {
            const FieldElement& g = G.at(i, j);
            if (R.is_zero(g)) continue;
            for (int s = 0; s <= D; ++s)
                for (int t = 0; s + t <= D; ++t) inner.at(s, t) = R.add(inner.at(s, t), R.mul(g, bp[j].at(s, t)));
        }
        res = bv_add(res, bv_mul(ap, inner));
        ap = bv_mul(ap, A);
    }
    return res;
}

Bivariate bv_frob(const Bivariate& x, int k) {
    Bivariate r = x;
    for (auto& c : r.a) c = x.ctx->frob(c, k);
    return r;
}

bool bv_equal(const Bivariate& x, const Bivariate& y, int k) {
    const int D = std::min(x.D2, y.D2);
    for (int i = 0; i <= D; ++i)
        for (int j = 0; i + j <= D; ++j)
            if (!x.ctx->equal_mod(x.at(i, j), y.at(i, j), k)) return false;
    return true;
}

FormalGroup formal_group(const Frame& frame, int D2, int Dlog) {
    const RingContext& R = *frame.ctx;
    if (Dlog < 0) Dlog = D2;
    if (D2 < 1) throw DomainError("formal_group: degree below 1");
    Series f = extend_frame(frame, std::max(D2, Dlog) + 1);
    const FieldElement pif = frame.pi_prime;
    const int gdeg = std::min(degree(f), D2);

    FormalGroup G;
    G.frame = frame;
    G.F = Bivariate(R, D2);
    G.F.at(1, 0) = R.one();
    G.F.at(0, 1) = R.one();
    Bivariate phiF = G.F;

    std::vector<Series> fp{Series::constant(R, D2, R.one())};
    for (int j = 1; j <= D2; ++j) fp.push_back(mul(fp.back(), truncate(f, D2)));

    // comp[i][k][a]: coefficient of X^a Y^{k-a} in F^i
    std::vector<std::vector<std::vector<FieldElement>>> comp(gdeg + 1, std::vector<std::vector<FieldElement>>(D2 + 1));
    auto Fk = [&](int k) {
        std::vector<FieldElement> v(k + 1);
        for (int a = 0; a <= k; ++a) v[a] = G.F.at(a, k - a);
        return v;
    };
    comp[1][1] = Fk(1);
    FieldElement pik = pif;
    for (int k = 2; k <= D2; ++k) {
        pik = R.mul(pik, pif);
        for (int i = 2; i <= std::min(k, gdeg); ++i) {
            std::vector<FieldElement> out(k + 1);
            std::vector<MulAcc> acc(k + 1);
            for (int s = 1; s <= k - i + 1; ++s) {
                const auto& u = comp[1][s];
                const auto& w = comp[i - 1][k - s];
                if (w.empty()) continue;
                for (int a1 = 0; a1 <= s; ++a1) {
                    if (R.is_zero(u[a1])) continue;
                    for (int a2 = 0; a2 <= k - s; ++a2) R.acc_mul(acc[a1 + a2], u[a1], w[a2]);
                }
            }
            for (int a = 0; a <= k; ++a) out[a] = R.acc_reduce(acc[a]);
            comp[i][k] = std::move(out);
        }
        for (int a = 0; a <= k; ++a) {
            const int b = k - a;
            MulAcc eacc;
            for (int a2 = 0; a2 <= a; ++a2)
                for (int b2 = 0; b2 <= b; ++b2) {
                    if (a2 + b2 == 0 || a2 + b2 >= k) continue;
                    const FieldElement& c = phiF.at(a2, b2);
                    if (R.is_zero(c) || R.is_zero(fp[a2].c[a]) || R.is_zero(fp[b2].c[b])) continue;
                    R.acc_mul(eacc, c, R.mul(fp[a2].c[a], fp[b2].c[b]));
                }
            MulAcc gacc;
            for (int i = 2; i <= std::min(k, gdeg); ++i) R.acc_mul(gacc, f.c[i], comp[i][k][a]);
            FieldElement E = R.sub(R.acc_reduce(eacc), R.acc_reduce(gacc));
            G.F.at(a, b) = solve_semilinear(R, E, pif, pik);
            phiF.at(a, b) = R.frob(G.F.at(a, b), 1);
        }
        comp[1][k] = Fk(k);
    }

    G.prec = iso_series_prec(R, D2);

    // F1 f' = pi' phi(F1)(f), F1(0) = 1
    Frame fl = frame;
    fl.f = f;
    FramePowers pw(fl, Dlog);
    Series df = derivative(f);
    G.F1 = Series(R, Dlog);
    G.F1.c[0] = R.one();
    std::vector<FieldElement> phiF1(Dlog + 1);
    phiF1[0] = R.one();
    pik = pif;
    for (int k = 1; k <= Dlog; ++k) {
        pik = R.mul(pik, pif);
        MulAcc sacc, dacc;
        pw.row(k, [&](int j, const FieldElement& c) { R.acc_mul(sacc, phiF1[j], c); });
        for (int i = 0; i < k; ++i) R.acc_mul(dacc, G.F1.c[i], df.c[k - i]);
        FieldElement E = R.sub(R.mul(pif, R.acc_reduce(sacc)), R.acc_reduce(dacc));
        G.F1.c[k] = solve_semilinear(R, E, pif, pik);
        phiF1[k] = R.frob(G.F1.c[k], 1);
    }
    G.F1.prec = iso_series_prec(R, Dlog);

    // lambda' = 1 / F1
    Series dl = invert_mul(G.F1);
    int B = 0;
    for (int k = 1; k <= Dlog; ++k) {
        int v = 0;
        for (int m = k; m % static_cast<int>(R.p()) == 0; m /= static_cast<int>(R.p())) ++v;
        B = std::max(B, v);
    }
    G.B = B;
    G.lambda_int = Series(R, Dlog);
    for (int k = 1; k <= Dlog; ++k) {
        u64 u = static_cast<u64>(k);
        int v = 0;
        while (u % R.p() == 0) {
            u /= R.p();
            ++v;
        }
        u64 sc = R.mmul(ipow(R.p(), B - v), R.minv(u % R.mod()));
        G.lambda_int.c[k] = R.mul(dl.c[k - 1], scalar(sc));
    }
    G.lambda_int.prec = G.F1.prec;
    return G;
}

Series formal_log_scaled(const FormalGroup& G, int& B) {
    B = G.B;
    return G.lambda_int;
}

int iso_series_prec(const RingContext& R, int D) {
    int loss = 1;
    for (u64 t = R.q(); t <= static_cast<u64>(std::max(D, 1)); t *= R.q()) ++loss;
    return std::max(0, R.N() - (loss + R.e() - 1) / R.e());
}

Series iso_series(const FieldElement& a, const Frame& F, const Frame& Gf, int D) {
    const RingContext& R = *F.ctx;
    const FieldElement pif = F.pi_prime, pig = Gf.pi_prime;
    if (!(R.mul(R.frob(a, 1), pif) == R.mul(a, pig)))
        throw DomainError("iso_series: phi(a) pi_f != a pi_g");
    Series g = extend_frame(Gf, D);
    Frame fl = F;
    fl.f = extend_frame(F, D);
    FramePowers fpw(fl, D);
    const int gdeg = std::min(degree(g), D);

    Series P(R, D);
    if (D >= 1) P.c[1] = a;
    std::vector<FieldElement> phic(D + 1);
    if (D >= 1) phic[1] = R.frob(a, 1);
    // pw[i][t] = [P^i]_t for 2 <= i <= gdeg
    std::vector<std::vector<FieldElement>> pw(std::max(gdeg + 1, 2), std::vector<FieldElement>(D + 1));
    std::vector<int> active;
    for (int i = 2; i <= gdeg; ++i)
        if (!R.is_zero(g.c[i])) active.push_back(i);
    const int imax = active.empty() ? 1 : active.back();
    FieldElement pik = pif;
    for (int k = 2; k <= D; ++k) {
        pik = R.mul(pik, pif);
        MulAcc gacc;
        for (int i = 2; i <= std::min(k, imax); ++i) {
            const std::vector<FieldElement>& prev = i == 2 ? P.c : pw[i - 1];
            MulAcc acc;
            for (int s = 1; s <= k - i + 1; ++s) {
                if (R.is_zero(P.c[s])) continue;
                R.acc_mul(acc, P.c[s], prev[k - s]);
            }
            pw[i][k] = R.acc_reduce(acc);
            if (!R.is_zero(g.c[i])) R.acc_mul(gacc, g.c[i], pw[i][k]);
        }
        MulAcc eacc;
        fpw.row(k, [&](int j, const FieldElement& c) { R.acc_mul(eacc, phic[j], c); });
        FieldElement E = R.sub(R.acc_reduce(eacc), R.acc_reduce(gacc));
        P.c[k] = solve_semilinear(R, E, pig, pik);
        phic[k] = R.frob(P.c[k], 1);
    }
    P.prec = iso_series_prec(R, D);
    return P;
}

Series iterate_f(const Frame& frame, int n) {
    if (!frame.monic_q) throw DomainError("iterate_f needs a polynomial frame");
    const RingContext& R = *frame.ctx;
    if (n < 1) throw DomainError("iterate_f: n must be positive");
    const int D = static_cast<int>(ipow(R.q(), n));
    Series h = extend_frame(frame, D);
    for (int j = 1; j < n; ++j) {
        if (frame.special) {
            Series lin = scal(h, R.frob(frame.pi_prime, j));
            h = add(lin, pow(h, R.q()));
        } else {
            h = compose(frob(extend_frame(frame, D), j), h);
        }
    }
    h.prec = R.N();
    return h;
}

int norm_reliable_degree(const Frame& frame, int D, int prec) {
    const RingContext& R = *frame.ctx;
    return (D + 1) / static_cast<int>(R.q()) - R.e() * prec;
}

namespace {

using Vec = std::vector<std::vector<FieldElement>>;  // q rows of S-series coefficients

// Multiplication by X on O[[S]][X]/(f(X) - S) in the power basis; len bounds the S-degree.
void mul_x(const RingContext& R, Vec& v, const Series& f, int q, int len) {
    const int L = static_cast<int>(v[0].size());
    std::vector<FieldElement> top = v[q - 1];
    for (int i = q - 1; i >= 1; --i) {
        v[i] = v[i - 1];
        if (!R.is_zero(f.c[i]))
            for (int t = 0; t < std::min(L, len); ++t)
                if (!R.is_zero(top[t])) v[i][t] = R.sub(v[i][t], R.mul(f.c[i], top[t]));
    }
    std::vector<FieldElement> z(L);
    for (int t = 0; t + 1 < L; ++t) z[t + 1] = top[t];
    if (!R.is_zero(f.c[0]))
        for (int t = 0; t < L; ++t) z[t] = R.sub(z[t], R.mul(f.c[0], top[t]));
    v[0] = std::move(z);
}

}  // namespace

Series norm_operator_full(const Frame& frame, const Series& h, int& reliable_degree) {
    if (!frame.monic_q) throw DomainError("norm_operator needs a monic degree-q polynomial frame");
    const RingContext& R = *frame.ctx;
    const int q = static_cast<int>(R.q());
    const int D = h.D();
    const Series f = truncate(frame.f, q);
    Vec acc(q, std::vector<FieldElement>(D + 1));
    const int hd = degree(h);
    for (int k = hd; k >= 0; --k) {
        mul_x(R, acc, f, q, (hd - k) / q + 2);
        acc[0][0] = R.add(acc[0][0], h.c[k]);
    }
    std::vector<std::vector<Series>> M(q, std::vector<Series>(q));
    Vec col = acc;
    for (int j = 0; j < q; ++j) {
        if (j) mul_x(R, col, f, q, D + 1);
        for (int i = 0; i < q; ++i) {
            Series s(R, D);
            s.c = col[i];
            M[i][j] = std::move(s);
        }
    }
    Series det = det_berkowitz(M);
    det.prec = h.prec;
    reliable_degree = norm_reliable_degree(frame, D, h.prec);
    return det;
}

Series norm_operator(const Frame& frame, const Series& h) {
    int rel = 0;
    Series full = norm_operator_full(frame, h, rel);
    if (rel < 0) throw PrecisionFault("norm_operator: truncation too short for the input precision");
    return truncate(full, rel);
}

Series norm_product_group_route(const FormalGroup& G, const Series& h) {
    const Frame& fr = G.frame;
    if (!fr.monic_q) throw DomainError("group route needs a monic degree-q polynomial frame");
    const RingContext& R = *fr.ctx;
    const int q = static_cast<int>(R.q());
    const int m = q - 1;
    const int D2 = G.F.D2;
    const int D = std::min(h.D(), D2);
    // e1 = f / T, monic of degree q - 1; y^b mod e1 for b <= D2
    std::vector<FieldElement> e1(q);
    for (int i = 0; i < q; ++i) e1[i] = fr.f.c[i + 1];
    std::vector<std::vector<FieldElement>> red(D2 + 1, std::vector<FieldElement>(m));
    std::vector<FieldElement> cur(m);
    cur[0] = R.one();
    red[0] = cur;
    for (int b = 1; b <= D2; ++b) {
        std::vector<FieldElement> nx(m);
        FieldElement top = cur[m - 1];
        for (int i = m - 1; i >= 1; --i) nx[i] = cur[i - 1];
        for (int i = 0; i < m; ++i) nx[i] = R.sub(nx[i], R.mul(top, e1[i]));
        cur = nx;
        red[b] = cur;
    }
    using Elt = std::vector<Series>;
    auto zero_elt = [&] { return Elt(m, Series(R, D)); };
    Elt Fy = zero_elt();
    for (int a = 0; a <= D; ++a)
        for (int b = 0; a + b <= D2; ++b) {
            const FieldElement& c = G.F.at(a, b);
            if (R.is_zero(c)) continue;
            for (int i = 0; i < m; ++i) Fy[i].c[a] = R.add(Fy[i].c[a], R.mul(c, red[b][i]));
        }
    auto emul = [&](const Elt& x, const Elt& y) {
        std::vector<Series> prod(2 * m - 1, Series(R, D));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) prod[i + j] = add(prod[i + j], mul(x[i], y[j]));
        for (int t = 2 * m - 2; t >= m; --t) {
            for (int i = 0; i < m; ++i) prod[t - m + i] = sub(prod[t - m + i], scal(prod[t], e1[i]));
        }
        prod.resize(m);
        return prod;
    };
    Elt val = zero_elt();
    for (int k = degree(h); k >= 0; --k) {
        val = emul(val, Fy);
        val[0].c[0] = R.add(val[0].c[0], h.c[k]);
    }
    std::vector<std::vector<Series>> M(m, std::vector<Series>(m));
    Elt col = val;
    Elt y = zero_elt();
    if (m > 1) y[1].c[0] = R.one();
    for (int j = 0; j < m; ++j) {
        if (j) col = emul(col, y);
        for (int i = 0; i < m; ++i) M[i][j] = col[i];
    }
    Series P = mul(truncate(h, D), det_berkowitz(M));
    P.prec = h.prec;
    return P;
}

Series norm_from_product(const Frame& frame, const Series& P, int K) {
    const RingContext& R = *frame.ctx;
    K = std::min(K, P.D());
    Frame fl = frame;
    fl.f = extend_frame(frame, K);
    FramePowers fpw(fl, K);
    Series c(R, K);
    c.c[0] = P.c[0];
    FieldElement pik = R.one();
    for (int k = 1; k <= K; ++k) {
        pik = R.mul(pik, frame.pi_prime);
        MulAcc acc;
        fpw.row(k, [&](int j, const FieldElement& v) { R.acc_mul(acc, c.c[j], v); });
        c.c[k] = div_rounded(R, R.sub(P.c[k], R.acc_reduce(acc)), pik);
    }
    c.prec = std::max(0, P.prec - (2 * K + R.e() - 1) / R.e());
    return c;
}

Series iterated_norm(const Frame& frame, const Series& h, int i) {
    Series x = h;
    for (int j = 0; j < i; ++j) x = norm_operator(twist_frame(frame, j), x);
    return x;
}

FixedPoint norm_fixed_point(const Frame& frame, const Series& g0, int K) {
    const RingContext& R = *frame.ctx;
    FixedPoint out;
    Series h = g0;
    int rel = 0;
    for (int it = 0; it < K; ++it) {
        Series nh = frob(norm_operator_full(frame, h, rel), -1);
        out.iterations = it + 1;
        bool stable = equal_mod(nh, h, h.prec, rel);
        h = nh;
        if (stable) break;
    }
    Series Ng = norm_operator_full(frame, h, rel);
    Series gphi = frob(h, 1);
    int cert = 0;
    while (cert < h.prec && equal_mod(Ng, gphi, cert + 1, rel)) ++cert;
    out.g = h;
    out.reliable_degree = rel;
    out.certified_prec = cert;
    (void)R;
    return out;
}

}  // namespace ltc
