#include "ltc/padic.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace ltc {

u64 ipow(u64 b, int k) {
    u64 r = 1;
    for (int i = 0; i < k; ++i) r *= b;
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 f = 2; f * f <= n; ++f)
        if (n % f == 0) return false;
    return true;
}

namespace {

// Polynomials over F_p, low to high.
using Fp = std::vector<u64>;

Fp fp_mod(Fp a, const Fp& m, u64 p) {
    // m monic
    while (a.size() >= m.size()) {
        u64 c = a.back() % p;
        std::size_t sh = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i)
            a[sh + i] = (a[sh + i] + p - (c * m[i]) % p) % p;
        a.pop_back();
    }
    return a;
}

bool fp_has_factor_of_degree(const Fp& poly, int k, u64 p) {
    // brute force over monic polynomials of degree k
    u64 count = ipow(p, k);
    for (u64 code = 0; code < count; ++code) {
        Fp m(k + 1, 0);
        u64 c = code;
        for (int i = 0; i < k; ++i) {
            m[i] = c % p;
            c /= p;
        }
        m[k] = 1;
        Fp rem = fp_mod(poly, m, p);
        bool zero = std::all_of(rem.begin(), rem.end(), [](u64 v) { return v == 0; });
        if (zero) return true;
    }
    return false;
}

// First monic irreducible of degree r over F_p in lexicographic order.
Fp first_irreducible(int r, u64 p) {
    u64 count = ipow(p, r);
    for (u64 code = 0; code < count; ++code) {
        Fp m(r + 1, 0);
        u64 c = code;
        for (int i = 0; i < r; ++i) {
            m[i] = c % p;
            c /= p;
        }
        m[r] = 1;
        if (m[0] == 0) continue;
        bool irr = true;
        for (int k = 1; 2 * k <= r && irr; ++k)
            if (fp_has_factor_of_degree(m, k, p)) irr = false;
        if (irr) return m;
    }
    throw DomainError("no irreducible polynomial found");
}

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    i64 x1, y1;
    i64 g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

i64 floor_mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

Ctx RingContext::make(u64 p, int N, int e, int d, std::optional<std::array<i64, 2>> eis) {
    ContextParams cp;
    cp.p = p;
    cp.N = N;
    cp.e = e;
    cp.d = d;
    cp.eis = eis;
    return make(cp);
}

Ctx RingContext::make(const ContextParams& params) {
    std::shared_ptr<RingContext> ctx(new RingContext());
    ctx->init(params, true);
    return ctx;
}

void RingContext::init(const ContextParams& params, bool guard) {
    params_ = params;
    p_ = params.p;
    N_ = params.N;
    e_ = params.e;
    fH_ = params.fH;
    d_ = params.d;
    if (!is_prime(p_)) throw DomainError("p must be prime");
    if (N_ < 4) throw DomainError("precision N must be at least 4");
    if (e_ != 1 && e_ != 2) throw DomainError("unsupported ramification index");
    if (fH_ != 1 && fH_ != 2) throw DomainError("unsupported residue degree of H");
    if (d_ != 1 && d_ != 2) throw DomainError("unsupported degree d");
    if (e_ == 2 && p_ != 2 && p_ != 3) throw DomainError("unsupported (p, e) pair: e = 2 needs p in {2, 3}");
    if (e_ == 2 && fH_ != 1) throw DomainError("ramified base must have residue degree 1");
    int total = N_ + (guard ? kGuard : 0);
    long double bound = 1;
    for (int i = 0; i < total; ++i) bound *= static_cast<long double>(p_);
    if (bound >= 4.0e18L) throw DomainError("p^(N+guard) exceeds the 62-bit coefficient range");
    mod_ = ipow(p_, N_);
    small_mod_ = mod_ < (u64{1} << 32);
    r_ = fH_ * d_;
    q_ = ipow(p_, fH_);
    s_ = static_cast<int>(e_ / (p_ - 1)) + 1;

    if (e_ == 2) {
        if (params.eis) {
            eis_ = *params.eis;
        } else {
            eis_ = {static_cast<i64>(p_), static_cast<i64>(p_)};  // x^2 + p x + p
        }
        i64 c0 = eis_[0], c1 = eis_[1];
        i64 pp = static_cast<i64>(p_);
        if (floor_mod(c1, pp) != 0 || floor_mod(c0, pp) != 0 || floor_mod(c0, pp * pp) == 0)
            throw DomainError("eis is not Eisenstein");
        c0_ = mred(c0);
        c1_ = mred(c1);
    } else if (params.eis) {
        throw DomainError("eis given for an unramified base");
    }

    Fp irr = r_ == 1 ? Fp{0, 1} : first_irreducible(r_, p_);
    wpoly_ = irr;

    // Absolute Frobenius on W: sigma(theta) is the root of wpoly near theta^p.
    sigma_mats_.assign(r_, std::vector<std::vector<u64>>(r_, std::vector<u64>(r_, 0)));
    for (int k = 0; k < r_; ++k) {
        for (int i = 0; i < r_; ++i) sigma_mats_[k][i][i] = 1;
    }
    if (r_ > 1) {
        FieldElement th = theta();
        auto eval_poly = [&](const FieldElement& y, bool deriv) {
            FieldElement acc{};
            for (int i = r_; i >= 0; --i) {
                if (deriv && i == 0) break;
                acc = mul(acc, y);
                u64 coef = deriv ? mmul(wpoly_[i], static_cast<u64>(i) % mod_) : wpoly_[i];
                acc.c[0] = madd(acc.c[0], coef);
            }
            return acc;
        };
        FieldElement y = pow(th, p_);
        for (int it = 0; it < 2 * N_ + 8; ++it) {
            FieldElement val = eval_poly(y, false);
            // derivative: sum i * w_i y^{i-1}
            FieldElement der{};
            for (int i = r_; i >= 1; --i) {
                der = mul(der, y);
                der.c[0] = madd(der.c[0], mmul(wpoly_[i], static_cast<u64>(i)));
            }
            FieldElement ny = sub(y, mul(val, inv(der)));
            if (ny == y) break;
            y = ny;
        }
        (void)eval_poly;
        // sigma^1 matrix: column j = y^j
        std::vector<std::vector<u64>> s1(r_, std::vector<u64>(r_, 0));
        FieldElement pw = one();
        for (int j = 0; j < r_; ++j) {
            for (int i = 0; i < r_; ++i) s1[i][j] = pw.c[i];
            pw = mul(pw, y);
        }
        for (int k = 1; k < r_; ++k) {
            auto& prev = sigma_mats_[k - 1];
            auto& cur = sigma_mats_[k];
            for (int i = 0; i < r_; ++i)
                for (int j = 0; j < r_; ++j) {
                    u64 acc = 0;
                    for (int t = 0; t < r_; ++t) acc = madd(acc, mmul(s1[i][t], prev[t][j]));
                    cur[i][j] = acc;
                }
        }
    }

    // Generator of mu_{q-1} inside H.
    if (fH_ == 1) {
        u64 g = 1;
        for (u64 cand = 1; cand < p_; ++cand) {
            bool prim = true;
            for (u64 f = 2; f <= p_ - 1 && prim; ++f) {
                if ((p_ - 1) % f != 0 || !is_prime(f)) continue;
                u64 acc = 1;
                for (u64 i = 0; i < (p_ - 1) / f; ++i) acc = acc * cand % p_;
                if (acc == 1) prim = false;
            }
            if (prim) {
                g = cand;
                break;
            }
        }
        teich_gen_ = p_ == 2 ? one() : teichmuller(from_int(static_cast<i64>(g)));
    } else {
        u64 Q = ipow(p_, r_);
        u64 exp = (Q - 1) / (q_ - 1);
        bool found = false;
        for (i64 k = 0; k < static_cast<i64>(p_) && !found; ++k) {
            for (i64 l = 1; l < static_cast<i64>(p_) && !found; ++l) {
                FieldElement x = add(scal(theta(), static_cast<u64>(l)), from_int(k));
                FieldElement z = pow(teichmuller(x), exp);
                bool prim = true;
                for (u64 f = 2; f <= q_ - 1 && prim; ++f) {
                    if ((q_ - 1) % f != 0 || !is_prime(f)) continue;
                    if (pow(z, (q_ - 1) / f) == one()) prim = false;
                }
                if (prim) {
                    teich_gen_ = z;
                    found = true;
                }
            }
        }
        if (!found) throw DomainError("no generator of mu_{q-1} found");
    }

    basis_h_.clear();
    basis_h_.push_back(one());
    if (e_ == 2) basis_h_.push_back(pi());
    if (fH_ == 2) basis_h_.push_back(teich_gen_);
    // Pick coordinate rows with an invertible minor mod p.
    int h = static_cast<int>(basis_h_.size());
    int D = dim();
    h_rows_.clear();
    h_extract_.clear();
    for (int a = 0; a < D && h_rows_.empty(); ++a) {
        if (h == 1) {
            if (basis_h_[0].c[a] % p_ != 0) {
                h_rows_ = {a};
                h_extract_ = {{minv(basis_h_[0].c[a])}};
            }
            continue;
        }
        for (int b = a + 1; b < D && h_rows_.empty(); ++b) {
            u64 m00 = basis_h_[0].c[a], m01 = basis_h_[1].c[a];
            u64 m10 = basis_h_[0].c[b], m11 = basis_h_[1].c[b];
            u64 det = msub(mmul(m00, m11), mmul(m01, m10));
            if (det % p_ == 0) continue;
            u64 di = minv(det);
            h_rows_ = {a, b};
            h_extract_ = {{mmul(m11, di), mmul(msub(0, m01), di)},
                          {mmul(msub(0, m10), di), mmul(m00, di)}};
        }
    }
    if (h_rows_.empty()) throw DomainError("degenerate basis of O_H");

    if (guard) {
        std::shared_ptr<RingContext> w(new RingContext());
        ContextParams wp = params;
        wp.N = N_ + kGuard;
        w->init(wp, false);
        wide_ = w;
    }
}

u64 RingContext::mred(i64 a) const {
    i64 m = static_cast<i64>(mod_);
    i64 r = a % m;
    return static_cast<u64>(r < 0 ? r + m : r);
}

u64 RingContext::minv(u64 a) const {
    if (a % p_ == 0) throw DomainError("inverse of a non-unit");
    i64 x, y;
    ext_gcd(static_cast<i64>(a % mod_), static_cast<i64>(mod_), x, y);
    return mred(x);
}

int RingContext::vp(u64 a) const {
    if (a == 0) return N_;
    int v = 0;
    while (a % p_ == 0) {
        a /= p_;
        ++v;
    }
    return v;
}

FieldElement RingContext::from_int(i64 a) const {
    FieldElement x{};
    x.c[0] = mred(a);
    return x;
}

FieldElement RingContext::theta() const {
    FieldElement x{};
    if (r_ > 1) x.c[1] = 1;
    return x;
}

FieldElement RingContext::pi() const {
    FieldElement x{};
    if (e_ == 2)
        x.c[r_] = 1;
    else
        x.c[0] = p_ % mod_;
    return x;
}

FieldElement RingContext::from_coords(const std::vector<i64>& coords) const {
    FieldElement x{};
    for (std::size_t i = 0; i < coords.size() && i < static_cast<std::size_t>(dim()); ++i) x.c[i] = mred(coords[i]);
    return x;
}

FieldElement RingContext::add(const FieldElement& x, const FieldElement& y) const {
    FieldElement z{};
    for (int i = 0; i < dim(); ++i) z.c[i] = madd(x.c[i], y.c[i]);
    return z;
}

FieldElement RingContext::sub(const FieldElement& x, const FieldElement& y) const {
    FieldElement z{};
    for (int i = 0; i < dim(); ++i) z.c[i] = msub(x.c[i], y.c[i]);
    return z;
}

FieldElement RingContext::neg(const FieldElement& x) const {
    FieldElement z{};
    for (int i = 0; i < dim(); ++i) z.c[i] = msub(0, x.c[i]);
    return z;
}

void RingContext::wmul(const u64* a, const u64* b, u64* out) const {
    if (r_ == 1) {
        out[0] = mmul(a[0], b[0]);
        return;
    }
    u128 acc[2 * kMaxDim] = {};
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < r_; ++j) acc[i + j] += static_cast<u128>(a[i]) * b[j] % mod_;
    u64 t[2 * kMaxDim];
    for (int i = 0; i < 2 * r_ - 1; ++i) t[i] = static_cast<u64>(acc[i] % mod_);
    for (int k = 2 * r_ - 2; k >= r_; --k) {
        u64 c = t[k];
        if (c == 0) continue;
        for (int i = 0; i < r_; ++i) t[k - r_ + i] = msub(t[k - r_ + i], mmul(c, wpoly_[i]));
    }
    for (int i = 0; i < r_; ++i) out[i] = t[i];
}

FieldElement RingContext::mul(const FieldElement& x, const FieldElement& y) const {
    FieldElement z{};
    if (e_ == 1) {
        wmul(x.c.data(), y.c.data(), z.c.data());
        return z;
    }
    const u64* a = x.c.data();
    const u64* b = x.c.data() + r_;
    const u64* a2 = y.c.data();
    const u64* b2 = y.c.data() + r_;
    u64 aa[kMaxDim], ab[kMaxDim], ba[kMaxDim], bb[kMaxDim];
    wmul(a, a2, aa);
    wmul(a, b2, ab);
    wmul(b, a2, ba);
    wmul(b, b2, bb);
    // pi^2 = -c1 pi - c0
    for (int i = 0; i < r_; ++i) {
        z.c[i] = msub(aa[i], mmul(c0_, bb[i]));
        z.c[r_ + i] = msub(madd(ab[i], ba[i]), mmul(c1_, bb[i]));
    }
    return z;
}

FieldElement RingContext::scal(const FieldElement& x, u64 a) const {
    FieldElement z{};
    a %= mod_;
    for (int i = 0; i < dim(); ++i) z.c[i] = mmul(x.c[i], a);
    return z;
}

FieldElement RingContext::pow(const FieldElement& x, u64 k) const {
    FieldElement r = one(), b = x;
    while (k) {
        if (k & 1) r = mul(r, b);
        b = mul(b, b);
        k >>= 1;
    }
    return r;
}

void RingContext::acc_mul(MulAcc& acc, const FieldElement& x, const FieldElement& y) const {
    const int span = 2 * r_ - 1;
    for (int bx = 0; bx < e_; ++bx)
        for (int i = 0; i < r_; ++i) {
            u64 xi = x.c[bx * r_ + i];
            if (xi == 0) continue;
            for (int by = 0; by < e_; ++by)
                for (int j = 0; j < r_; ++j) {
                    u128& slot = acc.v[(bx + by) * span + i + j];
                    slot += static_cast<u128>(xi) * y.c[by * r_ + j];
                    if (!small_mod_) slot %= mod_;
                }
        }
}

FieldElement RingContext::acc_reduce(const MulAcc& acc) const {
    const int span = 2 * r_ - 1;
    u64 part[3][kMaxDim];
    for (int b = 0; b < 2 * e_ - 1; ++b) {
        u64 t[2 * kMaxDim];
        for (int a = 0; a < span; ++a) t[a] = static_cast<u64>(acc.v[b * span + a] % mod_);
        for (int k = span - 1; k >= r_; --k) {
            u64 c = t[k];
            if (c == 0) continue;
            for (int i = 0; i < r_; ++i) t[k - r_ + i] = msub(t[k - r_ + i], mmul(c, wpoly_[i]));
        }
        for (int i = 0; i < r_; ++i) part[b][i] = t[i];
    }
    FieldElement z{};
    if (e_ == 1) {
        for (int i = 0; i < r_; ++i) z.c[i] = part[0][i];
        return z;
    }
    for (int i = 0; i < r_; ++i) {
        z.c[i] = msub(part[0][i], mmul(c0_, part[2][i]));
        z.c[r_ + i] = msub(part[1][i], mmul(c1_, part[2][i]));
    }
    return z;
}

bool RingContext::is_zero(const FieldElement& x) const {
    for (int i = 0; i < dim(); ++i)
        if (x.c[i] != 0) return false;
    return true;
}

bool RingContext::is_unit(const FieldElement& x) const {
    for (int i = 0; i < r_; ++i)
        if (x.c[i] % p_ != 0) return true;
    return false;
}

bool RingContext::equal_mod(const FieldElement& x, const FieldElement& y, int k) const {
    u64 m = ipow(p_, std::min(k, N_));
    for (int i = 0; i < dim(); ++i)
        if (x.c[i] % m != y.c[i] % m) return false;
    return true;
}

FieldElement RingContext::reduce_mod(const FieldElement& x, int k) const {
    u64 m = ipow(p_, std::min(k, N_));
    FieldElement z{};
    for (int i = 0; i < dim(); ++i) z.c[i] = x.c[i] % m;
    return z;
}

FieldElement RingContext::inv(const FieldElement& x) const {
    if (!is_unit(x)) throw DomainError("inverse of a non-unit");
    // residue inverse via x^{p^r - 2}, then Newton y <- y (2 - x y)
    FieldElement y = pow(x, ipow(p_, r_) - 2);
    FieldElement two = from_int(2);
    for (int it = 0; it < 64; ++it) {
        FieldElement ny = mul(y, sub(two, mul(x, y)));
        if (ny == y) return y;
        y = ny;
    }
    throw PrecisionFault("unit inverse did not stabilize");
}

FieldElement RingContext::apply_matrix(const std::vector<std::vector<u64>>& m, const FieldElement& x) const {
    FieldElement z{};
    for (int part = 0; part < e_; ++part) {
        const u64* src = x.c.data() + part * r_;
        for (int i = 0; i < r_; ++i) {
            u128 acc = 0;
            for (int j = 0; j < r_; ++j) acc += static_cast<u128>(m[i][j]) * src[j] % mod_;
            z.c[part * r_ + i] = static_cast<u64>(acc % mod_);
        }
    }
    return z;
}

FieldElement RingContext::sigma(const FieldElement& x, int k) const {
    int kk = static_cast<int>(floor_mod(k, r_));
    if (kk == 0) return x;
    return apply_matrix(sigma_mats_[kk], x);
}

FieldElement RingContext::frob(const FieldElement& x, int k) const {
    return sigma(x, k * fH_);
}

FieldElement RingContext::norm_to_H(const FieldElement& x) const {
    FieldElement acc = x;
    for (int k = 1; k < d_; ++k) acc = mul(acc, frob(x, k));
    return acc;
}

bool RingContext::in_H(const FieldElement& x) const { return frob(x, 1) == x; }

int RingContext::valuation(const FieldElement& x) const {
    if (is_zero(x)) throw PrecisionFault("valuation of an element that is zero at working precision");
    int va = N_ + 1, vb = N_ + 1;
    for (int i = 0; i < r_; ++i)
        if (x.c[i]) va = std::min(va, vp(x.c[i]));
    if (e_ == 1) return va;
    for (int i = 0; i < r_; ++i)
        if (x.c[r_ + i]) vb = std::min(vb, vp(x.c[r_ + i]));
    return std::min(2 * va, 2 * vb + 1);
}

int RingContext::valuation_or(const FieldElement& x, int cap) const {
    if (is_zero(x)) return cap;
    return std::min(cap, valuation(x));
}

FieldElement RingContext::div_p(const FieldElement& x, int k) const {
    if (k == 0) return x;
    u64 pk = ipow(p_, k);
    FieldElement z{};
    for (int i = 0; i < dim(); ++i) {
        if (x.c[i] % pk != 0) throw PrecisionFault("inexact division by a power of p");
        z.c[i] = x.c[i] / pk;
    }
    return z;
}

FieldElement RingContext::div_exact(const FieldElement& x, const FieldElement& z) const {
    int v = valuation(z);
    FieldElement a = x, b = z;
    if (e_ == 1) {
        a = div_p(a, v);
        b = div_p(b, v);
        return mul(a, inv(b));
    }
    // pi^{-1} = -(pi + c1) / c0 with c0 = p * unit
    FieldElement pc1 = pi();
    pc1.c[0] = madd(pc1.c[0], c1_);
    FieldElement c0u{};
    c0u.c[0] = mred(eis_[0] / static_cast<i64>(p_));
    FieldElement minus_c0u_inv = neg(inv(c0u));
    for (int i = 0; i < v; ++i) {
        a = mul(div_p(mul(a, pc1), 1), minus_c0u_inv);
        b = mul(div_p(mul(b, pc1), 1), minus_c0u_inv);
    }
    return mul(a, inv(b));
}

FieldElement RingContext::teichmuller(const FieldElement& x) const {
    if (!is_unit(x)) throw DomainError("Teichmuller lift of a zero residue");
    u64 Q = ipow(p_, r_);
    FieldElement y = x;
    for (int it = 0; it < 8 * N_ + 16; ++it) {
        FieldElement ny = pow(y, Q);
        if (ny == y) return y;
        y = ny;
    }
    throw PrecisionFault("Teichmuller iteration did not stabilize");
}

FieldElement RingContext::residue_teichmuller_generator() const { return teich_gen_; }

namespace {

int ilog(u64 i, u64 p) {
    int l = 0;
    while (i >= p) {
        i /= p;
        ++l;
    }
    return l;
}

FieldElement log_principal(const RingContext& W, const FieldElement& z) {
    // z in 1 + m; sum (-1)^{i+1} x^i / i with x = z - 1 and exact divisions by p^{v_p(i)}.
    FieldElement x = W.sub(z, W.one());
    if (W.is_zero(x)) return W.zero();
    i64 vx = W.valuation(x);
    i64 e = W.e();
    FieldElement sum{}, xp = W.one();
    for (u64 i = 1;; ++i) {
        // v_p(x^i / i) >= i vx / e - log_p(i), increasing from i = 3 on
        if (i >= 3 && static_cast<i64>(i) * vx >= e * (W.N() + ilog(i, W.p()) + 1)) break;
        xp = W.mul(xp, x);
        if (W.is_zero(xp)) break;
        int vi = 0;
        u64 u = i;
        while (u % W.p() == 0) {
            u /= W.p();
            ++vi;
        }
        FieldElement term = W.scal(W.div_p(xp, vi), W.minv(u));
        if (i % 2 == 0) term = W.neg(term);
        sum = W.add(sum, term);
    }
    return sum;
}

}  // namespace

FieldElement RingContext::iwasawa_log(const FieldElement& x) const {
    const RingContext& W = guarded();
    FieldElement y{};
    for (int i = 0; i < dim(); ++i) y.c[i] = x.c[i];
    if (W.is_zero(y)) throw PrecisionFault("log of zero at working precision");
    int v = W.valuation(y);
    FieldElement unit = y;
    if (e_ == 1) {
        unit = W.div_p(y, v);
    } else if (v > 0) {
        FieldElement piv = W.pow(W.pi(), static_cast<u64>(v));
        unit = W.div_exact(y, piv);
    }
    FieldElement t = W.teichmuller(unit);
    FieldElement res = log_principal(W, W.mul(unit, W.inv(t)));
    if (e_ == 2 && v > 0) {
        // log pi = log(pi^2 / p) / 2
        FieldElement eps = W.div_p(W.mul(W.pi(), W.pi()), 1);
        FieldElement le = log_principal(W, W.mul(eps, W.inv(W.teichmuller(eps))));
        if (!W.is_zero(le)) {
            FieldElement lpi = p_ == 2 ? W.div_p(le, 1) : W.scal(le, W.minv(2));
            res = W.add(res, W.scal(lpi, static_cast<u64>(v)));
        }
    }
    FieldElement out{};
    for (int i = 0; i < dim(); ++i) out.c[i] = res.c[i] % mod_;
    return out;
}

FieldElement RingContext::exp(const FieldElement& x) const {
    if (is_zero(x)) return one();
    int v = valuation(x);
    if (static_cast<i64>(v) * static_cast<i64>(p_ - 1) <= e_) throw DomainError("exp outside its disc of convergence");
    const RingContext& W = guarded();
    FieldElement xw{};
    for (int i = 0; i < dim(); ++i) xw.c[i] = x.c[i];
    FieldElement sum = W.one(), term = W.one();
    for (u64 i = 1; i < 100000; ++i) {
        term = W.mul(term, xw);
        int vi = 0;
        u64 u = i;
        while (u % p_ == 0) {
            u /= p_;
            ++vi;
        }
        term = W.scal(W.div_p(term, vi), W.minv(u));
        if (W.is_zero(term)) break;
        sum = W.add(sum, term);
    }
    FieldElement out{};
    for (int i = 0; i < dim(); ++i) out.c[i] = sum.c[i] % mod_;
    return out;
}

std::vector<u64> RingContext::coords_H(const FieldElement& x) const {
    std::size_t h = basis_h_.size();
    std::vector<u64> out(h, 0);
    for (std::size_t i = 0; i < h; ++i) {
        u64 acc = 0;
        for (std::size_t j = 0; j < h; ++j) acc = madd(acc, mmul(h_extract_[i][j], x.c[h_rows_[j]]));
        out[i] = acc;
    }
    return out;
}

std::string RingContext::to_string(const FieldElement& x) const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << x.c[i];
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------
// residue unit groups

namespace {

struct IntMat {
    int n = 0, m = 0;
    std::vector<std::vector<i64>> a;
    IntMat(int rows, int cols) : n(rows), m(cols), a(rows, std::vector<i64>(cols, 0)) {}
};

// Insert v into the row echelon basis B, working modulo the sublattice D Z^k.
// Pivots lie in (0, D]; other entries in [0, D).
void hnf_insert(std::vector<std::vector<i64>>& B, std::vector<i64> v, i64 D) {
    int k = static_cast<int>(v.size());
    for (auto& t : v)
        if (t != D) t = floor_mod(t, D);
    for (int c = 0; c < k; ++c) {
        if (v[c] == 0) continue;
        if (B[c].empty()) {
            B[c] = v;
            return;
        }
        i64 a = B[c][c], b = v[c], x, y;
        i64 g = ext_gcd(a, b, x, y);
        std::vector<i64> nb(k), nv(k);
        for (int j = 0; j < k; ++j) {
            i128 tb = static_cast<i128>(x) * B[c][j] + static_cast<i128>(y) * v[j];
            i128 tv = static_cast<i128>(a / g) * v[j] - static_cast<i128>(b / g) * B[c][j];
            nb[j] = floor_mod(static_cast<i64>(tb % D), D);
            nv[j] = floor_mod(static_cast<i64>(tv % D), D);
        }
        nb[c] = g;
        nv[c] = 0;
        B[c] = nb;
        v = nv;
    }
}

// Smith form of a square nonsingular integer matrix; returns diagonal, fills V and Vinv
// such that U A V = diag.
std::vector<i64> smith(std::vector<std::vector<i64>> A, std::vector<std::vector<i64>>& V,
                       std::vector<std::vector<i64>>& Vinv) {
    int k = static_cast<int>(A.size());
    V.assign(k, std::vector<i64>(k, 0));
    Vinv.assign(k, std::vector<i64>(k, 0));
    for (int i = 0; i < k; ++i) V[i][i] = Vinv[i][i] = 1;
    auto col_swap = [&](int i, int j) {
        for (int r = 0; r < k; ++r) {
            std::swap(A[r][i], A[r][j]);
            std::swap(V[r][i], V[r][j]);
        }
        std::swap(Vinv[i], Vinv[j]);
    };
    auto col_add = [&](int j, int t, i64 c) {  // col_j += c col_t
        for (int r = 0; r < k; ++r) {
            A[r][j] += c * A[r][t];
            V[r][j] += c * V[r][t];
        }
        for (int r = 0; r < k; ++r) Vinv[t][r] -= c * Vinv[j][r];
    };
    for (int t = 0; t < k; ++t) {
        for (;;) {
            int bi = -1, bj = -1;
            i64 best = 0;
            for (int i = t; i < k; ++i)
                for (int j = t; j < k; ++j)
                    if (A[i][j] != 0 && (best == 0 || std::llabs(A[i][j]) < best)) {
                        best = std::llabs(A[i][j]);
                        bi = i;
                        bj = j;
                    }
            if (bi < 0) return {};
            std::swap(A[t], A[bi]);
            if (bj != t) col_swap(t, bj);
            bool clean = true;
            for (int i = t + 1; i < k; ++i) {
                i64 qq = A[i][t] / A[t][t];
                for (int j = t; j < k; ++j) A[i][j] -= qq * A[t][j];
                if (A[i][t] != 0) clean = false;
            }
            for (int j = t + 1; j < k; ++j) {
                i64 qq = A[t][j] / A[t][t];
                if (qq != 0) col_add(j, t, -qq);
                if (A[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (int i = t + 1; i < k && divides; ++i)
                for (int j = t + 1; j < k; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        for (int c = t; c < k; ++c) A[t][c] += A[i][c];
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (A[t][t] < 0) {
            for (int r = 0; r < k; ++r) {
                A[r][t] = -A[r][t];
                V[r][t] = -V[r][t];
            }
            for (int r = 0; r < k; ++r) Vinv[t][r] = -Vinv[t][r];
        }
    }
    std::vector<i64> diag(k);
    for (int i = 0; i < k; ++i) diag[i] = A[i][i];
    return diag;
}

}  // namespace

std::string UnitGroup::key(const FieldElement& x) const {
    const RingContext& c = *ctx_;
    std::vector<u64> h = c.coords_H(x);
    std::string out;
    int m = level;
    for (std::size_t i = 0; i < h.size(); ++i) {
        int digits = m + 1;
        if (c.e() == 2) digits = i == 0 ? (m + 2) / 2 : (m + 1) / 2;
        u64 md = ipow(c.p(), digits);
        out += std::to_string(h[i] % md);
        out += ',';
    }
    return out;
}

u64 UnitGroup::order() const {
    u64 o = 1;
    for (u64 v : orders) o *= v;
    return o;
}

std::vector<u64> UnitGroup::dlog(const FieldElement& x) const {
    if (!ctx_->is_unit(x)) throw DomainError("discrete log of a non-unit");
    auto it = table_->find(key(x));
    if (it == table_->end()) throw DomainError("element is not in O_H");
    const std::vector<i64>& raw = it->second;
    std::vector<u64> out(kept_.size());
    for (std::size_t t = 0; t < kept_.size(); ++t) {
        int col = kept_[t];
        i128 acc = 0;
        for (std::size_t j = 0; j < raw.size(); ++j) acc += static_cast<i128>(raw[j]) * V_[j][col];
        i64 o = static_cast<i64>(orders[t]);
        i64 red = floor_mod(static_cast<i64>(acc % static_cast<i128>(o)), o);
        out[t] = static_cast<u64>(floor_mod(static_cast<i64>(static_cast<i128>(red) * mult_[t] % o), o));
    }
    return out;
}

FieldElement UnitGroup::element(const std::vector<u64>& exps) const {
    FieldElement acc = ctx_->one();
    for (std::size_t i = 0; i < gens.size(); ++i) acc = ctx_->mul(acc, ctx_->pow(gens[i], exps[i] % orders[i]));
    return acc;
}

UnitGroup RingContext::residue_unit_group(int m) const {
    if (m < 0) throw DomainError("negative level");
    if ((m + 1 + e_ - 1) / e_ > N_ - 1) throw PrecisionFault("unit group level exceeds precision");
    UnitGroup G;
    G.level = m;
    G.ctx_ = this;
    // raw generators: Teichmuller generator and 1 + b pi^k for b in basis_H residues, 1 <= k <= m
    std::vector<FieldElement> raw;
    if (q_ > 2) raw.push_back(teich_gen_);
    std::vector<FieldElement> resid;
    resid.push_back(one());
    if (fH_ == 2) resid.push_back(teich_gen_);
    for (int k = 1; k <= m; ++k) {
        FieldElement pk = pow(pi(), static_cast<u64>(k));
        for (const auto& b : resid) raw.push_back(add(one(), mul(b, pk)));
    }
    auto canon = [&](const FieldElement& x) {
        std::vector<u64> h = coords_H(x);
        FieldElement y{};
        for (std::size_t i = 0; i < h.size(); ++i) {
            int digits = m + 1;
            if (e_ == 2) digits = i == 0 ? (m + 2) / 2 : (m + 1) / 2;
            u64 md = ipow(p_, digits);
            y = add(y, scal(basis_h_[i], h[i] % md));
        }
        return y;
    };
    u64 expected = (q_ - 1) * ipow(q_, m);
    int k = static_cast<int>(raw.size());
    auto table = std::make_shared<std::unordered_map<std::string, std::vector<i64>>>();
    std::vector<std::vector<i64>> B(k);
    i64 D = static_cast<i64>(expected);
    if (k == 0) {
        // trivial group (q = 2, m = 0)
        (*table)[G.key(one())] = {};
        G.table_ = table;
        return G;
    }
    std::deque<std::pair<FieldElement, std::vector<i64>>> queue;
    FieldElement start = canon(one());
    (*table)[G.key(start)] = std::vector<i64>(k, 0);
    queue.emplace_back(start, std::vector<i64>(k, 0));
    while (!queue.empty()) {
        auto [x, vec] = queue.front();
        queue.pop_front();
        for (int j = 0; j < k; ++j) {
            FieldElement y = canon(mul(x, raw[j]));
            std::vector<i64> nv = vec;
            nv[j] += 1;
            std::string key = G.key(y);
            auto it = table->find(key);
            if (it == table->end()) {
                (*table)[key] = nv;
                queue.emplace_back(y, nv);
            } else {
                std::vector<i64> rel(k);
                for (int t = 0; t < k; ++t) rel[t] = nv[t] - it->second[t];
                hnf_insert(B, rel, D);
            }
        }
    }
    if (table->size() != expected) throw DomainError("unit group enumeration has the wrong order");
    for (int j = 0; j < k; ++j) {
        std::vector<i64> dv(k, 0);
        dv[j] = D;
        hnf_insert(B, dv, D);
    }
    std::vector<std::vector<i64>> A(k, std::vector<i64>(k, 0));
    for (int i = 0; i < k; ++i) {
        if (B[i].empty()) throw DomainError("relation lattice is not of full rank");
        A[i] = B[i];
    }
    std::vector<std::vector<i64>> V, Vinv;
    std::vector<i64> diag = smith(A, V, Vinv);
    // Split each invariant factor into prime-power parts (elementary divisors).
    for (int t = 0; t < k; ++t) {
        i64 dt = diag[t];
        if (dt == 1) continue;
        FieldElement g = one();
        for (int j = 0; j < k; ++j) {
            i64 ex = floor_mod(Vinv[t][j], D);
            g = mul(g, pow(raw[j], static_cast<u64>(ex)));
        }
        i64 rest = dt;
        for (i64 l = 2; rest > 1; ++l) {
            if (rest % l != 0) continue;
            i64 la = 1;
            while (rest % l == 0) {
                rest /= l;
                la *= l;
            }
            i64 cof = dt / la;
            i64 x, y;
            ext_gcd(floor_mod(cof, la), la, x, y);
            G.kept_.push_back(t);
            G.mult_.push_back(floor_mod(x, la));
            G.orders.push_back(static_cast<u64>(la));
            G.gens.push_back(canon(pow(g, static_cast<u64>(cof))));
        }
    }
    G.V_ = V;
    G.table_ = table;
    if (G.order() != expected) throw DomainError("unit group structure has the wrong order");
    return G;
}

}  // namespace ltc
