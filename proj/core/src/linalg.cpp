#include "ltc/linalg.hpp"

#include <algorithm>

namespace ltc {

ZpSolution solve_zp(ZpMatrix A, std::vector<u64> b, const RingContext& ctx, int data_prec) {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    if (b.size() != m) throw DomainError("solve_zp: dimension mismatch");
    if (m < n) throw DomainError("solve_zp: underdetermined system");
    const u64 p = ctx.p();
    std::vector<std::size_t> colperm(n);
    for (std::size_t i = 0; i < n; ++i) colperm[i] = i;
    std::vector<int> pivval(n, 0);
    int vmax = 0;
    for (std::size_t k = 0; k < n; ++k) {
        int best = ctx.N() + 1;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = k; i < m && best > 0; ++i)
            for (std::size_t j = k; j < n; ++j) {
                if (A[i][j] == 0) continue;
                int v = ctx.vp(A[i][j]);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        if (best > ctx.N() || best >= data_prec) throw PrecisionFault("solve_zp: matrix is singular at working precision");
        std::swap(A[k], A[bi]);
        std::swap(b[k], b[bi]);
        if (bj != k) {
            for (std::size_t i = 0; i < m; ++i) std::swap(A[i][k], A[i][bj]);
            std::swap(colperm[k], colperm[bj]);
        }
        pivval[k] = best;
        vmax = std::max(vmax, best);
        u64 pv = ipow(p, best);
        u64 uinv = ctx.minv(A[k][k] / pv);
        for (std::size_t i = k + 1; i < m; ++i) {
            if (A[i][k] == 0) continue;
            // multiplier (A[i][k] / p^v) / unit; exact since v is minimal
            u64 mult = ctx.mmul(A[i][k] / pv, uinv);
            for (std::size_t j = k; j < n; ++j) A[i][j] = ctx.msub(A[i][j], ctx.mmul(mult, A[k][j]));
            b[i] = ctx.msub(b[i], ctx.mmul(mult, b[k]));
        }
    }
    int reliable = data_prec - vmax;
    u64 check = ipow(p, std::max(0, std::min(ctx.N(), data_prec)));
    for (std::size_t i = n; i < m; ++i)
        if (b[i] % check != 0) throw DomainError("solve_zp: inconsistent system (not in the image)");
    std::vector<u64> y(n, 0);
    for (std::size_t kk = n; kk-- > 0;) {
        u64 acc = b[kk];
        for (std::size_t j = kk + 1; j < n; ++j) acc = ctx.msub(acc, ctx.mmul(A[kk][j], y[j]));
        u64 pv = ipow(p, pivval[kk]);
        if (acc % pv != 0) {
            u64 low = ipow(p, std::max(0, std::min(pivval[kk], data_prec - (vmax - pivval[kk]))));
            if (acc % low != 0) throw DomainError("solve_zp: inconsistent system (not in the image)");
        }
        u64 uinv = ctx.minv(A[kk][kk] / pv);
        y[kk] = ctx.mmul(acc / pv, uinv);
    }
    ZpSolution sol;
    sol.x.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) sol.x[colperm[k]] = y[k];
    sol.reliable = std::max(0, reliable);
    sol.max_pivot_valuation = vmax;
    u64 mask = ipow(p, std::min(ctx.N(), sol.reliable));
    for (auto& v : sol.x) v %= mask;
    return sol;
}

FieldElement det_ring(std::vector<std::vector<FieldElement>> A, const RingContext& ctx) {
    const std::size_t n = A.size();
    FieldElement det = ctx.one();
    bool negate = false;
    const int cap = ctx.e() * ctx.N();
    for (std::size_t k = 0; k < n; ++k) {
        int best = cap;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < n && best > 0; ++i)
            for (std::size_t j = k; j < n; ++j) {
                if (ctx.is_zero(A[i][j])) continue;
                int v = ctx.valuation(A[i][j]);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        if (best >= cap) return ctx.zero();
        if (bi != k) {
            std::swap(A[k], A[bi]);
            negate = !negate;
        }
        if (bj != k) {
            for (std::size_t i = 0; i < n; ++i) std::swap(A[i][k], A[i][bj]);
            negate = !negate;
        }
        const FieldElement& piv = A[k][k];
        det = ctx.mul(det, piv);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (ctx.is_zero(A[i][k])) continue;
            FieldElement mult = ctx.div_exact(A[i][k], piv);
            for (std::size_t j = k; j < n; ++j) A[i][j] = ctx.sub(A[i][j], ctx.mul(mult, A[k][j]));
        }
    }
    return negate ? ctx.neg(det) : det;
}

Series det_berkowitz(const std::vector<std::vector<Series>>& A) {
    const int n = static_cast<int>(A.size());
    if (n == 0) throw DomainError("det_berkowitz: empty matrix");
    const RingContext& R = *A[0][0].ctx;
    const int D = A[0][0].D();
    // v holds the characteristic polynomial of the leading r x r block, highest degree first.
    std::vector<Series> v{Series::constant(R, D, R.one())};
    for (int r = 0; r < n; ++r) {
        std::vector<Series> t;
        t.push_back(Series::constant(R, D, R.one()));
        t.push_back(neg(A[r][r]));
        // t_{i+2} = -R S^i C with R = row r, C = column r restricted to the leading block
        std::vector<Series> w(r);
        for (int i = 0; i < r; ++i) w[i] = A[i][r];
        for (int it = 0; it < r; ++it) {
            Series acc = Series::zero(R, D);
            for (int j = 0; j < r; ++j) acc = add(acc, mul(A[r][j], w[j]));
            t.push_back(neg(acc));
            if (it + 1 < r) {
                std::vector<Series> nw(r, Series::zero(R, D));
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) nw[i] = add(nw[i], mul(A[i][j], w[j]));
                w = std::move(nw);
            }
        }
        std::vector<Series> nv(r + 2, Series::zero(R, D));
        for (int i = 0; i < r + 2; ++i)
            for (int j = 0; j <= std::min(i, r); ++j) nv[i] = add(nv[i], mul(t[i - j], v[j]));
        v = std::move(nv);
    }
    Series det = v[n];
    return n % 2 ? neg(det) : det;
}

}  // namespace ltc
