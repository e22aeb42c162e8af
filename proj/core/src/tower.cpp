#include "ltc/tower.hpp"

#include <algorithm>
#include <numeric>

#include "ltc/linalg.hpp"

namespace ltc {

Rational Rational::make(i64 a, i64 b) {
    if (b == 0) throw DomainError("rational with zero denominator");
    if (b < 0) a = -a, b = -b;
    i64 g = std::gcd(a < 0 ? -a : a, b);
    if (g == 0) g = 1;
    return {a / g, b / g};
}

// ---------------------------------------------------------------------------
// Layer

namespace {

// Q(h) = (phi^l f)(h) / h for a polynomial h, exact to degree D.
Series quotient_poly(const Frame& fr, const Series& h, int l, int D) {
    const RingContext& R = *fr.ctx;
    const int q = static_cast<int>(R.q());
    Series fl = frob(truncate(fr.f, q), l);
    Series H = truncate(h, D);
    Series acc = Series::constant(R, D, fl.c[q]);
    for (int i = q - 1; i >= 1; --i) acc = add(mul(acc, H), Series::constant(R, D, fl.c[i]));
    acc.prec = R.N();
    return acc;
}

}  // namespace

Layer::Layer(const Frame& frame, int level) : R_(frame.ctx), level_(level) {
    const RingContext& R = *R_;
    if (!frame.monic_q) throw DomainError("tower layers need a polynomial frame");
    if (level < 0) throw DomainError("negative layer level");
    const u64 q = R.q();
    n_ = static_cast<int>((q - 1) * ipow(q, level));
    Series h = level == 0 ? Series::T(R, n_) : iterate_f(frame, level);
    Series Q = ltc::frob(quotient_poly(frame, h, level, n_), -(level + 1));
    if (ltc::degree(Q) != n_ || !(Q.c[n_] == R.one())) throw DomainError("layer minimal polynomial is not monic");
    if (R.valuation_or(Q.c[0], 2) != 1) throw DomainError("layer minimal polynomial is not Eisenstein");
    for (int i = 1; i < n_; ++i)
        if (R.valuation_or(Q.c[i], 1) < 1) throw DomainError("layer minimal polynomial is not Eisenstein");
    mp_ = Q.c;
}

LayerElement Layer::zero() const { return {std::vector<FieldElement>(n_), R_->N()}; }

LayerElement Layer::one() const { return from_base(R_->one()); }

LayerElement Layer::from_base(const FieldElement& a) const {
    LayerElement x = zero();
    x.c[0] = a;
    return x;
}

LayerElement Layer::omega() const {
    LayerElement x = zero();
    if (n_ == 1) x.c[0] = R_->neg(mp_[0]);
    else x.c[1] = R_->one();
    return x;
}

LayerElement Layer::add(const LayerElement& x, const LayerElement& y) const {
    LayerElement z{std::vector<FieldElement>(n_), std::min(x.prec, y.prec)};
    for (int i = 0; i < n_; ++i) z.c[i] = R_->add(x.c[i], y.c[i]);
    return z;
}

LayerElement Layer::sub(const LayerElement& x, const LayerElement& y) const {
    LayerElement z{std::vector<FieldElement>(n_), std::min(x.prec, y.prec)};
    for (int i = 0; i < n_; ++i) z.c[i] = R_->sub(x.c[i], y.c[i]);
    return z;
}

LayerElement Layer::neg(const LayerElement& x) const {
    LayerElement z{std::vector<FieldElement>(n_), x.prec};
    for (int i = 0; i < n_; ++i) z.c[i] = R_->neg(x.c[i]);
    return z;
}

LayerElement Layer::scal(const LayerElement& x, const FieldElement& a) const {
    LayerElement z{std::vector<FieldElement>(n_), x.prec};
    for (int i = 0; i < n_; ++i) z.c[i] = R_->mul(x.c[i], a);
    return z;
}

LayerElement Layer::mul_omega(const LayerElement& x) const {
    LayerElement z{std::vector<FieldElement>(n_), x.prec};
    const FieldElement top = x.c[n_ - 1];
    for (int i = n_ - 1; i >= 1; --i) z.c[i] = x.c[i - 1];
    z.c[0] = R_->zero();
    if (!R_->is_zero(top))
        for (int i = 0; i < n_; ++i) z.c[i] = R_->sub(z.c[i], R_->mul(top, mp_[i]));
    return z;
}

void Layer::reduce(std::vector<FieldElement>& w, LayerElement& out) const {
    const RingContext& R = *R_;
    for (int k = static_cast<int>(w.size()) - 1; k >= n_; --k) {
        const FieldElement t = w[k];
        if (R.is_zero(t)) continue;
        for (int i = 0; i < n_; ++i) w[k - n_ + i] = R.sub(w[k - n_ + i], R.mul(t, mp_[i]));
    }
    out.c.assign(w.begin(), w.begin() + n_);
}

LayerElement Layer::mul(const LayerElement& x, const LayerElement& y) const {
    const RingContext& R = *R_;
    std::vector<FieldElement> w(2 * n_ - 1);
    int tx = -1, ty = -1;
    for (int i = 0; i < n_; ++i) {
        if (!R.is_zero(x.c[i])) tx = i;
        if (!R.is_zero(y.c[i])) ty = i;
    }
    LayerElement out{{}, std::min(x.prec, y.prec)};
    if (tx < 0 || ty < 0) {
        out.c.assign(n_, R.zero());
        return out;
    }
    for (int k = 0; k <= tx + ty; ++k) {
        MulAcc acc;
        int lo = std::max(0, k - ty), hi = std::min(k, tx);
        for (int i = lo; i <= hi; ++i)
            if (!R.is_zero(x.c[i])) R.acc_mul(acc, x.c[i], y.c[k - i]);
        w[k] = R.acc_reduce(acc);
    }
    reduce(w, out);
    return out;
}

LayerElement Layer::pow(const LayerElement& x, u64 k) const {
    LayerElement r = one(), b = x;
    r.prec = x.prec;
    while (k) {
        if (k & 1) r = mul(r, b);
        k >>= 1;
        if (k) b = mul(b, b);
    }
    return r;
}

LayerElement Layer::inv(const LayerElement& x) const {
    if (!is_unit(x)) throw DomainError("layer inverse of a non-unit");
    LayerElement y = from_base(R_->inv(x.c[0]));
    y.prec = x.prec;
    const LayerElement two = from_base(R_->from_int(2));
    // each step doubles the omega-adic precision of x y - 1
    for (int it = 0; it < 64; ++it) {
        LayerElement xy = mul(x, y);
        if (equal(xy, one())) return y;
        y = mul(y, sub(two, xy));
    }
    throw PrecisionFault("layer inverse did not converge");
}

LayerElement Layer::div(const LayerElement& x, const LayerElement& y) const {
    if (is_unit(y)) return mul(x, inv(y));
    const RingContext& R = *R_;
    const int dim = R.dim(), prec = std::min(x.prec, y.prec);
    ZpMatrix A(static_cast<std::size_t>(n_) * dim, std::vector<u64>(static_cast<std::size_t>(n_) * dim));
    LayerElement yi = y;
    for (int i = 0; i < n_; ++i) {
        for (int t = 0; t < dim; ++t) {
            FieldElement bt{};
            bt.c[t] = 1;
            LayerElement col = scal(yi, bt);
            for (int j = 0; j < n_; ++j)
                for (int s = 0; s < dim; ++s) A[j * dim + s][i * dim + t] = col.c[j].c[s];
        }
        yi = mul_omega(yi);
    }
    std::vector<u64> b(static_cast<std::size_t>(n_) * dim);
    for (int j = 0; j < n_; ++j)
        for (int s = 0; s < dim; ++s) b[j * dim + s] = R.reduce_mod(x.c[j], prec).c[s];
    ZpSolution sol = solve_zp(A, b, R, prec);
    LayerElement z = zero();
    z.prec = sol.reliable;
    for (int i = 0; i < n_; ++i)
        for (int t = 0; t < dim; ++t) z.c[i].c[t] = sol.x[i * dim + t];
    return z;
}

LayerElement Layer::frob(const LayerElement& x, int k) const {
    if (k % R_->d() == 0) return x;
    LayerElement z{std::vector<FieldElement>(n_), x.prec};
    for (int i = 0; i < n_; ++i) z.c[i] = R_->frob(x.c[i], k);
    return z;
}

bool Layer::is_zero(const LayerElement& x) const {
    for (const auto& a : x.c)
        if (!R_->is_zero(R_->reduce_mod(a, x.prec))) return false;
    return true;
}

bool Layer::is_unit(const LayerElement& x) const { return x.prec > 0 && R_->is_unit(x.c[0]); }

bool Layer::equal(const LayerElement& x, const LayerElement& y) const {
    return is_zero(sub(x, y));
}

Rational Layer::valuation(const LayerElement& x) const {
    const RingContext& R = *R_;
    i64 best = -1;
    for (int i = 0; i < n_; ++i) {
        FieldElement a = R.reduce_mod(x.c[i], x.prec);
        if (R.is_zero(a)) continue;
        i64 v = static_cast<i64>(R.valuation(a)) * n_ + i;
        if (best < 0 || v < best) best = v;
    }
    if (best < 0) throw PrecisionFault("layer valuation of an element that is zero at working precision");
    // digits at or beyond the precision cannot certify the minimum
    if (best >= static_cast<i64>(x.prec) * R.e() * n_) throw PrecisionFault("layer valuation beyond precision");
    return Rational::make(best, n_);
}

bool Layer::in_base(const LayerElement& x) const {
    for (int i = 1; i < n_; ++i)
        if (!R_->is_zero(R_->reduce_mod(x.c[i], x.prec))) return false;
    return true;
}

LayerElement Layer::eval(const Series& g, int twist, bool polynomial) const {
    const RingContext& R = *R_;
    const int top = ltc::degree(g);
    LayerElement acc = zero();
    for (int k = top; k >= 0; --k) {
        acc = mul_omega(acc);
        acc.c[0] = R.add(acc.c[0], R.frob(g.c[k], twist));
    }
    acc.prec = g.prec;
    if (!polynomial) {
        // omega^k lies in pi^{floor(k/n)} O[omega]
        acc.prec = std::min(acc.prec, (g.D() + 1) / (n_ * R.e()));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Galois groups

TowerGroup::TowerGroup(const Frame& frame, int level, bool over_H)
    : R_(frame.ctx), level_(level), dk_(over_H ? frame.ctx->d() : 1), U_(frame.ctx->residue_unit_group(level)) {
    const RingContext& R = *R_;
    a1_ = R.one();
    nu_ = R.one();
    if (dk_ == 2) {
        // phi(a1) / a1 = phi(pi') / pi'
        a1_ = R.div_exact(frame.pi_prime, R.pi());
        nu_ = R.mul(a1_, R.frob(a1_, 1));
    }
    nu_e_ = U_.dlog(nu_);
}

GalElt TowerGroup::identity() const { return {0, std::vector<u64>(U_.gens.size(), 0)}; }

GalElt TowerGroup::mul(const GalElt& x, const GalElt& y) const {
    GalElt z{x.k + y.k, x.e};
    for (std::size_t i = 0; i < z.e.size(); ++i) z.e[i] = (z.e[i] + y.e[i]) % U_.orders[i];
    if (z.k >= dk_) {
        // (1, a1)^2 = (0, nu)
        z.k -= dk_;
        for (std::size_t i = 0; i < z.e.size(); ++i) z.e[i] = (z.e[i] + nu_e_[i]) % U_.orders[i];
    }
    return z;
}

GalElt TowerGroup::pow(const GalElt& x, u64 k) const {
    GalElt r = identity(), b = x;
    while (k) {
        if (k & 1) r = mul(r, b);
        k >>= 1;
        if (k) b = mul(b, b);
    }
    return r;
}

GalElt TowerGroup::inv(const GalElt& x) const { return pow(x, order() - 1); }

u64 TowerGroup::elt_order(const GalElt& x) const {
    GalElt y = x;
    const GalElt id = identity();
    for (u64 k = 1;; ++k) {
        if (y == id) return k;
        y = mul(y, x);
    }
}

GalElt TowerGroup::from_multiplier(const FieldElement& b) const { return {0, U_.dlog(b)}; }

GalElt TowerGroup::rec_unit(const FieldElement& x) const { return from_multiplier(R_->inv(x)); }

GalElt TowerGroup::frobenius_lift() const {
    GalElt g = identity();
    if (dk_ == 2) g.k = 1;
    return g;
}

FieldElement TowerGroup::multiplier(const GalElt& x) const {
    FieldElement b = U_.element(x.e);
    return x.k == 1 ? R_->mul(a1_, b) : b;
}

std::vector<GalElt> TowerGroup::generators() const {
    std::vector<GalElt> out;
    if (dk_ == 2) out.push_back(frobenius_lift());
    for (std::size_t i = 0; i < U_.gens.size(); ++i) {
        GalElt g = identity();
        g.e[i] = 1;
        out.push_back(g);
    }
    return out;
}

std::vector<GalElt> TowerGroup::elements() const {
    std::vector<GalElt> out;
    out.reserve(order());
    for (int k = 0; k < dk_; ++k) {
        GalElt g = identity();
        g.k = k;
        for (u64 t = 0; t < U_.order(); ++t) {
            out.push_back(g);
            for (std::size_t i = 0; i < g.e.size(); ++i) {
                if (++g.e[i] < U_.orders[i]) break;
                g.e[i] = 0;
            }
        }
    }
    return out;
}

u64 TowerGroup::index(const GalElt& x) const {
    u64 idx = 0, radix = 1;
    for (std::size_t i = 0; i < x.e.size(); ++i) {
        idx += x.e[i] * radix;
        radix *= U_.orders[i];
    }
    return idx + static_cast<u64>(x.k) * U_.order();
}

Subgroup make_subgroup(const TowerGroup& G, const std::vector<GalElt>& members) {
    Subgroup S;
    std::vector<char> in(G.order(), 0);
    std::vector<GalElt> elts{G.identity()};
    in[G.index(G.identity())] = 1;
    for (const GalElt& m : members) {
        if (in[G.index(m)]) continue;
        u64 r = 1;
        GalElt mr = m;
        while (!in[G.index(mr)]) mr = G.mul(mr, m), ++r;
        std::vector<GalElt> next = elts;
        GalElt mj = m;
        for (u64 j = 1; j < r; ++j, mj = G.mul(mj, m))
            for (const GalElt& t : elts) {
                GalElt z = G.mul(t, mj);
                in[G.index(z)] = 1;
                next.push_back(z);
            }
        elts = std::move(next);
        S.gens.push_back(m);
        S.rel_orders.push_back(r);
    }
    S.size = elts.size();
    return S;
}

// ---------------------------------------------------------------------------
// Tower

Tower::Tower(const Frame& frame, int max_level) : frame_(frame) {
    if (max_level < 0) throw DomainError("tower needs at least layer 0");
    for (int l = 0; l <= max_level; ++l) layers_.push_back(std::make_unique<Layer>(frame_, l));
    omega_below_.resize(max_level + 1);
    const int q = static_cast<int>(ring().q());
    for (int l = 1; l <= max_level; ++l)
        omega_below_[l] = layers_[l]->eval(truncate(frame_.f, q), -(l + 1), true);
}

const TowerGroup& Tower::group(int l, bool over_H) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = groups_[{l, over_H}];
    if (!slot) slot = std::make_unique<TowerGroup>(frame_, l, over_H);
    return *slot;
}

const LayerElement& Tower::omega_below(int l) const {
    if (l < 1 || l > max_level()) throw DomainError("omega_below: level out of range");
    return omega_below_[l];
}

LayerElement Tower::embed(const LayerElement& x, int from_level) const {
    const int l = from_level + 1;
    const Layer& L = layer(l);
    const LayerElement& w = omega_below(l);
    LayerElement acc = L.zero();
    for (int i = static_cast<int>(x.c.size()) - 1; i >= 0; --i) {
        acc = L.mul(acc, w);
        acc.c[0] = ring().add(acc.c[0], x.c[i]);
    }
    acc.prec = std::min(acc.prec, x.prec);
    return acc;
}

LayerElement Tower::embed_base(const FieldElement& a, int level) const { return layer(level).from_base(a); }

FieldElement Tower::to_base(const LayerElement& x) const {
    const Layer& L = layer(0);
    if (x.c.size() != static_cast<std::size_t>(L.degree())) {
        for (std::size_t i = 1; i < x.c.size(); ++i)
            if (!ring().is_zero(ring().reduce_mod(x.c[i], x.prec))) throw DomainError("element is not in H'");
        return x.c[0];
    }
    if (!L.in_base(x)) throw DomainError("element is not in H'");
    return x.c[0];
}

LayerElement Tower::project_down(const LayerElement& x, int level) const {
    const RingContext& R = ring();
    if (level < 1) throw DomainError("project_down needs level >= 1");
    const Layer& L = layer(level);
    const Layer& B = layer(level - 1);
    const int n = L.degree(), m = B.degree(), dim = R.dim();
    ZpMatrix A(static_cast<std::size_t>(n) * dim, std::vector<u64>(static_cast<std::size_t>(m) * dim));
    LayerElement wi = L.one();
    for (int i = 0; i < m; ++i) {
        for (int t = 0; t < dim; ++t) {
            FieldElement bt{};
            bt.c[t] = 1;
            LayerElement col = L.scal(wi, bt);
            for (int j = 0; j < n; ++j)
                for (int s = 0; s < dim; ++s) A[j * dim + s][i * dim + t] = col.c[j].c[s];
        }
        wi = L.mul(wi, omega_below(level));
    }
    std::vector<u64> b(static_cast<std::size_t>(n) * dim);
    for (int j = 0; j < n; ++j)
        for (int s = 0; s < dim; ++s) b[j * dim + s] = R.reduce_mod(x.c[j], x.prec).c[s];
    ZpSolution sol = solve_zp(A, b, R, x.prec);
    LayerElement y = B.zero();
    y.prec = sol.reliable;
    for (int i = 0; i < m; ++i)
        for (int t = 0; t < dim; ++t) y.c[i].c[t] = sol.x[i * dim + t];
    return y;
}

int Tower::eval_degree(int l) const { return layer(l).degree() * ring().e() * ring().N(); }

const Action& Tower::action(int l, bool over_H, const GalElt& g) const {
    const TowerGroup& G = group(l, over_H);
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = actions_[std::make_tuple(l, g.k, g.e)];
    if (slot) return *slot;
    const Layer& L = layer(l);
    const int D = eval_degree(l);
    Series S = iso_series(G.multiplier(g), frame_, twist_frame(frame_, g.k), D);
    LayerElement s = L.eval(S, -(l + 1));
    auto A = std::make_unique<Action>();
    A->k = g.k;
    A->prec = s.prec;
    A->cols.reserve(L.degree());
    LayerElement si = L.one();
    for (int i = 0; i < L.degree(); ++i) {
        A->cols.push_back(si);
        si = L.mul(si, s);
    }
    slot = std::move(A);
    return *slot;
}

LayerElement Tower::act(int l, bool over_H, const GalElt& g, const LayerElement& x) const {
    const RingContext& R = ring();
    const Action& A = action(l, over_H, g);
    const Layer& L = layer(l);
    const int n = L.degree();
    std::vector<FieldElement> xc(n);
    for (int i = 0; i < n; ++i) xc[i] = R.frob(x.c[i], A.k);
    LayerElement out = L.zero();
    for (int j = 0; j < n; ++j) {
        MulAcc acc;
        for (int i = 0; i < n; ++i)
            if (!R.is_zero(xc[i])) R.acc_mul(acc, xc[i], A.cols[i].c[j]);
        out.c[j] = R.acc_reduce(acc);
    }
    out.prec = std::min(x.prec, A.prec);
    return out;
}

LayerElement Tower::galois_act(int l, const FieldElement& u, const LayerElement& x) const {
    const TowerGroup& G = group(l, false);
    return act(l, false, G.rec_unit(u), x);
}

LayerElement Tower::norm_subgroup(int l, bool over_H, const Subgroup& S, const LayerElement& x) const {
    const Layer& L = layer(l);
    LayerElement y = x;
    for (int k = static_cast<int>(S.gens.size()) - 1; k >= 0; --k) {
        LayerElement prod = y, cur = y;
        for (u64 j = 1; j < S.rel_orders[k]; ++j) {
            cur = act(l, over_H, S.gens[k], cur);
            prod = L.mul(prod, cur);
        }
        y = prod;
    }
    return y;
}

LayerElement Tower::trace_subgroup(int l, bool over_H, const Subgroup& S, const LayerElement& x) const {
    const Layer& L = layer(l);
    LayerElement y = x;
    for (int k = static_cast<int>(S.gens.size()) - 1; k >= 0; --k) {
        LayerElement sum = y, cur = y;
        for (u64 j = 1; j < S.rel_orders[k]; ++j) {
            cur = act(l, over_H, S.gens[k], cur);
            sum = L.add(sum, cur);
        }
        y = sum;
    }
    return y;
}

LayerElement Tower::relative_norm(const LayerElement& x, int l) const {
    const RingContext& R = ring();
    const TowerGroup& G = group(l, false);
    std::vector<GalElt> members;
    for (const GalElt& g : G.elements()) {
        if (l == 0) {
            members.push_back(g);
            continue;
        }
        FieldElement b = R.sub(G.multiplier(g), R.one());
        if (R.valuation_or(b, l) >= l) members.push_back(g);
    }
    Subgroup S = make_subgroup(G, members);
    LayerElement y = norm_subgroup(l, false, S, x);
    if (l == 0) {
        if (!layer(0).in_base(y)) throw PrecisionFault("norm to H' is not rational at working precision");
        return y;
    }
    return project_down(y, l);
}

FieldElement Tower::full_norm(const LayerElement& x, int l, bool over_H, int* prec_out) const {
    const TowerGroup& G = group(l, over_H);
    Subgroup S = make_subgroup(G, G.generators());
    LayerElement y = norm_subgroup(l, over_H, S, x);
    if (!layer(l).in_base(y)) throw PrecisionFault("full norm is not rational at working precision");
    if (prec_out) *prec_out = y.prec;
    return ring().reduce_mod(y.c[0], y.prec);
}

LayerElement Tower::iota(const Series& g, int l, bool polynomial) const { return layer(l).eval(g, -(l + 1), polynomial); }

// ---------------------------------------------------------------------------
// R = O[[T]] / (f^{(m+1)})

RRing::RRing(const Tower& tower, int m) : tower_(&tower), m_(m) {
    if (m > tower.max_level()) throw DomainError("RRing level exceeds the tower");
    mod_ = iterate_f(tower.frame(), m + 1);
    rank_ = degree(mod_);
}

Series RRing::reduce(const Series& g) const {
    Series r = rem_monic(g, mod_);
    return truncate(r, rank_ - 1);
}

Series RRing::mul(const Series& a, const Series& b) const {
    const int D = 2 * rank_;
    return reduce(ltc::mul(truncate(a, D), truncate(b, D)));
}

std::pair<FieldElement, std::vector<LayerElement>> RRing::iota(const Series& g) const {
    std::vector<LayerElement> comps;
    Series r = reduce(g);
    for (int l = 0; l <= m_; ++l) comps.push_back(tower_->iota(r, l, true));
    return {r.c[0], comps};
}

FieldElement RRing::norm_det(const Series& g) const {
    const RingContext& R = tower_->ring();
    Series v = reduce(g);
    std::vector<std::vector<FieldElement>> M(rank_, std::vector<FieldElement>(rank_));
    for (int j = 0; j < rank_; ++j) {
        for (int i = 0; i < rank_; ++i) M[i][j] = v.c[i];
        // v <- T v mod f^{(m+1)}
        FieldElement top = v.c[rank_ - 1];
        for (int i = rank_ - 1; i >= 1; --i) v.c[i] = v.c[i - 1];
        v.c[0] = R.zero();
        if (!R.is_zero(top))
            for (int i = 0; i < rank_; ++i) v.c[i] = R.sub(v.c[i], R.mul(top, mod_.c[i]));
    }
    return det_ring(M, R);
}

FieldElement RRing::norm_product(const Series& g, int* prec_out) const {
    const RingContext& R = tower_->ring();
    auto [g0, comps] = iota(g);
    FieldElement acc = g0;
    int prec = R.N();
    for (int l = 0; l <= m_; ++l) {
        int pl = 0;
        acc = R.mul(acc, R.frob(tower_->full_norm(comps[l], l, false, &pl), l + 1));
        prec = std::min(prec, pl);
    }
    if (prec_out) *prec_out = prec;
    return R.reduce_mod(acc, prec);
}

FieldElement RRing::norm_resultant(const Series& g) const {
    const RingContext& R = tower_->ring();
    Series r = reduce(g);
    const int A = rank_, B = std::max(degree(r), 0);
    if (B == 0) return R.pow(r.c[0], static_cast<u64>(A));
    const int n = A + B;
    std::vector<std::vector<FieldElement>> S(n, std::vector<FieldElement>(n));
    // rows 0..B-1: shifts of f^{(m+1)}; rows B..n-1: shifts of g; columns from the top degree down
    for (int i = 0; i < B; ++i)
        for (int k = 0; k <= A; ++k) S[i][i + (A - k)] = mod_.c[k];
    for (int i = 0; i < A; ++i)
        for (int k = 0; k <= B; ++k) S[B + i][i + (B - k)] = r.c[k];
    return det_ring(S, R);
}

}  // namespace ltc
