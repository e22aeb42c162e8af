#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ltc {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// Raised when a result would depend on digits below the working precision.
class PrecisionFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised on violated preconditions (bad parameters, non-units, wrong domain).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxDim = 4;

// Coordinates of an element of O_{H'} over the basis theta^i * pi^j
// (i < r, j < e), each reduced into [0, p^N).  Layout: the W-part a_0..a_{r-1}
// first, then the pi-part b_0..b_{r-1} when e = 2.
struct FieldElement {
    std::array<u64, kMaxDim> c{};
    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

struct ContextParams {
    u64 p = 3;
    int N = 16;
    int e = 1;   // ramification of H over Q_p
    int fH = 1;  // residue degree of H over Q_p
    int d = 1;   // [H' : H]
    // x^2 + eis[1] x + eis[0]; defaults to the cyclotomic model for p = 2, 3.
    std::optional<std::array<i64, 2>> eis;
};

// (O_H / p_H^{m+1})^x as a product of cyclic groups, with discrete logs.
class UnitGroup {
public:
    int level = 0;
    std::vector<FieldElement> gens;  // canonical representatives in O_H
    std::vector<u64> orders;
    u64 order() const;
    // Exponent vector of the class of a unit x of O_H.
    std::vector<u64> dlog(const FieldElement& x) const;
    FieldElement element(const std::vector<u64>& exps) const;
    std::string key(const FieldElement& x) const;

private:
    friend class RingContext;
    const class RingContext* ctx_ = nullptr;
    // raw generator exponents (row vector) times V gives basis exponents
    std::vector<std::vector<i64>> V_;
    std::vector<int> kept_;   // column of V feeding each generator
    std::vector<i64> mult_;   // CRT multiplier onto the prime-power part
    std::shared_ptr<const std::unordered_map<std::string, std::vector<i64>>> table_;
};

// Unreduced sum of products; reduce once with RingContext::acc_reduce.
struct MulAcc {
    std::array<u128, 21> v{};
};

class RingContext;
using Ctx = std::shared_ptr<const RingContext>;

class RingContext {
public:
    static Ctx make(const ContextParams& params);
    // Signature-compatible constructor for the unramified-over-Q_p-residue case.
    static Ctx make(u64 p, int N, int e, int d, std::optional<std::array<i64, 2>> eis = {});

    u64 p() const { return p_; }
    int N() const { return N_; }
    int e() const { return e_; }
    int fH() const { return fH_; }
    int d() const { return d_; }
    int r() const { return r_; }        // [W : Z_p] = fH * d
    int dim() const { return r_ * e_; } // Z_p-rank of O_{H'}
    u64 q() const { return q_; }
    int s() const { return s_; }
    u64 mod() const { return mod_; }
    const std::array<i64, 2>& eis() const { return eis_; }
    const std::vector<u64>& w_poly() const { return wpoly_; }
    const ContextParams& params() const { return params_; }
    // Same field with kGuard more digits; carries guard digits for log/exp.
    const RingContext& guarded() const { return wide_ ? *wide_ : *this; }
    static constexpr int kGuard = 8;

    // scalar arithmetic modulo p^N
    u64 madd(u64 a, u64 b) const { u64 s = a + b; return s >= mod_ ? s - mod_ : s; }
    u64 msub(u64 a, u64 b) const { return a >= b ? a - b : a + mod_ - b; }
    u64 mmul(u64 a, u64 b) const { return static_cast<u64>((static_cast<u128>(a) * b) % mod_); }
    u64 mred(i64 a) const;
    u64 minv(u64 a) const;  // a unit mod p
    int vp(u64 a) const;    // N when a = 0

    FieldElement zero() const { return {}; }
    FieldElement one() const { return from_int(1); }
    FieldElement from_int(i64 a) const;
    FieldElement theta() const;   // generator of W over Z_p (0 when r = 1)
    FieldElement pi() const;      // uniformizer of H: p or the Eisenstein root
    FieldElement from_coords(const std::vector<i64>& coords) const;

    FieldElement add(const FieldElement& x, const FieldElement& y) const;
    FieldElement sub(const FieldElement& x, const FieldElement& y) const;
    FieldElement neg(const FieldElement& x) const;
    FieldElement mul(const FieldElement& x, const FieldElement& y) const;
    FieldElement scal(const FieldElement& x, u64 a) const;
    void acc_mul(MulAcc& acc, const FieldElement& x, const FieldElement& y) const;
    FieldElement acc_reduce(const MulAcc& acc) const;
    FieldElement pow(const FieldElement& x, u64 k) const;
    FieldElement inv(const FieldElement& x) const;  // x a unit
    bool is_zero(const FieldElement& x) const;
    bool is_unit(const FieldElement& x) const;
    // x == y modulo p^k.
    bool equal_mod(const FieldElement& x, const FieldElement& y, int k) const;
    FieldElement reduce_mod(const FieldElement& x, int k) const;

    // Absolute Frobenius sigma^k on W, identity on pi.
    FieldElement sigma(const FieldElement& x, int k) const;
    // phi = sigma^{fH}, generator of Gal(H'/H); k may be negative.
    FieldElement frob(const FieldElement& x, int k) const;
    FieldElement norm_to_H(const FieldElement& x) const;
    bool in_H(const FieldElement& x) const;

    // v_H, normalized so that v_H(pi) = 1 and v_H(p) = e.
    int valuation(const FieldElement& x) const;
    // v_H at most `cap`; x treated as zero (PrecisionFault) when all coordinates vanish.
    int valuation_or(const FieldElement& x, int cap) const;
    // Exact division by p^k (coordinates must be divisible); top digits become 0.
    FieldElement div_p(const FieldElement& x, int k) const;
    // Exact division by an element of valuation v_H(z); x must be divisible.
    FieldElement div_exact(const FieldElement& x, const FieldElement& z) const;

    FieldElement teichmuller(const FieldElement& x) const;
    FieldElement residue_teichmuller_generator() const;  // generator of mu_{q-1} in H
    FieldElement iwasawa_log(const FieldElement& x) const;
    FieldElement exp(const FieldElement& x) const;  // v_p(x) > 1/(p-1)

    // Z_p-coordinates of an element of H over basis_H().
    const std::vector<FieldElement>& basis_H() const { return basis_h_; }
    std::vector<u64> coords_H(const FieldElement& x) const;
    UnitGroup residue_unit_group(int m) const;

    std::string to_string(const FieldElement& x) const;

private:
    RingContext() = default;
    void init(const ContextParams& params, bool guard);
    void wmul(const u64* a, const u64* b, u64* out) const;
    FieldElement apply_matrix(const std::vector<std::vector<u64>>& m, const FieldElement& x) const;

    ContextParams params_;
    u64 p_ = 0, q_ = 0, mod_ = 0;
    int N_ = 0, e_ = 1, fH_ = 1, d_ = 1, r_ = 1, s_ = 1;
    std::array<i64, 2> eis_{};
    u64 c0_ = 0, c1_ = 0;  // eis reduced mod p^N
    bool small_mod_ = true;  // products fit in 64 bits, so MulAcc never overflows
    std::vector<u64> wpoly_;  // monic, low to high, length r+1
    std::vector<std::vector<std::vector<u64>>> sigma_mats_;  // sigma^k, k < r
    std::vector<FieldElement> basis_h_;
    std::vector<std::vector<u64>> h_extract_;  // coords_H = h_extract_ * (selected coords)
    std::vector<int> h_rows_;
    FieldElement teich_gen_{};
    Ctx wide_;
};

u64 ipow(u64 b, int k);
bool is_prime(u64 n);

}  // namespace ltc
