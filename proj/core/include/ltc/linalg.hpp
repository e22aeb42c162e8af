#pragma once

#include <vector>

#include "ltc/padic.hpp"
#include "ltc/series.hpp"

namespace ltc {

using ZpMatrix = std::vector<std::vector<u64>>;

struct ZpSolution {
    std::vector<u64> x;
    // x is reliable modulo p^reliable; equals data precision minus the largest pivot valuation.
    int reliable = 0;
    int max_pivot_valuation = 0;
};

// Solves A x = b over Z_p (entries mod p^N) for A with at least as many rows as
// columns and full column rank.  Complete pivoting on valuation.  Rows beyond
// the rank must be consistent modulo p^data_prec, otherwise DomainError.
ZpSolution solve_zp(ZpMatrix A, std::vector<u64> b, const RingContext& ctx, int data_prec);

// Determinant over O_{H'} by valuation-pivoted elimination; exact modulo p^N
// when the entries are.
FieldElement det_ring(std::vector<std::vector<FieldElement>> A, const RingContext& ctx);

// Division-free determinant (Berkowitz) of a square matrix of series.
Series det_berkowitz(const std::vector<std::vector<Series>>& A);

}  // namespace ltc
