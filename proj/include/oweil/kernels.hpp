#pragma once

#include <cstdint>
#include <vector>

namespace oweil::kernels {

/**
 * Dense kernel-matrix product over the group of scaled roots of unity.
 *
 * Inputs are code matrices: -1 for a zero entry, q*s + j for (-1)^s zeta^j.
 * The product entry is a sum of dim roots of unity; for the operators this
 * library multiplies it always collapses back to 0 or +-V zeta^j with one
 * magnitude V shared across the matrix. The kernels report the collapsed
 * code matrix plus V, or the first non-collapsing entry as a witness.
 *
 * The serial kernel is the reference implementation; the parallel kernel
 * must produce bit-identical results (integer arithmetic only).
 */
struct DenseProduct {
    bool collapsed = false;
    std::int64_t magnitude = 0;                 // shared |V|; 0 for zero matrix
    std::vector<std::int16_t> codes;            // collapsed entries
    std::size_t fail_x = 0, fail_z = 0;         // witness when !collapsed
    std::vector<std::int64_t> fail_counts;      // signed histogram at witness
};

DenseProduct dense_mul_serial(unsigned q, std::size_t dim,
                              const std::int16_t* a, const std::int16_t* b);
DenseProduct dense_mul_parallel(unsigned q, std::size_t dim,
                                const std::int16_t* a, const std::int16_t* b);
DenseProduct dense_mul(unsigned q, std::size_t dim, const std::int16_t* a,
                       const std::int16_t* b, bool parallel);

} // namespace oweil::kernels
