#include "oweil/kernels.hpp"

#include <array>
#include <stdexcept>

namespace oweil::kernels {

namespace {

// Per-code bitsets of one side of the product. For the left factor,
// bits[code][x] holds the y-bitset of row x; for the right factor (stored
// transposed) bits[code][z] holds the y-bitset of column z.
struct BitPlanes {
    std::size_t dim, words;
    unsigned ncodes;
    std::vector<std::uint64_t> bits;
    std::vector<std::int16_t> active;

    BitPlanes(unsigned q, std::size_t d, const std::int16_t* m, bool transposed)
        : dim(d), words((d + 63) / 64), ncodes(2 * q) {
        bits.assign(static_cast<std::size_t>(ncodes) * dim * words, 0);
        std::vector<bool> seen(ncodes, false);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) {
                const std::int16_t code = m[r * dim + c];
                if (code < 0) continue;
                if (code >= static_cast<std::int16_t>(ncodes))
                    throw std::invalid_argument("kernel code out of range");
                seen[code] = true;
                const std::size_t row = transposed ? c : r;
                const std::size_t bit = transposed ? r : c;
                row_ptr(code, row)[bit / 64] |= 1ull << (bit % 64);
            }
        for (unsigned c = 0; c < ncodes; ++c)
            if (seen[c]) active.push_back(static_cast<std::int16_t>(c));
    }

    std::uint64_t* row_ptr(std::int16_t code, std::size_t r) {
        return bits.data() + (static_cast<std::size_t>(code) * dim + r) * words;
    }
    const std::uint64_t* row_ptr(std::int16_t code, std::size_t r) const {
        return bits.data() + (static_cast<std::size_t>(code) * dim + r) * words;
    }
};

// Reduce a histogram to canonical coefficients d_i = counts[i] - counts[q-1]
// and match against 0, V zeta^j (j < q-1) or V zeta^(q-1); V may be negative.
bool collapse_entry(unsigned q, const std::int64_t* counts, std::int64_t& value,
                    std::int16_t& code) {
    const std::int64_t last = counts[q - 1];
    bool all_equal = true;
    std::int64_t common = counts[0] - last;
    int nonzero_at = -1;
    int nonzero_count = 0;
    for (unsigned i = 0; i + 1 < q; ++i) {
        const std::int64_t d = counts[i] - last;
        if (d != common) all_equal = false;
        if (d != 0) {
            ++nonzero_count;
            nonzero_at = static_cast<int>(i);
        }
    }
    if (all_equal) {
        if (common == 0) {
            value = 0;
            code = -1;
        } else {
            value = -common;                       // value = -common * zeta^(q-1)
            code = static_cast<std::int16_t>(q - 1);
        }
        return true;
    }
    if (nonzero_count == 1) {
        value = counts[nonzero_at] - last;
        code = static_cast<std::int16_t>(nonzero_at);
        return true;
    }
    return false;
}

// Accumulate popcount(rowA_t & rowB(z)) into counts[t][z * q + k] for a tile
// of A rows; each B row is loaded once per tile. Two accumulators break the
// popcount latency chain; the word count is a template parameter so the
// inner loops fully unroll.
template <unsigned Words>
void accumulate_plane(const std::uint64_t* const* rowa, std::size_t tile,
                      const std::uint64_t* planeb, std::size_t dim, unsigned q,
                      unsigned k, int sign, std::int64_t* const* counts) {
    for (std::size_t z = 0; z < dim; ++z) {
        const std::uint64_t* rb = planeb + z * Words;
        for (std::size_t t = 0; t < tile; ++t) {
            const std::uint64_t* a = rowa[t];
            std::int64_t n0 = 0, n1 = 0;
            for (unsigned w = 0; w + 1 < Words; w += 2) {
                n0 += __builtin_popcountll(a[w] & rb[w]);
                n1 += __builtin_popcountll(a[w + 1] & rb[w + 1]);
            }
            if (Words % 2) n0 += __builtin_popcountll(a[Words - 1] & rb[Words - 1]);
            counts[t][z * q + k] += sign > 0 ? n0 + n1 : -(n0 + n1);
        }
    }
}

using PlaneAccumulator = void (*)(const std::uint64_t* const*, std::size_t,
                                  const std::uint64_t*, std::size_t, unsigned, unsigned,
                                  int, std::int64_t* const*);

void accumulate_plane_generic(const std::uint64_t* const* rowa, std::size_t tile,
                              const std::uint64_t* planeb, std::size_t dim, unsigned q,
                              unsigned k, int sign, std::int64_t* const* counts,
                              std::size_t words) {
    for (std::size_t z = 0; z < dim; ++z) {
        const std::uint64_t* rb = planeb + z * words;
        for (std::size_t t = 0; t < tile; ++t) {
            const std::uint64_t* a = rowa[t];
            std::int64_t n = 0;
            for (std::size_t w = 0; w < words; ++w) n += __builtin_popcountll(a[w] & rb[w]);
            counts[t][z * q + k] += sign > 0 ? n : -n;
        }
    }
}

template <bool Parallel>
DenseProduct dense_mul_impl(unsigned q, std::size_t dim, const std::int16_t* a,
                            const std::int16_t* b) {
    if (q < 2 || q > 15) throw std::invalid_argument("kernel expects small prime q");
    const BitPlanes pa(q, dim, a, false);
    const BitPlanes pb(q, dim, b, true);
    const std::size_t words = pa.words;

    PlaneAccumulator fixed = nullptr;
    switch (words) {
        case 10: fixed = accumulate_plane<10>; break;   // dim 625 at q = 5
        case 38: fixed = accumulate_plane<38>; break;   // dim 2401 at q = 7
        default: break;
    }

    DenseProduct out;
    out.codes.assign(dim * dim, -1);

    // Per-row results so the parallel kernel is race-free and merges to the
    // exact serial outcome (first failure in (x, z) order wins).
    std::vector<std::int64_t> row_mag(dim, 0);
    std::vector<std::int64_t> row_fail_z(dim, -1);
    std::vector<std::int64_t> fail_hist(dim * q, 0);

    constexpr std::size_t kTile = 16;
    const std::size_t tiles = (dim + kTile - 1) / kTile;

    #pragma omp parallel if (Parallel)
    {
        std::vector<std::int64_t> counts_buf(kTile * dim * q);
        #pragma omp for schedule(static)
        for (std::size_t tb = 0; tb < tiles; ++tb) {
            const std::size_t x0 = tb * kTile;
            const std::size_t tile = std::min(kTile, dim - x0);
            std::fill(counts_buf.begin(), counts_buf.begin() + tile * dim * q, 0);
            std::int64_t* counts[kTile];
            const std::uint64_t* rowa[kTile];
            for (std::size_t t = 0; t < tile; ++t) counts[t] = counts_buf.data() + t * dim * q;
            for (std::int16_t ca : pa.active) {
                for (std::size_t t = 0; t < tile; ++t) rowa[t] = pa.row_ptr(ca, x0 + t);
                const unsigned ja = ca % q, sa = ca / q;
                for (std::int16_t cb : pb.active) {
                    const std::uint64_t* planeb = pb.row_ptr(cb, 0);
                    const unsigned k = (ja + cb % q) % q;
                    const int sign = ((sa ^ (cb / q)) & 1) ? -1 : 1;
                    if (fixed)
                        fixed(rowa, tile, planeb, dim, q, k, sign, counts);
                    else
                        accumulate_plane_generic(rowa, tile, planeb, dim, q, k, sign,
                                                 counts, words);
                }
            }
            for (std::size_t t = 0; t < tile; ++t) {
                const std::size_t x = x0 + t;
                for (std::size_t z = 0; z < dim; ++z) {
                    std::int64_t value = 0;
                    std::int16_t code = -1;
                    if (!collapse_entry(q, counts[t] + z * q, value, code)) {
                        row_fail_z[x] = static_cast<std::int64_t>(z);
                        for (unsigned k = 0; k < q; ++k)
                            fail_hist[x * q + k] = counts[t][z * q + k];
                        break;
                    }
                    if (value == 0) continue;
                    std::int64_t mag = value;
                    std::int16_t signed_code = code;
                    if (mag < 0) {
                        mag = -mag;
                        signed_code = static_cast<std::int16_t>(code + q);
                    }
                    if (row_mag[x] == 0) {
                        row_mag[x] = mag;
                    } else if (row_mag[x] != mag) {
                        row_fail_z[x] = static_cast<std::int64_t>(z);
                        for (unsigned k = 0; k < q; ++k)
                            fail_hist[x * q + k] = counts[t][z * q + k];
                        break;
                    }
                    out.codes[x * dim + z] = signed_code;
                }
            }
        }
    }

    std::int64_t magnitude = 0;
    for (std::size_t x = 0; x < dim; ++x) {
        if (row_fail_z[x] >= 0) {
            out.collapsed = false;
            out.fail_x = x;
            out.fail_z = static_cast<std::size_t>(row_fail_z[x]);
            out.fail_counts.assign(fail_hist.begin() + x * q, fail_hist.begin() + (x + 1) * q);
            return out;
        }
        if (row_mag[x] == 0) continue;
        if (magnitude == 0) {
            magnitude = row_mag[x];
        } else if (magnitude != row_mag[x]) {
            out.collapsed = false;
            out.fail_x = x;
            out.fail_z = 0;
            out.fail_counts.assign(q, 0);
            return out;
        }
    }
    out.collapsed = true;
    out.magnitude = magnitude;
    return out;
}

} // namespace

DenseProduct dense_mul_serial(unsigned q, std::size_t dim, const std::int16_t* a,
                              const std::int16_t* b) {
    return dense_mul_impl<false>(q, dim, a, b);
}

DenseProduct dense_mul_parallel(unsigned q, std::size_t dim, const std::int16_t* a,
                                const std::int16_t* b) {
    return dense_mul_impl<true>(q, dim, a, b);
}

DenseProduct dense_mul(unsigned q, std::size_t dim, const std::int16_t* a,
                       const std::int16_t* b, bool parallel) {
    return parallel ? dense_mul_parallel(q, dim, a, b) : dense_mul_serial(q, dim, a, b);
}

} // namespace oweil::kernels
