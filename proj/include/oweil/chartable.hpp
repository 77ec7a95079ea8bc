#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "oweil/cyclotomic.hpp"

namespace oweil {

/// Finite group given by its multiplication table.
struct FiniteGroup {
    std::size_t size = 0;
    std::size_t identity = 0;
    std::vector<std::uint16_t> mult;   // size x size
    std::vector<std::uint16_t> inv;

    std::size_t mul(std::size_t a, std::size_t b) const { return mult[a * size + b]; }
    std::size_t inverse(std::size_t a) const { return inv[a]; }
};

struct ClassData {
    std::vector<std::uint32_t> class_of;        // element -> class index
    std::vector<std::uint32_t> reps;            // class -> representative
    std::vector<std::uint32_t> sizes;
    std::vector<std::uint32_t> inverse_class;   // class of g^-1
    std::vector<unsigned> element_order;
    unsigned exponent = 1;
    std::size_t count() const { return reps.size(); }
};
ClassData conjugacy_classes(const FiniteGroup& g);

/**
 * Exact character table. Computed with the Burnside-Dixon method: class-sum
 * matrices are simultaneously diagonalized over F_ell (ell the smallest
 * prime = 1 mod exponent), degrees recovered from the orthogonality norm,
 * and values lifted to Q(zeta_N) through eigenvalue multiplicities of g^s.
 * Row and column orthogonality are then re-verified exactly over Q(zeta_N).
 */
struct CharacterTable {
    std::shared_ptr<const CyclotomicCtx> ctx;   // Q(zeta_N)
    unsigned ell = 0;                           // the Dixon prime
    std::vector<long> dims;
    std::vector<std::vector<Cyclotomic>> values;   // [irreducible][class]
    bool row_orthogonal = false;
    bool col_orthogonal = false;
    bool dims_consistent = false;               // sum of squares = |U|
    std::size_t count() const { return dims.size(); }
};

unsigned smallest_dixon_prime(unsigned exponent, std::uint64_t group_order);

CharacterTable character_table(const FiniteGroup& g, const ClassData& classes,
                               std::shared_ptr<const CyclotomicCtx> ctx);

} // namespace oweil
