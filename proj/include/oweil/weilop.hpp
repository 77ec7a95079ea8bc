#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "oweil/cyclotomic.hpp"
#include "oweil/kernels.hpp"

namespace oweil {

// Raised when a product fails to collapse to scaled roots of unity; the
// verification layers report the witness as a failed exact identity.
struct CollapseError : std::runtime_error {
    CollapseError(std::size_t x, std::size_t z, std::string what)
        : std::runtime_error(std::move(what)), x(x), z(z) {}
    std::size_t x, z;
};

/**
 * Exact operator on L^2(M), dim = |M|. Entries are scale * (-1)^s zeta_q^j;
 * every operator this library manipulates (generator images, their products,
 * permutation intertwiners) stays in this class, and any product that would
 * leave it raises CollapseError instead of silently approximating.
 *
 * Convention: (K f)(x) = sum_y K(x, y) f(y).
 */
class WeilOperator {
public:
    enum class Form { Monomial, Dense };

    static WeilOperator identity(unsigned q, std::size_t dim);
    static WeilOperator monomial(unsigned q, std::vector<std::uint32_t> col,
                                 std::vector<std::uint16_t> exp, Rational scale);
    static WeilOperator dense(unsigned q, std::size_t dim,
                              std::vector<std::int16_t> codes, Rational scale);

    Form form() const { return form_; }
    unsigned q() const { return q_; }
    std::size_t dim() const { return dim_; }
    const Rational& scale() const { return scale_; }
    const std::vector<std::uint32_t>& columns() const { return col_; }
    const std::vector<std::uint16_t>& exponents() const { return exp_; }
    const std::vector<std::int16_t>& codes() const { return codes_; }

    bool is_identity() const;
    bool is_zero() const { return scale_ == 0; }

    // Entry as an exact cyclotomic value (reporting/export path).
    Cyclotomic entry(const CyclotomicCtx& ctx, std::size_t x, std::size_t y) const;

    WeilOperator multiply(const WeilOperator& o, bool parallel = false) const;
    WeilOperator conjugate_transpose() const;
    bool operator==(const WeilOperator& o) const;
    bool operator!=(const WeilOperator& o) const { return !(*this == o); }

    // K K^dagger == 1, exactly.
    bool unitary(bool parallel = false) const;

private:
    WeilOperator() = default;
    void canonicalize();

    Form form_ = Form::Monomial;
    unsigned q_ = 0;
    std::size_t dim_ = 0;
    Rational scale_ = 1;
    std::vector<std::uint32_t> col_;   // monomial: nonzero column per row
    std::vector<std::uint16_t> exp_;   // monomial: zeta exponent per row
    std::vector<std::int16_t> codes_;  // dense: -1 or q*s + j per entry
};

} // namespace oweil
