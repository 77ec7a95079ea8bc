#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "oweil/rational.hpp"

namespace oweil {

/**
 * Arithmetic context for the cyclotomic field Q(zeta_N).
 *
 * Elements are stored on the power basis {1, zeta, ..., zeta^(phi(N)-1)};
 * reduction modulo the N-th cyclotomic polynomial keeps representations
 * canonical, so equality of values is equality of coefficient vectors.
 */
class CyclotomicCtx {
public:
    explicit CyclotomicCtx(unsigned order);

    unsigned order() const { return order_; }          // N
    unsigned degree() const { return degree_; }        // phi(N)

    // Coefficients of x^k reduced mod Phi_N, for 0 <= k < N. Rows are
    // integral because Phi_N is monic with integer coefficients.
    const std::vector<std::int64_t>& power_row(unsigned k) const {
        return rows_[k % order_];
    }

    // Largest |coefficient| over all reduction rows; used by overflow guards.
    std::int64_t row_bound() const { return row_bound_; }

    const std::vector<std::int64_t>& cyclotomic_polynomial() const { return phi_; }

private:
    unsigned order_;
    unsigned degree_;
    std::vector<std::int64_t> phi_;                    // monic, length degree_+1
    std::vector<std::vector<std::int64_t>> rows_;      // rows_[k] = x^k mod Phi_N
    std::int64_t row_bound_;
};

/**
 * Exact element of Q(zeta_N): phi(N) arbitrary-precision rational
 * coefficients on the power basis. Values are immutable in spirit; all
 * operations return fresh canonical values.
 */
class Cyclotomic {
public:
    Cyclotomic() : ctx_(nullptr) {}
    explicit Cyclotomic(const CyclotomicCtx* ctx)
        : ctx_(ctx), coeff_(ctx->degree()) {}
    Cyclotomic(const CyclotomicCtx* ctx, const Rational& constant)
        : ctx_(ctx), coeff_(ctx->degree()) {
        coeff_[0] = constant;
    }

    const CyclotomicCtx* ctx() const { return ctx_; }
    const std::vector<Rational>& coefficients() const { return coeff_; }
    Rational& coefficient(std::size_t i) { return coeff_[i]; }

    bool is_zero() const;
    bool is_rational() const;             // all zeta-coefficients vanish
    Rational rational_value() const;      // requires is_rational()

    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator-() const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic operator*(const Rational& r) const;
    Cyclotomic& operator+=(const Cyclotomic& o);
    Cyclotomic& operator-=(const Cyclotomic& o);

    bool operator==(const Cyclotomic& o) const { return coeff_ == o.coeff_; }
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

    std::complex<double> to_complex() const;
    std::string to_string() const;        // human-readable coefficient list

private:
    const CyclotomicCtx* ctx_;
    std::vector<Rational> coeff_;

    friend Cyclotomic zeta_pow(const CyclotomicCtx& ctx, long k);
    friend Cyclotomic conjugate(const Cyclotomic& a);
};

// zeta_N^k in canonical form; k is reduced mod N (negative k allowed).
Cyclotomic zeta_pow(const CyclotomicCtx& ctx, long k);

// Complex conjugation: zeta^k -> zeta^(N-k), extended linearly.
Cyclotomic conjugate(const Cyclotomic& a);

// Multiplicative inverse in Q(zeta_N); throws std::domain_error on zero.
Cyclotomic inverse(const Cyclotomic& a);

// ---------------------------------------------------------------------------
// Integer fast path. Bulk kernels (operator products, projector assembly)
// work on int64 coefficient vectors with an external rational scale; values
// are exact as long as the overflow guards hold, and they convert losslessly
// to Cyclotomic for reporting and comparisons.
// ---------------------------------------------------------------------------

// c[(i+j) mod N] += a_i * b_j over the redundant basis {1,...,zeta^(N-1)}.
// Callers guarantee via guard_product_bound that no intermediate overflows.
void redundant_mul_acc(const CyclotomicCtx& ctx,
                       const std::vector<std::int64_t>& a,
                       const std::vector<std::int64_t>& b,
                       std::vector<std::int64_t>& acc);

// Fold a redundant length-N accumulator to canonical phi(N) coefficients.
std::vector<std::int64_t> fold_redundant(const CyclotomicCtx& ctx,
                                         const std::vector<std::int64_t>& acc);

// Throws std::overflow_error unless maxA*maxB*terms*(row_bound+1) fits i64.
void guard_product_bound(const CyclotomicCtx& ctx, std::int64_t max_a,
                         std::int64_t max_b, std::int64_t terms);

Cyclotomic from_integer_coeffs(const CyclotomicCtx& ctx,
                               const std::vector<std::int64_t>& canonical,
                               const Rational& scale);

} // namespace oweil
