#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "oweil/cyclotomic.hpp"

namespace oweil {

/**
 * Prime-field arithmetic for F_q, q an odd prime > 3. Residues are the
 * canonical representatives 0..q-1 so matrices hash and cache bit-exactly.
 */
class FieldCtx {
public:
    explicit FieldCtx(unsigned q) : q_(q) {
        if (q < 5) throw std::invalid_argument("field size must be at least 5");
        if (q % 2 == 0) throw std::invalid_argument("field size must be odd");
        for (unsigned p = 3; p * p <= q; p += 2)
            if (q % p == 0) throw std::invalid_argument("field size must be prime");
        inv_.assign(q_, 0);
        for (unsigned a = 1; a < q_; ++a) inv_[a] = pow_mod(a, q_ - 2);
    }

    unsigned q() const { return q_; }

    unsigned add(unsigned a, unsigned b) const { return (a + b) % q_; }
    unsigned sub(unsigned a, unsigned b) const { return (a + q_ - b % q_) % q_; }
    unsigned mul(unsigned a, unsigned b) const { return (a * b) % q_; }
    unsigned neg(unsigned a) const { return a == 0 ? 0 : q_ - a; }
    unsigned inv(unsigned a) const {
        if (a % q_ == 0) throw std::domain_error("inverse of zero");
        return inv_[a % q_];
    }
    unsigned reduce(long a) const {
        long r = a % static_cast<long>(q_);
        return static_cast<unsigned>(r < 0 ? r + q_ : r);
    }

private:
    unsigned pow_mod(unsigned base, unsigned e) const {
        unsigned long long r = 1, b = base % q_;
        while (e) {
            if (e & 1) r = r * b % q_;
            b = b * b % q_;
            e >>= 1;
        }
        return static_cast<unsigned>(r);
    }

    unsigned q_;
    std::vector<unsigned> inv_;
};

/**
 * Additive character psi_lambda(x) = zeta_q^(lambda x) of F_q^+. Every
 * non-trivial additive character of a prime field arises this way, so the
 * twist lambda != 0 parametrizes them all.
 */
class AdditiveCharacter {
public:
    AdditiveCharacter(std::shared_ptr<const FieldCtx> field, unsigned lambda,
                      std::shared_ptr<const CyclotomicCtx> zq)
        : field_(std::move(field)), lambda_(lambda % field_->q()), zq_(std::move(zq)) {
        if (lambda_ == 0) throw std::invalid_argument("character twist must be nonzero");
        if (zq_->order() != field_->q())
            throw std::invalid_argument("character needs the order-q cyclotomic context");
    }

    unsigned lambda() const { return lambda_; }
    const FieldCtx& field() const { return *field_; }
    const CyclotomicCtx& zeta_ctx() const { return *zq_; }

    // Exponent of zeta_q for psi(x); the cheap form used in bulk loops.
    unsigned exponent(long x) const { return field_->reduce(x * static_cast<long>(lambda_)); }

    Cyclotomic operator()(long x) const { return zeta_pow(*zq_, exponent(x)); }

private:
    std::shared_ptr<const FieldCtx> field_;
    unsigned lambda_;
    std::shared_ptr<const CyclotomicCtx> zq_;
};

} // namespace oweil
