#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "oweil/gfq.hpp"
#include "oweil/slstar.hpp"

namespace oweil {

/**
 * The module M = V^2 with V = F_q^(2n) row vectors and the componentwise
 * right A-action (x, y) a = (xa, ya). Points are indexed in row-major
 * lexicographic order of (x, y) with the first coordinate most significant;
 * this fixed order indexes every operator built downstream.
 */
class ModuleSpace {
public:
    ModuleSpace(unsigned q, unsigned n);

    unsigned q() const { return q_; }
    unsigned vdim() const { return vdim_; }                  // 2n
    std::size_t vcount() const { return vcount_; }           // q^(2n)
    std::size_t size() const { return vcount_ * vcount_; }   // |M| = q^(4n)

    std::size_t index(std::size_t xcode, std::size_t ycode) const {
        return xcode * vcount_ + ycode;
    }
    std::size_t xcode(std::size_t point) const { return point / vcount_; }
    std::size_t ycode(std::size_t point) const { return point % vcount_; }

    // Vector coordinates of a code, most significant coordinate first.
    const std::uint8_t* vector_of(std::size_t code) const {
        return coords_.data() + code * vdim_;
    }
    std::size_t code_of(const std::uint8_t* v) const;
    std::size_t vector_action(std::size_t code, const FqMatrix& a) const;

    // (x, y) . a = (xa, ya).
    std::size_t point_action(std::size_t point, const FqMatrix& a) const {
        return index(vector_action(xcode(point), a), vector_action(ycode(point), a));
    }

private:
    unsigned q_, vdim_;
    std::size_t vcount_;
    std::vector<std::uint8_t> coords_;
};

/**
 * The Weil datum for the tilde/eps=-1 group: module M, trivial alpha,
 * characters chi and gamma built from psi and the symplectic bracket
 * [x, y] = <x, y J_2n>, and the normalization c = q^(-2n).
 */
class WeilDatum {
public:
    WeilDatum(const GroupCtx& ctx, unsigned lambda = 1);

    const GroupCtx& group() const { return ctx_; }
    const ModuleSpace& module() const { return module_; }
    const AdditiveCharacter& psi() const { return psi_; }
    const CyclotomicCtx& zeta_ctx() const { return *zq_; }
    const FieldCtx& field() const { return *field_; }
    Rational c() const { return c_; }

    // [x, y] = <x, y J_2n> on V, exact residue.
    unsigned bracket(const std::uint8_t* x, const std::uint8_t* y) const;
    unsigned bracket_codes(std::size_t xc, std::size_t yc) const;

    // Exponent forms (value = zeta_q^exponent); the cheap bulk interface.
    unsigned chi_exp(std::size_t p1, std::size_t p2) const;
    unsigned gamma_exp(const FqMatrix& u, std::size_t p) const;

    Cyclotomic chi(std::size_t p1, std::size_t p2) const {
        return zeta_pow(*zq_, chi_exp(p1, p2));
    }
    Cyclotomic gamma(const FqMatrix& u, std::size_t p) const;

    // Admissible gamma parameters: the tilde-fixed elements of A.
    const std::vector<FqMatrix>& sym_elements() const { return sym_.elements; }
    const std::vector<FqMatrix>& sym_invertible() const { return sym_.invertible; }

private:
    GroupCtx ctx_;
    std::shared_ptr<const FieldCtx> field_;
    std::shared_ptr<const CyclotomicCtx> zq_;
    ModuleSpace module_;
    AdditiveCharacter psi_;
    EpsSymmetricSet sym_;
    Rational c_;
    FqMatrix j2n_;
};

struct ConditionCheck {
    std::string name;
    bool pass = true;
    std::uint64_t checked = 0;
    std::string detail;
};
struct DataConditionReport {
    std::vector<ConditionCheck> conditions;
    bool all_pass() const {
        for (const auto& c : conditions)
            if (!c.pass) return false;
        return !conditions.empty();
    }
};
/**
 * Checks the seven datum conditions. Everything is pointwise-exhaustive over
 * M except condition 1(a), where the t-census is exhaustive but the (p, p')
 * quantifier is discharged through exact bilinear-form equality (the two
 * sides are psi of bilinear forms in (p, p'), so equality of the form
 * matrices over F_q is equivalent to pointwise equality); a pointwise sweep
 * over all of M x M is still run for sampled t.
 */
DataConditionReport verify_data_conditions(const WeilDatum& d,
                                           std::size_t pointwise_t_samples = 8,
                                           std::uint64_t seed = 1);

// Exact Gauss sum over M of gamma(u, .); must be rational.
Rational gauss_sum(const WeilDatum& d, const FqMatrix& u);

struct QuadraticFormReport {
    bool nondegenerate = false;
    bool split = false;
    unsigned witt_index = 0;
    std::uint64_t zero_count = 0;   // exhaustive count (small dimensions)
};
// Q_u(x, y) = [xu, y] on F_q^(4n), classified through its polar form.
QuadraticFormReport classify_quadratic_form(const WeilDatum& d, const FqMatrix& u);

} // namespace oweil
