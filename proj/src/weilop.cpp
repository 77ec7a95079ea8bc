#include "oweil/weilop.hpp"

#include <algorithm>

namespace oweil {

WeilOperator WeilOperator::identity(unsigned q, std::size_t dim) {
    WeilOperator op;
    op.form_ = Form::Monomial;
    op.q_ = q;
    op.dim_ = dim;
    op.scale_ = 1;
    op.col_.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) op.col_[i] = static_cast<std::uint32_t>(i);
    op.exp_.assign(dim, 0);
    return op;
}

WeilOperator WeilOperator::monomial(unsigned q, std::vector<std::uint32_t> col,
                                    std::vector<std::uint16_t> exp, Rational scale) {
    WeilOperator op;
    op.form_ = Form::Monomial;
    op.q_ = q;
    op.dim_ = col.size();
    op.scale_ = std::move(scale);
    op.col_ = std::move(col);
    op.exp_ = std::move(exp);
    for (auto& e : op.exp_) e = static_cast<std::uint16_t>(e % q);
    return op;
}

WeilOperator WeilOperator::dense(unsigned q, std::size_t dim,
                                 std::vector<std::int16_t> codes, Rational scale) {
    WeilOperator op;
    op.form_ = Form::Dense;
    op.q_ = q;
    op.dim_ = dim;
    op.scale_ = std::move(scale);
    op.codes_ = std::move(codes);
    op.canonicalize();
    return op;
}

void WeilOperator::canonicalize() {
    if (form_ != Form::Dense) return;
    // Fold a uniform sign into the scale and keep the scale positive, so
    // equal operators always have identical representations.
    bool any_pos = false, any_neg = false;
    for (std::int16_t c : codes_) {
        if (c < 0) continue;
        (c >= static_cast<std::int16_t>(q_) ? any_neg : any_pos) = true;
    }
    if (any_neg && !any_pos) {
        for (auto& c : codes_)
            if (c >= 0) c = static_cast<std::int16_t>(c - q_);
        scale_ = -scale_;
        any_neg = false;
        any_pos = true;
    }
    if (scale_ < 0) {
        for (auto& c : codes_) {
            if (c < 0) continue;
            c = static_cast<std::int16_t>(c >= static_cast<std::int16_t>(q_) ? c - q_ : c + q_);
        }
        scale_ = -scale_;
    }
}

bool WeilOperator::is_identity() const {
    if (scale_ != 1) return false;
    if (form_ == Form::Monomial) {
        for (std::size_t i = 0; i < dim_; ++i)
            if (col_[i] != i || exp_[i] != 0) return false;
        return true;
    }
    for (std::size_t x = 0; x < dim_; ++x)
        for (std::size_t y = 0; y < dim_; ++y)
            if (codes_[x * dim_ + y] != (x == y ? 0 : -1)) return false;
    return true;
}

Cyclotomic WeilOperator::entry(const CyclotomicCtx& ctx, std::size_t x, std::size_t y) const {
    if (form_ == Form::Monomial) {
        if (col_[x] != y) return Cyclotomic(&ctx);
        return zeta_pow(ctx, exp_[x]) * scale_;
    }
    const std::int16_t c = codes_[x * dim_ + y];
    if (c < 0) return Cyclotomic(&ctx);
    const Rational s = c >= static_cast<std::int16_t>(q_) ? -scale_ : scale_;
    return zeta_pow(ctx, c % q_) * s;
}

namespace {

inline std::int16_t shift_code(std::int16_t code, unsigned shift, unsigned q) {
    if (code < 0) return code;
    const unsigned s = static_cast<unsigned>(code) / q;
    return static_cast<std::int16_t>(s * q + (static_cast<unsigned>(code) % q + shift) % q);
}

} // namespace

WeilOperator WeilOperator::multiply(const WeilOperator& o, bool parallel) const {
    if (q_ != o.q_ || dim_ != o.dim_) throw std::invalid_argument("operator shape mismatch");

    if (form_ == Form::Monomial && o.form_ == Form::Monomial) {
        std::vector<std::uint32_t> col(dim_);
        std::vector<std::uint16_t> exp(dim_);
        for (std::size_t x = 0; x < dim_; ++x) {
            const std::uint32_t mid = col_[x];
            col[x] = o.col_[mid];
            exp[x] = static_cast<std::uint16_t>((exp_[x] + o.exp_[mid]) % q_);
        }
        return monomial(q_, std::move(col), std::move(exp), scale_ * o.scale_);
    }

    if (form_ == Form::Monomial) {   // monomial * dense: permute and shift rows
        std::vector<std::int16_t> codes(dim_ * dim_);
        for (std::size_t x = 0; x < dim_; ++x) {
            const std::size_t src = col_[x];
            const unsigned shift = exp_[x];
            const std::int16_t* in = o.codes_.data() + src * dim_;
            std::int16_t* out = codes.data() + x * dim_;
            for (std::size_t z = 0; z < dim_; ++z) out[z] = shift_code(in[z], shift, q_);
        }
        return dense(q_, dim_, std::move(codes), scale_ * o.scale_);
    }

    if (o.form_ == Form::Monomial) {  // dense * monomial: permute and shift columns
        std::vector<std::uint32_t> target(dim_);
        for (std::size_t y = 0; y < dim_; ++y) target[o.col_[y]] = static_cast<std::uint32_t>(y);
        std::vector<std::int16_t> codes(dim_ * dim_);
        for (std::size_t x = 0; x < dim_; ++x) {
            const std::int16_t* in = codes_.data() + x * dim_;
            std::int16_t* out = codes.data() + x * dim_;
            for (std::size_t z = 0; z < dim_; ++z) {
                const std::size_t y0 = target[z];
                out[z] = shift_code(in[y0], o.exp_[y0], q_);
            }
        }
        return dense(q_, dim_, std::move(codes), scale_ * o.scale_);
    }

    kernels::DenseProduct prod =
        kernels::dense_mul(q_, dim_, codes_.data(), o.codes_.data(), parallel);
    if (!prod.collapsed) {
        std::string what = "operator product does not collapse to scaled roots at (" +
                           std::to_string(prod.fail_x) + ", " + std::to_string(prod.fail_z) + ")";
        throw CollapseError(prod.fail_x, prod.fail_z, what);
    }
    if (prod.magnitude == 0)
        return dense(q_, dim_, std::move(prod.codes), Rational(0));
    return dense(q_, dim_, std::move(prod.codes),
                 scale_ * o.scale_ * Rational(static_cast<long>(prod.magnitude)));
}

WeilOperator WeilOperator::conjugate_transpose() const {
    if (form_ == Form::Monomial) {
        // (K^dagger)(y, x) = conj(K(x, y)): rows swap to columns, exponents negate.
        std::vector<std::uint32_t> col(dim_);
        std::vector<std::uint16_t> exp(dim_);
        for (std::size_t x = 0; x < dim_; ++x) {
            col[col_[x]] = static_cast<std::uint32_t>(x);
            exp[col_[x]] = static_cast<std::uint16_t>((q_ - exp_[x]) % q_);
        }
        return monomial(q_, std::move(col), std::move(exp), scale_);
    }
    std::vector<std::int16_t> codes(dim_ * dim_);
    for (std::size_t x = 0; x < dim_; ++x)
        for (std::size_t y = 0; y < dim_; ++y) {
            const std::int16_t c = codes_[x * dim_ + y];
            if (c < 0) {
                codes[y * dim_ + x] = -1;
            } else {
                const unsigned s = static_cast<unsigned>(c) / q_;
                codes[y * dim_ + x] =
                    static_cast<std::int16_t>(s * q_ + (q_ - static_cast<unsigned>(c) % q_) % q_);
            }
        }
    return dense(q_, dim_, std::move(codes), scale_);
}

bool WeilOperator::operator==(const WeilOperator& o) const {
    if (q_ != o.q_ || dim_ != o.dim_) return false;
    if (is_zero() && o.is_zero()) return true;
    if (form_ == o.form_) {
        if (scale_ != o.scale_) return false;
        if (form_ == Form::Monomial) return col_ == o.col_ && exp_ == o.exp_;
        return codes_ == o.codes_;
    }
    const WeilOperator& mono = form_ == Form::Monomial ? *this : o;
    const WeilOperator& den = form_ == Form::Monomial ? o : *this;
    if (mono.scale_ != den.scale_) return false;
    for (std::size_t x = 0; x < dim_; ++x)
        for (std::size_t y = 0; y < dim_; ++y) {
            const std::int16_t c = den.codes_[x * dim_ + y];
            if (y == mono.col_[x]) {
                if (c != static_cast<std::int16_t>(mono.exp_[x])) return false;
            } else if (c >= 0) {
                return false;
            }
        }
    return true;
}

bool WeilOperator::unitary(bool parallel) const {
    try {
        return multiply(conjugate_transpose(), parallel).is_identity();
    } catch (const CollapseError&) {
        return false;
    }
}

} // namespace oweil
