#include "oweil/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace oweil {

namespace {

// Exact division of integer polynomials, used to build Phi_N from x^N - 1.
std::vector<std::int64_t> poly_divide_exact(std::vector<std::int64_t> num,
                                            const std::vector<std::int64_t>& den) {
    const std::size_t dn = num.size() - 1, dd = den.size() - 1;
    std::vector<std::int64_t> quot(dn - dd + 1, 0);
    for (std::size_t k = dn - dd + 1; k-- > 0;) {
        std::int64_t lead = num[k + dd];
        if (lead == 0) continue;
        if (lead % den[dd] != 0)
            throw std::logic_error("cyclotomic polynomial division not exact");
        std::int64_t q = lead / den[dd];
        quot[k] = q;
        for (std::size_t i = 0; i <= dd; ++i) num[k + i] -= q * den[i];
    }
    for (std::int64_t c : num)
        if (c != 0) throw std::logic_error("cyclotomic polynomial division remainder");
    return quot;
}

std::vector<std::int64_t> cyclotomic_poly(unsigned n,
                                          std::vector<std::vector<std::int64_t>>& memo) {
    if (!memo[n].empty()) return memo[n];
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    std::vector<std::int64_t> p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (unsigned d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        p = poly_divide_exact(std::move(p), cyclotomic_poly(d, memo));
    }
    memo[n] = p;
    return p;
}

unsigned euler_phi(unsigned n) {
    unsigned result = n;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

} // namespace

CyclotomicCtx::CyclotomicCtx(unsigned order) : order_(order) {
    if (order == 0) throw std::invalid_argument("cyclotomic order must be positive");
    std::vector<std::vector<std::int64_t>> memo(order + 1);
    phi_ = cyclotomic_poly(order, memo);
    degree_ = euler_phi(order);
    if (phi_.size() != degree_ + 1)
        throw std::logic_error("cyclotomic polynomial degree mismatch");

    // rows_[k] = x^k mod Phi_N; for k < degree this is a basis vector, above
    // it we use x^(k+1) = x * x^k followed by one reduction step.
    rows_.assign(order_, std::vector<std::int64_t>(degree_, 0));
    for (unsigned k = 0; k < std::min(order_, degree_); ++k) rows_[k][k] = 1;
    for (unsigned k = degree_; k < order_; ++k) {
        std::vector<std::int64_t> shifted(degree_ + 1, 0);
        for (unsigned i = 0; i < degree_; ++i) shifted[i + 1] = rows_[k - 1][i];
        std::int64_t top = shifted[degree_];
        for (unsigned i = 0; i < degree_; ++i)
            rows_[k][i] = shifted[i] - top * phi_[i];
    }
    row_bound_ = 1;
    for (const auto& row : rows_)
        for (std::int64_t c : row)
            row_bound_ = std::max<std::int64_t>(row_bound_, c < 0 ? -c : c);
}

bool Cyclotomic::is_zero() const {
    for (const auto& c : coeff_)
        if (c != 0) return false;
    return true;
}

bool Cyclotomic::is_rational() const {
    for (std::size_t i = 1; i < coeff_.size(); ++i)
        if (coeff_[i] != 0) return false;
    return true;
}

Rational Cyclotomic::rational_value() const {
    if (!is_rational()) throw std::domain_error("value is not rational");
    return coeff_.empty() ? Rational(0) : coeff_[0];
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
    Cyclotomic r(ctx_);
    for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] = coeff_[i] + o.coeff_[i];
    return r;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const {
    Cyclotomic r(ctx_);
    for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] = coeff_[i] - o.coeff_[i];
    return r;
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic r(ctx_);
    for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] = -coeff_[i];
    return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
    return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
    return *this;
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
    const unsigned n = ctx_->order(), d = ctx_->degree();
    // Convolve in the redundant mod-(x^N - 1) basis, then reduce.
    std::vector<Rational> acc(n);
    for (unsigned i = 0; i < d; ++i) {
        if (coeff_[i] == 0) continue;
        for (unsigned j = 0; j < d; ++j) {
            if (o.coeff_[j] == 0) continue;
            acc[(i + j) % n] += coeff_[i] * o.coeff_[j];
        }
    }
    Cyclotomic r(ctx_);
    for (unsigned i = 0; i < d; ++i) r.coeff_[i] = acc[i];
    for (unsigned k = d; k < n; ++k) {
        if (acc[k] == 0) continue;
        const auto& row = ctx_->power_row(k);
        for (unsigned i = 0; i < d; ++i)
            if (row[i] != 0) r.coeff_[i] += acc[k] * row[i];
    }
    return r;
}

Cyclotomic Cyclotomic::operator*(const Rational& s) const {
    Cyclotomic r(ctx_);
    for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] = coeff_[i] * s;
    return r;
}

std::complex<double> Cyclotomic::to_complex() const {
    std::complex<double> z(0.0, 0.0);
    const double theta = 2.0 * std::numbers::pi / ctx_->order();
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
        if (coeff_[i] == 0) continue;
        z += to_double(coeff_[i]) *
             std::complex<double>(std::cos(theta * i), std::sin(theta * i));
    }
    return z;
}

std::string Cyclotomic::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
        if (i) os << ",";
        os << coeff_[i].get_str();
    }
    os << "]";
    return os.str();
}

Cyclotomic zeta_pow(const CyclotomicCtx& ctx, long k) {
    long n = static_cast<long>(ctx.order());
    long kk = ((k % n) + n) % n;
    Cyclotomic r(&ctx);
    const auto& row = ctx.power_row(static_cast<unsigned>(kk));
    for (unsigned i = 0; i < ctx.degree(); ++i) r.coeff_[i] = Rational(row[i]);
    return r;
}

Cyclotomic conjugate(const Cyclotomic& a) {
    const CyclotomicCtx& ctx = *a.ctx();
    const unsigned n = ctx.order(), d = ctx.degree();
    Cyclotomic r(&ctx);
    for (unsigned i = 0; i < d; ++i) {
        if (a.coeff_[i] == 0) continue;
        const auto& row = ctx.power_row((n - i) % n);
        for (unsigned j = 0; j < d; ++j)
            if (row[j] != 0) r.coeff_[j] += a.coeff_[i] * row[j];
    }
    return r;
}

Cyclotomic inverse(const Cyclotomic& a) {
    if (a.is_zero()) throw std::domain_error("inverse of zero");
    const CyclotomicCtx& ctx = *a.ctx();
    const unsigned d = ctx.degree();
    // Solve (multiplication-by-a) x = 1 by Gaussian elimination over Q.
    std::vector<Rational> m(d * (d + 1));
    for (unsigned j = 0; j < d; ++j) {
        const Cyclotomic col = a * zeta_pow(ctx, j);
        for (unsigned i = 0; i < d; ++i) m[i * (d + 1) + j] = col.coefficients()[i];
    }
    m[0 * (d + 1) + d] = 1;
    for (unsigned col = 0, rank = 0; col < d && rank < d; ++col) {
        unsigned pr = d;
        for (unsigned r = rank; r < d; ++r)
            if (m[r * (d + 1) + col] != 0) { pr = r; break; }
        if (pr == d) throw std::logic_error("multiplication matrix is singular");
        if (pr != rank)
            for (unsigned j = 0; j <= d; ++j) std::swap(m[pr * (d + 1) + j], m[rank * (d + 1) + j]);
        const Rational piv = m[rank * (d + 1) + col];
        for (unsigned j = 0; j <= d; ++j) m[rank * (d + 1) + j] /= piv;
        for (unsigned r = 0; r < d; ++r) {
            if (r == rank) continue;
            const Rational f = m[r * (d + 1) + col];
            if (f == 0) continue;
            for (unsigned j = 0; j <= d; ++j) m[r * (d + 1) + j] -= f * m[rank * (d + 1) + j];
        }
        ++rank;
    }
    Cyclotomic x(&ctx);
    for (unsigned i = 0; i < d; ++i) x.coefficient(i) = m[i * (d + 1) + d];
    return x;
}

void redundant_mul_acc(const CyclotomicCtx& ctx,
                       const std::vector<std::int64_t>& a,
                       const std::vector<std::int64_t>& b,
                       std::vector<std::int64_t>& acc) {
    const unsigned n = ctx.order();
    const std::size_t da = a.size(), db = b.size();
    for (std::size_t i = 0; i < da; ++i) {
        const std::int64_t ai = a[i];
        if (ai == 0) continue;
        for (std::size_t j = 0; j < db; ++j) {
            if (b[j] == 0) continue;
            acc[(i + j) % n] += ai * b[j];
        }
    }
}

std::vector<std::int64_t> fold_redundant(const CyclotomicCtx& ctx,
                                         const std::vector<std::int64_t>& acc) {
    const unsigned n = ctx.order(), d = ctx.degree();
    std::vector<std::int64_t> out(acc.begin(), acc.begin() + d);
    for (unsigned k = d; k < n; ++k) {
        if (acc[k] == 0) continue;
        const auto& row = ctx.power_row(k);
        for (unsigned i = 0; i < d; ++i) out[i] += acc[k] * row[i];
    }
    return out;
}

void guard_product_bound(const CyclotomicCtx& ctx, std::int64_t max_a,
                         std::int64_t max_b, std::int64_t terms) {
    const __int128 bound = static_cast<__int128>(max_a) * max_b * terms *
                           (static_cast<__int128>(ctx.row_bound()) * ctx.degree() + 1);
    if (bound > (static_cast<__int128>(1) << 62))
        throw std::overflow_error("integer cyclotomic kernel would overflow");
}

Cyclotomic from_integer_coeffs(const CyclotomicCtx& ctx,
                               const std::vector<std::int64_t>& canonical,
                               const Rational& scale) {
    Cyclotomic r(&ctx);
    for (unsigned i = 0; i < ctx.degree() && i < canonical.size(); ++i)
        r.coefficient(i) = Rational(static_cast<long>(canonical[i])) * scale;
    return r;
}

} // namespace oweil
