#include "oweil/fqmatrix.hpp"

#include <algorithm>

namespace oweil {

FqMatrix FqMatrix::identity(unsigned q, unsigned n) {
    FqMatrix m(q, n, n);
    for (unsigned i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

FqMatrix FqMatrix::scalar(unsigned q, unsigned n, unsigned value) {
    FqMatrix m(q, n, n);
    for (unsigned i = 0; i < n; ++i) m.set(i, i, value);
    return m;
}

FqMatrix FqMatrix::operator+(const FqMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || q_ != o.q_)
        throw std::invalid_argument("matrix shape mismatch");
    FqMatrix r(q_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        r.data_[i] = static_cast<std::uint8_t>((data_[i] + o.data_[i]) % q_);
    return r;
}

FqMatrix FqMatrix::operator-(const FqMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || q_ != o.q_)
        throw std::invalid_argument("matrix shape mismatch");
    FqMatrix r(q_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        r.data_[i] = static_cast<std::uint8_t>((data_[i] + q_ - o.data_[i]) % q_);
    return r;
}

FqMatrix FqMatrix::operator*(const FqMatrix& o) const {
    if (cols_ != o.rows_ || q_ != o.q_)
        throw std::invalid_argument("matrix shape mismatch");
    FqMatrix r(q_, rows_, o.cols_);
    for (unsigned i = 0; i < rows_; ++i) {
        for (unsigned k = 0; k < cols_; ++k) {
            const unsigned a = at(i, k);
            if (a == 0) continue;
            for (unsigned j = 0; j < o.cols_; ++j) {
                unsigned v = r.at(i, j) + a * o.at(k, j);
                r.data_[i * o.cols_ + j] = static_cast<std::uint8_t>(v % q_);
            }
        }
    }
    return r;
}

FqMatrix FqMatrix::operator-() const {
    FqMatrix r(q_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        r.data_[i] = static_cast<std::uint8_t>(data_[i] == 0 ? 0 : q_ - data_[i]);
    return r;
}

FqMatrix FqMatrix::scaled(unsigned factor) const {
    FqMatrix r(q_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        r.data_[i] = static_cast<std::uint8_t>(data_[i] * (factor % q_) % q_);
    return r;
}

FqMatrix FqMatrix::transpose() const {
    FqMatrix r(q_, cols_, rows_);
    for (unsigned i = 0; i < rows_; ++i)
        for (unsigned j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
    return r;
}

bool FqMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v == 0; });
}

bool FqMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (unsigned i = 0; i < rows_; ++i)
        for (unsigned j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1u : 0u)) return false;
    return true;
}

namespace {

// Gauss elimination; returns (rank, det) and optionally the inverse.
struct EchelonResult {
    unsigned rank;
    unsigned det;
    std::optional<FqMatrix> inverse;
};

EchelonResult echelon(const FqMatrix& m, bool want_inverse) {
    const unsigned q = m.q(), n = m.rows(), c = m.cols();
    std::vector<unsigned> a(n * c);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < c; ++j) a[i * c + j] = m.at(i, j);

    FieldCtx f(q);
    FqMatrix inv = FqMatrix::identity(q, n);
    unsigned det = 1, rank = 0;
    for (unsigned col = 0; col < c && rank < n; ++col) {
        unsigned pivot = n;
        for (unsigned r = rank; r < n; ++r)
            if (a[r * c + col] != 0) { pivot = r; break; }
        if (pivot == n) { det = 0; continue; }
        if (pivot != rank) {
            for (unsigned j = 0; j < c; ++j) std::swap(a[pivot * c + j], a[rank * c + j]);
            if (want_inverse)
                for (unsigned j = 0; j < n; ++j) {
                    unsigned t = inv.at(pivot, j);
                    inv.set(pivot, j, inv.at(rank, j));
                    inv.set(rank, j, t);
                }
            det = f.neg(det);
        }
        const unsigned p = a[rank * c + col];
        det = f.mul(det, p);
        const unsigned pinv = f.inv(p);
        for (unsigned j = 0; j < c; ++j) a[rank * c + j] = f.mul(a[rank * c + j], pinv);
        if (want_inverse)
            for (unsigned j = 0; j < n; ++j) inv.set(rank, j, f.mul(inv.at(rank, j), pinv));
        for (unsigned r = 0; r < n; ++r) {
            if (r == rank) continue;
            const unsigned factor = a[r * c + col];
            if (factor == 0) continue;
            for (unsigned j = 0; j < c; ++j)
                a[r * c + j] = f.sub(a[r * c + j], f.mul(factor, a[rank * c + j]));
            if (want_inverse)
                for (unsigned j = 0; j < n; ++j)
                    inv.set(r, j, f.sub(inv.at(r, j), f.mul(factor, inv.at(rank, j))));
        }
        ++rank;
    }
    if (rank < n) det = 0;
    EchelonResult res{rank, det, std::nullopt};
    if (want_inverse && det != 0) res.inverse = inv;
    return res;
}

} // namespace

unsigned FqMatrix::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
    return echelon(*this, false).det;
}

std::optional<FqMatrix> FqMatrix::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
    return echelon(*this, true).inverse;
}

unsigned FqMatrix::rank() const { return echelon(*this, false).rank; }

FqMatrix FqMatrix::block(unsigned br, unsigned bc, unsigned m) const {
    FqMatrix r(q_, m, m);
    for (unsigned i = 0; i < m; ++i)
        for (unsigned j = 0; j < m; ++j) r.set(i, j, at(br * m + i, bc * m + j));
    return r;
}

FqMatrix FqMatrix::from_blocks(const FqMatrix& a, const FqMatrix& b,
                               const FqMatrix& c, const FqMatrix& d) {
    const unsigned m = a.rows(), q = a.q();
    FqMatrix r(q, 2 * m, 2 * m);
    for (unsigned i = 0; i < m; ++i)
        for (unsigned j = 0; j < m; ++j) {
            r.set(i, j, a.at(i, j));
            r.set(i, m + j, b.at(i, j));
            r.set(m + i, j, c.at(i, j));
            r.set(m + i, m + j, d.at(i, j));
        }
    return r;
}

std::uint64_t FqMatrix::pack_key() const {
    if (data_.size() > 16 || q_ > 15)
        throw std::domain_error("matrix too large for packed key");
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < data_.size(); ++i)
        key |= static_cast<std::uint64_t>(data_[i]) << (4 * i);
    return key;
}

FqMatrix j_matrix(unsigned q, unsigned half) {
    FqMatrix j(q, 2 * half, 2 * half);
    for (unsigned i = 0; i < half; ++i) {
        j.set(i, half + i, 1);
        j.set(half + i, i, q - 1);
    }
    return j;
}

FqMatrix involution_apply(Involution kind, const FqMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("involution needs a square matrix");
    if (kind == Involution::Transpose) return a.transpose();
    if (a.rows() % 2 != 0) throw std::invalid_argument("tilde involution needs even size");
    const FqMatrix j = j_matrix(a.q(), a.rows() / 2);
    const FqMatrix jinv = *j.inverse();
    return j * a.transpose() * jinv;
}

EpsSymmetricSet eps_symmetric_elements(int eps, Involution kind, unsigned m,
                                       unsigned q, std::size_t enum_limit) {
    if (eps != 1 && eps != -1) throw std::invalid_argument("eps must be +1 or -1");
    FieldCtx f(q);
    // Solve a^* = -eps a entrywise: the map a -> a^* + eps a is F_q-linear.
    const unsigned dim = m * m;
    std::vector<unsigned> sys(dim * dim, 0);
    for (unsigned k = 0; k < dim; ++k) {
        FqMatrix unit(q, m, m);
        unit.set(k / m, k % m, 1);
        FqMatrix image = involution_apply(kind, unit);
        if (eps == 1)
            image = image + unit;
        else
            image = image - unit;
        for (unsigned r = 0; r < dim; ++r) sys[r * dim + k] = image.at(r / m, r % m);
    }
    // Nullspace of sys via Gauss elimination.
    std::vector<int> pivot_of_col(dim, -1);
    unsigned rank = 0;
    for (unsigned col = 0; col < dim && rank < dim; ++col) {
        unsigned pr = dim;
        for (unsigned r = rank; r < dim; ++r)
            if (sys[r * dim + col] != 0) { pr = r; break; }
        if (pr == dim) continue;
        for (unsigned j = 0; j < dim; ++j) std::swap(sys[pr * dim + j], sys[rank * dim + j]);
        const unsigned pinv = f.inv(sys[rank * dim + col]);
        for (unsigned j = 0; j < dim; ++j) sys[rank * dim + j] = f.mul(sys[rank * dim + j], pinv);
        for (unsigned r = 0; r < dim; ++r) {
            if (r == rank || sys[r * dim + col] == 0) continue;
            const unsigned factor = sys[r * dim + col];
            for (unsigned j = 0; j < dim; ++j)
                sys[r * dim + j] = f.sub(sys[r * dim + j], f.mul(factor, sys[rank * dim + j]));
        }
        pivot_of_col[col] = static_cast<int>(rank);
        ++rank;
    }

    EpsSymmetricSet out;
    for (unsigned col = 0; col < dim; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        FqMatrix b(q, m, m);
        b.set(col / m, col % m, 1);
        for (unsigned c2 = 0; c2 < dim; ++c2) {
            if (pivot_of_col[c2] < 0) continue;
            const unsigned v = sys[pivot_of_col[c2] * dim + col];
            if (v != 0) b.set(c2 / m, c2 % m, f.neg(v));
        }
        out.basis.push_back(b);
    }

    // Full enumeration when the space is small enough.
    std::size_t count = 1;
    bool feasible = true;
    for (std::size_t i = 0; i < out.basis.size(); ++i) {
        count *= q;
        if (count > enum_limit) { feasible = false; break; }
    }
    if (feasible) {
        const std::size_t k = out.basis.size();
        std::vector<unsigned> coeff(k, 0);
        for (std::size_t idx = 0; idx < count; ++idx) {
            FqMatrix a(q, m, m);
            std::size_t rem = idx;
            for (std::size_t i = 0; i < k; ++i) {
                const unsigned ci = static_cast<unsigned>(rem % q);
                rem /= q;
                if (ci != 0) a = a + out.basis[i].scaled(ci);
            }
            out.elements.push_back(a);
            if (a.determinant() != 0) out.invertible.push_back(a);
        }
        out.has_invertible = !out.invertible.empty();
    } else {
        // Sample for the invertibility flag; scalar candidates come first.
        for (unsigned v = 1; v < q && !out.has_invertible; ++v) {
            FqMatrix cand(q, m, m);
            bool any = false;
            for (const auto& b : out.basis) {
                FqMatrix s = b.scaled(v);
                if (!s.is_zero()) { cand = cand + s; any = true; }
            }
            if (any && cand.determinant() != 0) out.has_invertible = true;
        }
        for (const auto& b : out.basis)
            if (b.determinant() != 0) { out.has_invertible = true; break; }
    }
    return out;
}

FqMatrix block_star(const FqMatrix& t, Involution inner) {
    if (t.rows() != t.cols() || t.rows() % 2 != 0)
        throw std::invalid_argument("block involution needs an even square matrix");
    const unsigned m = t.rows() / 2;
    const FqMatrix a = t.block(0, 0, m), b = t.block(0, 1, m);
    const FqMatrix c = t.block(1, 0, m), d = t.block(1, 1, m);
    return FqMatrix::from_blocks(involution_apply(inner, a), involution_apply(inner, c),
                                 involution_apply(inner, b), involution_apply(inner, d));
}

StandardMatrices standard_matrices(unsigned n, unsigned q) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    StandardMatrices sm;
    sm.j2n = j_matrix(q, n);
    const unsigned m = 2 * n;
    const FqMatrix zero(q, m, m), one = FqMatrix::identity(q, m);
    sm.jeps = FqMatrix::from_blocks(zero, one, one, zero);   // eps = +1 layout by default
    sm.u = FqMatrix::from_blocks(sm.j2n, zero, zero, sm.j2n);
    sm.p = FqMatrix::from_blocks(zero, sm.j2n, one, zero);
    sm.f = FqMatrix::from_blocks(zero, sm.j2n, -sm.j2n, zero);

    const FqMatrix jplus = FqMatrix::from_blocks(zero, one, one, zero);
    const FqMatrix jminus = FqMatrix::from_blocks(zero, one, -one, zero);
    const FqMatrix lhs = sm.p * jplus * block_star(sm.p, Involution::Transpose);
    if (lhs != jminus * sm.u)
        throw std::logic_error("structural identity P J+ P* = J- U failed");
    return sm;
}

} // namespace oweil
