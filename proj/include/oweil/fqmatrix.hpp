#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "oweil/gfq.hpp"

namespace oweil {

/// Dense matrix over F_q with canonical residue entries 0..q-1.
class FqMatrix {
public:
    FqMatrix() : q_(0), rows_(0), cols_(0) {}
    FqMatrix(unsigned q, unsigned rows, unsigned cols)
        : q_(q), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static FqMatrix identity(unsigned q, unsigned n);
    static FqMatrix scalar(unsigned q, unsigned n, unsigned value);

    unsigned q() const { return q_; }
    unsigned rows() const { return rows_; }
    unsigned cols() const { return cols_; }

    std::uint8_t at(unsigned r, unsigned c) const { return data_[r * cols_ + c]; }
    void set(unsigned r, unsigned c, unsigned v) {
        data_[r * cols_ + c] = static_cast<std::uint8_t>(v % q_);
    }
    const std::vector<std::uint8_t>& data() const { return data_; }

    FqMatrix operator+(const FqMatrix& o) const;
    FqMatrix operator-(const FqMatrix& o) const;
    FqMatrix operator*(const FqMatrix& o) const;
    FqMatrix operator-() const;
    FqMatrix scaled(unsigned factor) const;
    FqMatrix transpose() const;
    bool operator==(const FqMatrix& o) const {
        return q_ == o.q_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const FqMatrix& o) const { return !(*this == o); }

    bool is_zero() const;
    bool is_identity() const;
    unsigned determinant() const;                    // square only
    std::optional<FqMatrix> inverse() const;         // nullopt when singular
    unsigned rank() const;

    // 2x2 block access for matrices over A = M_m(F_q) viewed as M_2(A).
    FqMatrix block(unsigned br, unsigned bc, unsigned m) const;
    static FqMatrix from_blocks(const FqMatrix& a, const FqMatrix& b,
                                const FqMatrix& c, const FqMatrix& d);

    // Packed key for hashing; requires rows*cols <= 16 and q <= 15.
    std::uint64_t pack_key() const;

private:
    unsigned q_, rows_, cols_;
    std::vector<std::uint8_t> data_;
};

enum class Involution { Transpose, Tilde };

// a^diamond = transpose; a^~ = J_2n a^diamond J_2n^(-1) (square, even size).
FqMatrix involution_apply(Involution kind, const FqMatrix& a);

// J_2n = [[0, I_n], [-I_n, 0]].
FqMatrix j_matrix(unsigned q, unsigned half);

/// Basis (and small-case enumeration) of {a in M_m(F_q) : a^* = -eps a}.
struct EpsSymmetricSet {
    std::vector<FqMatrix> basis;
    std::vector<FqMatrix> elements;          // full enumeration when feasible
    std::vector<FqMatrix> invertible;        // invertible subset of elements
    bool has_invertible = false;             // A^x intersect A^s nonempty
};
EpsSymmetricSet eps_symmetric_elements(int eps, Involution kind, unsigned m,
                                       unsigned q, std::size_t enum_limit = 1u << 20);

/// The structural matrices shared by the group, module and dual-pair layers.
struct StandardMatrices {
    FqMatrix j2n;      // [[0, I_n], [-I_n, 0]],        2n x 2n
    FqMatrix jeps;     // [[0, 1], [eps, 0]] over A,    4n x 4n
    FqMatrix u;        // diag(J_2n, J_2n),             4n x 4n
    FqMatrix p;        // [[0, J_2n], [1, 0]],          4n x 4n
    FqMatrix f;        // [[0, J_2n], [-J_2n, 0]],      4n x 4n
};
// Verifies P J_+ P^* = J_- U before returning.
StandardMatrices standard_matrices(unsigned n, unsigned q);

// The involution on M_2(A) induced by * on A: [[a,b],[c,d]] -> [[a*,c*],[b*,d*]].
FqMatrix block_star(const FqMatrix& t, Involution inner);

} // namespace oweil
