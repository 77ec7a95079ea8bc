#include "doctest.h"

#include <random>

#include "oweil/fqmatrix.hpp"

using namespace oweil;

namespace {

FqMatrix make2(unsigned q, unsigned a, unsigned b, unsigned c, unsigned d) {
    FqMatrix m(q, 2, 2);
    m.set(0, 0, a);
    m.set(0, 1, b);
    m.set(1, 0, c);
    m.set(1, 1, d);
    return m;
}

FqMatrix random_square(unsigned q, unsigned n, std::mt19937_64& rng) {
    std::uniform_int_distribution<unsigned> e(0, q - 1);
    FqMatrix m(q, n, n);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) m.set(i, j, e(rng));
    return m;
}

} // namespace

TEST_CASE("transpose and tilde on 2x2") {
    CHECK(involution_apply(Involution::Transpose, make2(5, 1, 2, 3, 4)) ==
          make2(5, 1, 3, 2, 4));
    // [[a,b],[c,d]]~ = [[d,-b],[-c,a]].
    CHECK(involution_apply(Involution::Tilde, make2(5, 1, 2, 3, 4)) ==
          make2(5, 4, 3, 2, 1));
    CHECK(involution_apply(Involution::Tilde, FqMatrix::identity(5, 2)) ==
          FqMatrix::identity(5, 2));
}

TEST_CASE("involutions are involutive anti-automorphisms") {
    std::mt19937_64 rng(19);
    for (unsigned q : {5u, 7u}) {
        for (int t = 0; t < 60; ++t) {
            const FqMatrix a = random_square(q, 2, rng), b = random_square(q, 2, rng);
            for (Involution kind : {Involution::Transpose, Involution::Tilde}) {
                CHECK(involution_apply(kind, involution_apply(kind, a)) == a);
                CHECK(involution_apply(kind, a * b) ==
                      involution_apply(kind, b) * involution_apply(kind, a));
            }
        }
    }
    // Exhaustive involutivity at n = 1, q = 5 (all 625 matrices).
    for (unsigned code = 0; code < 625; ++code) {
        FqMatrix a(5, 2, 2);
        unsigned rem = code;
        for (unsigned e = 0; e < 4; ++e) {
            a.set(e / 2, e % 2, rem % 5);
            rem /= 5;
        }
        CHECK(involution_apply(Involution::Tilde, involution_apply(Involution::Tilde, a)) == a);
    }
}

TEST_CASE("eps-symmetric element sets at m = 2") {
    // a~ = a: the scalar matrices; 5 elements, 4 invertible.
    const auto tilde_fixed = eps_symmetric_elements(-1, Involution::Tilde, 2, 5);
    CHECK(tilde_fixed.basis.size() == 1);
    CHECK(tilde_fixed.elements.size() == 5);
    CHECK(tilde_fixed.invertible.size() == 4);
    CHECK(tilde_fixed.has_invertible);
    for (const auto& a : tilde_fixed.elements) {
        CHECK(a.at(0, 1) == 0);
        CHECK(a.at(1, 0) == 0);
        CHECK(a.at(0, 0) == a.at(1, 1));
    }

    // a^t = a: symmetric, dimension 3.
    CHECK(eps_symmetric_elements(-1, Involution::Transpose, 2, 5).basis.size() == 3);
    // a^t = -a: antisymmetric, dimension 1.
    CHECK(eps_symmetric_elements(+1, Involution::Transpose, 2, 5).basis.size() == 1);

    // Complementary dimensions: dim fixed + dim anti = (2n)^2.
    const auto anti_tilde = eps_symmetric_elements(+1, Involution::Tilde, 2, 5);
    CHECK(tilde_fixed.basis.size() + anti_tilde.basis.size() == 4);
}

TEST_CASE("standard matrices") {
    const StandardMatrices sm = standard_matrices(1, 5);
    CHECK(*sm.j2n.inverse() == -sm.j2n);
    CHECK(sm.j2n.transpose() == -sm.j2n);
    // F is symmetric and nondegenerate.
    CHECK(sm.f.transpose() == sm.f);
    CHECK(sm.f.rank() == 4);
    // Constructor verifies P J+ P* = J- U; reaching here means it held.
    CHECK(sm.p.rows() == 4);
}

TEST_CASE("bilinear form compatibility of the involutions") {
    // <xa, y> = <x, y a^t> and [xa, y] = [x, y a~] with [x,y] = <x, yJ>.
    std::mt19937_64 rng(23);
    const unsigned q = 5;
    const FqMatrix j = j_matrix(q, 1);
    auto dot = [&](const FqMatrix& x, const FqMatrix& y) {
        unsigned acc = 0;
        for (unsigned i = 0; i < 2; ++i) acc += x.at(0, i) * y.at(0, i);
        return acc % q;
    };
    auto bracket = [&](const FqMatrix& x, const FqMatrix& y) { return dot(x, y * j); };
    std::uniform_int_distribution<unsigned> e(0, q - 1);
    for (int t = 0; t < 200; ++t) {
        FqMatrix x(q, 1, 2), y(q, 1, 2);
        for (unsigned i = 0; i < 2; ++i) {
            x.set(0, i, e(rng));
            y.set(0, i, e(rng));
        }
        const FqMatrix a = random_square(q, 2, rng);
        CHECK(dot(x * a, y) == dot(x, y * involution_apply(Involution::Transpose, a)));
        CHECK(bracket(x * a, y) == bracket(x, y * involution_apply(Involution::Tilde, a)));
    }
}
