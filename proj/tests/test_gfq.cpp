#include "doctest.h"

#include <memory>

#include "oweil/gfq.hpp"

using namespace oweil;

TEST_CASE("field context validates q") {
    CHECK_NOTHROW(FieldCtx(5));
    CHECK_NOTHROW(FieldCtx(7));
    CHECK_THROWS_AS(FieldCtx(4), std::invalid_argument);   // even
    CHECK_THROWS_AS(FieldCtx(3), std::invalid_argument);   // too small
    CHECK_THROWS_AS(FieldCtx(9), std::invalid_argument);   // composite
    CHECK_THROWS_AS(FieldCtx(15), std::invalid_argument);
}

TEST_CASE("field inverses are exact") {
    FieldCtx f(7);
    for (unsigned a = 1; a < 7; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
    CHECK_THROWS_AS(f.inv(0), std::domain_error);
    CHECK(f.reduce(-3) == 4);
    CHECK(f.sub(2, 5) == 4);
}

TEST_CASE("additive characters") {
    auto f = std::make_shared<FieldCtx>(5);
    auto z5 = std::make_shared<CyclotomicCtx>(5);
    AdditiveCharacter psi(f, 1, z5);

    CHECK(psi(0) == Cyclotomic(z5.get(), 1));
    CHECK(psi(2) == zeta_pow(*z5, 2));

    // Full character sum vanishes.
    Cyclotomic sum(z5.get());
    for (unsigned x = 0; x < 5; ++x) sum += psi(x);
    CHECK(sum.is_zero());

    CHECK_THROWS_AS(AdditiveCharacter(f, 0, z5), std::invalid_argument);
}

TEST_CASE("bi-additivity, non-triviality, twist law over all of F_5") {
    auto f = std::make_shared<FieldCtx>(5);
    auto z5 = std::make_shared<CyclotomicCtx>(5);
    for (unsigned lambda = 1; lambda < 5; ++lambda) {
        AdditiveCharacter psi(f, lambda, z5);
        bool nontrivial = false;
        for (unsigned x = 0; x < 5; ++x) {
            if (psi.exponent(x) != 0) nontrivial = true;
            for (unsigned y = 0; y < 5; ++y)
                CHECK(psi(x + y) == psi(x) * psi(y));
        }
        CHECK(nontrivial);
    }
    // psi_l2(x) = psi_l1(l2 * l1^-1 * x).
    for (unsigned l1 = 1; l1 < 5; ++l1)
        for (unsigned l2 = 1; l2 < 5; ++l2) {
            AdditiveCharacter p1(f, l1, z5), p2(f, l2, z5);
            const unsigned ratio = f->mul(l2, f->inv(l1));
            for (unsigned x = 0; x < 5; ++x)
                CHECK(p2.exponent(x) == p1.exponent(static_cast<long>(f->mul(ratio, x))));
        }
}
