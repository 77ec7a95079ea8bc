#include "doctest.h"

#include <complex>
#include <random>

#include "oweil/cyclotomic.hpp"

using namespace oweil;

namespace {

Cyclotomic random_value(const CyclotomicCtx& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 9);
    Cyclotomic v(&ctx);
    for (unsigned i = 0; i < ctx.degree(); ++i)
        v.coefficient(i) = rational_from(num(rng), den(rng));
    return v;
}

} // namespace

TEST_CASE("zeta powers reduce canonically") {
    CyclotomicCtx c5(5);
    CHECK(zeta_pow(c5, 0) == Cyclotomic(&c5, 1));
    CHECK(zeta_pow(c5, 5) == Cyclotomic(&c5, 1));

    // zeta^4 = -1 - zeta - zeta^2 - zeta^3 on the power basis.
    Cyclotomic z4 = zeta_pow(c5, 4);
    for (unsigned i = 0; i < 4; ++i) CHECK(z4.coefficients()[i] == -1);

    CHECK(zeta_pow(c5, -1) == z4);
    CHECK(zeta_pow(c5, 7) == zeta_pow(c5, 2));
}

TEST_CASE("conjugation is an involution fixing real combinations") {
    CyclotomicCtx c5(5);
    CHECK(conjugate(Cyclotomic(&c5, 1)) == Cyclotomic(&c5, 1));
    CHECK(conjugate(zeta_pow(c5, 1)) == zeta_pow(c5, 4));

    const Cyclotomic real_sum = zeta_pow(c5, 1) + zeta_pow(c5, 4);
    CHECK(conjugate(real_sum) == real_sum);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const Cyclotomic v = random_value(c5, rng);
        CHECK(conjugate(conjugate(v)) == v);
    }
    // Conjugation is multiplicative.
    CyclotomicCtx c12(12);
    std::mt19937_64 rng2(8);
    for (int i = 0; i < 25; ++i) {
        const Cyclotomic a = random_value(c12, rng2), b = random_value(c12, rng2);
        CHECK(conjugate(a * b) == conjugate(a) * conjugate(b));
    }
}

TEST_CASE("root-of-unity orthogonality sums") {
    for (unsigned n : {5u, 7u, 12u}) {
        CyclotomicCtx ctx(n);
        for (unsigned k = 0; k <= n; ++k) {
            Cyclotomic sum(&ctx);
            for (unsigned j = 0; j < n; ++j) sum += zeta_pow(ctx, static_cast<long>(j * k));
            if (k % n == 0)
                CHECK(sum == Cyclotomic(&ctx, Rational(static_cast<long>(n))));
            else
                CHECK(sum.is_zero());
        }
    }
}

TEST_CASE("ring axioms on sampled triples") {
    CyclotomicCtx ctx(15);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
        const Cyclotomic a = random_value(ctx, rng), b = random_value(ctx, rng),
                         c = random_value(ctx, rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("complex embedding") {
    CyclotomicCtx c4(4);
    const auto i = zeta_pow(c4, 1).to_complex();
    CHECK(std::abs(i.real()) < 1e-12);
    CHECK(std::abs(i.imag() - 1.0) < 1e-12);

    CyclotomicCtx c5(5);
    Cyclotomic sum(&c5, 1);
    for (int k = 1; k < 5; ++k) sum += zeta_pow(c5, k);
    CHECK(std::abs(sum.to_complex()) < 1e-12);

    for (long k = 0; k < 5; ++k)
        CHECK(std::abs(std::abs(zeta_pow(c5, k).to_complex()) - 1.0) < 1e-12);

    // Homomorphism within float tolerance.
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        const Cyclotomic a = random_value(c5, rng), b = random_value(c5, rng);
        const auto lhs = (a * b).to_complex();
        const auto rhs = a.to_complex() * b.to_complex();
        CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("integer fast path matches rational arithmetic") {
    CyclotomicCtx ctx(60);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> coeff(-50, 50);
    for (int t = 0; t < 25; ++t) {
        std::vector<std::int64_t> a(ctx.degree()), b(ctx.degree());
        Cyclotomic ca(&ctx), cb(&ctx);
        for (unsigned i = 0; i < ctx.degree(); ++i) {
            a[i] = coeff(rng);
            b[i] = coeff(rng);
            ca.coefficient(i) = Rational(a[i]);
            cb.coefficient(i) = Rational(b[i]);
        }
        guard_product_bound(ctx, 50, 50, static_cast<std::int64_t>(ctx.degree()));
        std::vector<std::int64_t> acc(ctx.order(), 0);
        redundant_mul_acc(ctx, a, b, acc);
        const auto folded = fold_redundant(ctx, acc);
        CHECK(from_integer_coeffs(ctx, folded, 1) == ca * cb);
    }
    CHECK_THROWS_AS(guard_product_bound(ctx, 1'000'000'000, 1'000'000'000, 1'000'000),
                    std::overflow_error);
}
