#include "doctest.h"

#include <random>

#include "oweil/kernels.hpp"
#include "oweil/weilop.hpp"

using namespace oweil;

namespace {

// The q x q Fourier kernel F(x, y) = zeta^(xy); F F^dagger = q * Identity.
WeilOperator fourier(unsigned q) {
    std::vector<std::int16_t> codes(q * q);
    for (unsigned x = 0; x < q; ++x)
        for (unsigned y = 0; y < q; ++y)
            codes[x * q + y] = static_cast<std::int16_t>(x * y % q);
    return WeilOperator::dense(q, q, std::move(codes), 1);
}

} // namespace

TEST_CASE("identity and monomial composition") {
    const WeilOperator id = WeilOperator::identity(5, 10);
    CHECK(id.is_identity());
    CHECK(id.multiply(id) == id);

    // A cyclic shift with phases composes as expected.
    std::vector<std::uint32_t> col(10);
    std::vector<std::uint16_t> exp(10);
    for (unsigned i = 0; i < 10; ++i) {
        col[i] = (i + 1) % 10;
        exp[i] = static_cast<std::uint16_t>(i % 5);
    }
    const WeilOperator s = WeilOperator::monomial(5, col, exp, 1);
    CHECK(s.multiply(id) == s);
    CHECK(id.multiply(s) == s);
    CHECK(s.unitary());

    // s * s^dagger = identity entry arithmetic.
    CHECK(s.multiply(s.conjugate_transpose()).is_identity());
}

TEST_CASE("fourier kernel collapses; its two-fold tensor is unitary") {
    for (unsigned q : {5u, 7u}) {
        const WeilOperator f = fourier(q);
        const WeilOperator prod = f.multiply(f.conjugate_transpose());
        CHECK(prod.scale() == Rational(static_cast<long>(q)));
        CHECK_FALSE(f.unitary());

        // F tensor F scaled by 1/q has dim q^2 = (1/scale)^2: exactly unitary.
        const std::size_t dim = q * q;
        std::vector<std::int16_t> codes(dim * dim);
        for (std::size_t x = 0; x < dim; ++x)
            for (std::size_t y = 0; y < dim; ++y)
                codes[x * dim + y] = static_cast<std::int16_t>(
                    ((x / q) * (y / q) + (x % q) * (y % q)) % q);
        const WeilOperator g =
            WeilOperator::dense(q, dim, std::move(codes), Rational(1, static_cast<long>(q)));
        CHECK(g.unitary());
    }
}

TEST_CASE("dense times monomial equals the promoted product") {
    std::mt19937_64 rng(47);
    const unsigned q = 5, dim = 30;
    std::uniform_int_distribution<unsigned> e(0, q - 1);
    std::uniform_int_distribution<int> zero(0, 3);

    std::vector<std::int16_t> codes(dim * dim);
    for (auto& c : codes) c = zero(rng) == 0 ? -1 : static_cast<std::int16_t>(e(rng));
    const WeilOperator d = WeilOperator::dense(q, dim, codes, rational_from(1, 5));

    std::vector<std::uint32_t> col(dim);
    std::vector<std::uint16_t> exp(dim);
    std::vector<unsigned> perm(dim);
    for (unsigned i = 0; i < dim; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (unsigned i = 0; i < dim; ++i) {
        col[i] = perm[i];
        exp[i] = static_cast<std::uint16_t>(e(rng));
    }
    const WeilOperator m = WeilOperator::monomial(q, col, exp, 2);

    // Promote the monomial to dense codes and compare entrywise.
    std::vector<std::int16_t> mono_dense(dim * dim, -1);
    for (unsigned i = 0; i < dim; ++i)
        mono_dense[i * dim + col[i]] = static_cast<std::int16_t>(exp[i]);
    const CyclotomicCtx ctx(q);
    for (auto* pair : {&m, &d}) (void)pair;

    const WeilOperator md = m.multiply(d);
    const WeilOperator dm = d.multiply(m);
    for (unsigned x = 0; x < dim; ++x)
        for (unsigned z = 0; z < dim; ++z) {
            Cyclotomic acc(&ctx);
            Cyclotomic acc2(&ctx);
            for (unsigned y = 0; y < dim; ++y) {
                acc += m.entry(ctx, x, y) * d.entry(ctx, y, z);
                acc2 += d.entry(ctx, x, y) * m.entry(ctx, y, z);
            }
            CHECK(md.entry(ctx, x, z) == acc);
            CHECK(dm.entry(ctx, x, z) == acc2);
        }
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
    std::mt19937_64 rng(53);
    const unsigned q = 5;
    const std::size_t dim = 64;
    std::uniform_int_distribution<int> code(-1, 2 * 5 - 1);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<std::int16_t> a(dim * dim), b(dim * dim);
        for (auto& c : a) c = static_cast<std::int16_t>(code(rng));
        for (auto& c : b) c = static_cast<std::int16_t>(code(rng));
        const auto s = kernels::dense_mul_serial(q, dim, a.data(), b.data());
        const auto p = kernels::dense_mul_parallel(q, dim, a.data(), b.data());
        CHECK(s.collapsed == p.collapsed);
        CHECK(s.magnitude == p.magnitude);
        CHECK(s.codes == p.codes);
        CHECK(s.fail_x == p.fail_x);
        CHECK(s.fail_z == p.fail_z);
        CHECK(s.fail_counts == p.fail_counts);
    }
    // A collapsing case: Fourier times conjugate transpose.
    const WeilOperator f = fourier(7);
    const WeilOperator ft = f.conjugate_transpose();
    const auto s = kernels::dense_mul_serial(7, 7, f.codes().data(), ft.codes().data());
    const auto p = kernels::dense_mul_parallel(7, 7, f.codes().data(), ft.codes().data());
    CHECK(s.collapsed);
    CHECK(s.magnitude == 7);
    CHECK(s.codes == p.codes);
}

TEST_CASE("collapse failures carry a witness") {
    // Column vector of mixed roots: (1 + zeta) appears and cannot collapse.
    const unsigned q = 5;
    std::vector<std::int16_t> a = {0, 1, -1, 0};   // [[1, z],[0, 1]]
    std::vector<std::int16_t> b = {0, -1, 0, -1};  // [[1, 0],[1, 0]]
    const WeilOperator A = WeilOperator::dense(q, 2, a, 1);
    const WeilOperator B = WeilOperator::dense(q, 2, b, 1);
    CHECK_THROWS_AS(A.multiply(B), CollapseError);
}
