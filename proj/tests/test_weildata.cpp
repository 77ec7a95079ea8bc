#include "doctest.h"

#include "oweil/weildata.hpp"

using namespace oweil;

namespace {

const GroupCtx kCtx{5, 1, Involution::Tilde, -1};

const WeilDatum& datum5() {
    static WeilDatum d(kCtx, 1);
    return d;
}

} // namespace

TEST_CASE("module point enumeration is the documented order") {
    const ModuleSpace& mod = datum5().module();
    CHECK(mod.size() == 625);
    CHECK(mod.vcount() == 25);
    // Code 0 is the zero vector; the last code is (4,4).
    CHECK(mod.vector_of(0)[0] == 0);
    CHECK(mod.vector_of(0)[1] == 0);
    CHECK(mod.vector_of(24)[0] == 4);
    CHECK(mod.vector_of(24)[1] == 4);
    // First coordinate is most significant: code 5 = (1, 0).
    CHECK(mod.vector_of(5)[0] == 1);
    CHECK(mod.vector_of(5)[1] == 0);
    for (std::size_t c = 0; c < mod.vcount(); ++c)
        CHECK(mod.code_of(mod.vector_of(c)) == c);
}

TEST_CASE("chi and gamma values") {
    const WeilDatum& d = datum5();
    const ModuleSpace& mod = d.module();
    const std::size_t e1 = 10, zero = 0;   // e1 = (0,1,0) wait: code 5 is e1
    (void)e1;
    (void)zero;

    const std::size_t e1c = 5, e2c = 1;    // e1 = (1,0), e2 = (0,1) as V-codes

    // chi(anything, 0) = 1.
    for (std::size_t p = 0; p < 625; p += 37) CHECK(d.chi_exp(p, 0) == 0);

    // chi((e1,0),(0,e2)) = psi([e1,e2]) = psi(-1) = zeta^4.
    const std::size_t p1 = mod.index(e1c, 0), p2 = mod.index(0, e2c);
    CHECK(d.chi_exp(p1, p2) == 4);
    CHECK(d.chi(p1, p2) == zeta_pow(d.zeta_ctx(), 4));

    // gamma(0, p) = 1; gamma(I, (e1,e2)) = psi(-1) = zeta^4.
    const FqMatrix zmat(5, 2, 2), eye = FqMatrix::identity(5, 2);
    for (std::size_t p = 0; p < 625; p += 41) CHECK(d.gamma_exp(zmat, p) == 0);
    CHECK(d.gamma_exp(eye, mod.index(e1c, e2c)) == 4);

    // Symmetry chi(p2, p1) = chi(p1, p2) at eps = -1, sampled.
    for (std::size_t a = 0; a < 625; a += 13)
        for (std::size_t b = 0; b < 625; b += 17) CHECK(d.chi_exp(a, b) == d.chi_exp(b, a));

    FqMatrix not_fixed(5, 2, 2);
    not_fixed.set(0, 1, 1);   // [[0,1],[0,0]] is not tilde-fixed
    CHECK_THROWS_AS(d.gamma(not_fixed, 0), std::domain_error);
}

TEST_CASE("datum conditions all pass at q=5") {
    const DataConditionReport rep = verify_data_conditions(datum5(), 4, 43);
    CHECK(rep.all_pass());
    REQUIRE(rep.conditions.size() == 7);
    for (const auto& c : rep.conditions) {
        INFO(c.name);
        CHECK(c.pass);
    }
    // Census sizes for the pointwise-exhaustive conditions.
    CHECK(rep.conditions[1].checked == 625u * 625u);
    CHECK(rep.conditions[4].checked == 480u * 5u * 625u);
    CHECK(rep.conditions[6].checked == 4);
}

TEST_CASE("gauss sums equal q^2n") {
    const WeilDatum& d = datum5();
    for (unsigned a = 1; a < 5; ++a)
        CHECK(gauss_sum(d, FqMatrix::scalar(5, 2, a)) == 25);

    CHECK_THROWS_AS(gauss_sum(d, FqMatrix(5, 2, 2)), std::domain_error);

    const GroupCtx c7{7, 1, Involution::Tilde, -1};
    const WeilDatum d7(c7, 1);
    CHECK(gauss_sum(d7, FqMatrix::identity(7, 2)) == 49);
}

TEST_CASE("quadratic forms are split with the expected zero count") {
    const WeilDatum& d = datum5();
    std::uint64_t first = 0;
    for (unsigned a = 1; a < 5; ++a) {
        const QuadraticFormReport rep = classify_quadratic_form(d, FqMatrix::scalar(5, 2, a));
        CHECK(rep.nondegenerate);
        CHECK(rep.split);
        CHECK(rep.witt_index == 2);
        // Split rank-4 forms have q^3 + q^2 - q zeros.
        CHECK(rep.zero_count == 145);
        if (a == 1)
            first = rep.zero_count;
        else
            CHECK(rep.zero_count == first);   // equivalence of the forms
    }
}

TEST_CASE("datum rejects the wrong group flavor") {
    const GroupCtx wrong{5, 1, Involution::Transpose, +1};
    CHECK_THROWS_AS(WeilDatum(wrong, 1), std::invalid_argument);
}
