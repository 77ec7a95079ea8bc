#include "doctest.h"

#include "oweil/dualpair.hpp"

using namespace oweil;

namespace {

struct Fixture {
    GroupCtx ctx{5, 1, Involution::Tilde, -1};
    WeilDatum d{ctx, 1};
    TokenTables tables = build_token_tables(ctx);
    DualPairCtx dp{d};
};

const Fixture& fx() {
    static Fixture f;
    return f;
}

} // namespace

TEST_CASE("symplectic form basics") {
    const Fixture& f = fx();
    // <<x, y>> on embedded module points: alternating on the nose.
    for (std::size_t p = 0; p < 625; p += 11)
        CHECK(f.dp.symplectic_form(f.dp.embed_point(p), f.dp.embed_point(p)) == 0);
    // Point embedding round-trips.
    for (std::size_t p = 0; p < 625; p += 7)
        CHECK(f.dp.point_of(f.dp.embed_point(p)) == p);
}

TEST_CASE("schrodinger operators match rho on each generator family") {
    const Fixture& f = fx();
    const WeilRep rep(f.d, f.tables);

    const GeneratorToken hi = GeneratorToken::h(FqMatrix::identity(5, 2));
    CHECK(f.dp.schrodinger_operator(hi).is_identity());

    // Diagonal of omega(u_s) agrees with gamma through the Cayley transform.
    const GeneratorToken us = GeneratorToken::u(FqMatrix::scalar(5, 2, 2));
    CHECK(f.dp.schrodinger_operator(us) == rep.generator_operator(us));

    // A couple of h tokens and w.
    const GeneratorToken ht = GeneratorToken::h(f.tables.h_params[17]);
    CHECK(f.dp.schrodinger_operator(ht) == rep.generator_operator(ht));
    CHECK(f.dp.schrodinger_operator(GeneratorToken::w()) ==
          rep.generator_operator(GeneratorToken::w()));
}

TEST_CASE("sl2 permutation action composes and rejects non-members") {
    const Fixture& f = fx();
    FqMatrix g(5, 2, 2), h(5, 2, 2);
    g.set(0, 0, 1);
    g.set(0, 1, 1);
    g.set(1, 1, 1);          // [[1,1],[0,1]]
    h.set(0, 0, 1);
    h.set(1, 0, 2);
    h.set(1, 1, 1);          // [[1,0],[2,1]]
    CHECK(f.dp.sl2_operator(g).multiply(f.dp.sl2_operator(h)) ==
          f.dp.sl2_operator(g * h));
    CHECK(f.dp.sl2_operator(FqMatrix::identity(5, 2)).is_identity());

    FqMatrix bad = FqMatrix::scalar(5, 2, 2);   // det 4 != 1
    CHECK_THROWS_AS(f.dp.sl2_operator(bad), std::domain_error);
}

TEST_CASE("full model comparison at q=5") {
    const Fixture& f = fx();
    const GroupTable table = enumerate_group(f.ctx, f.tables);
    const UnitaryGroup u = unitary_group(f.d);
    const DualPairReport rep = compare_models(f.d, f.tables, u, table, 400, 13);
    CHECK(rep.form_alternating);
    CHECK(rep.form_skew);
    CHECK(rep.form_nondegenerate);
    CHECK(rep.g_invariant);
    CHECK(rep.h_match);
    CHECK(rep.h_checked == 480);
    CHECK(rep.u_match);
    CHECK(rep.u_checked == 5);
    CHECK(rep.w_match);
    CHECK(rep.kernel_identity);
    CHECK(rep.sl2_matches_sigma);
    CHECK(rep.sl2_checked == 120);
    CHECK(rep.all_pass());
}
