#include "doctest.h"

#include <numeric>

#include "oweil/unidecomp.hpp"

using namespace oweil;

namespace {

struct Fixture {
    GroupCtx ctx{5, 1, Involution::Tilde, -1};
    WeilDatum d{ctx, 1};
    TokenTables tables = build_token_tables(ctx);
    UnitaryGroup u = unitary_group(d);
    ClassData classes = conjugacy_classes(u.structure);
    std::shared_ptr<CyclotomicCtx> zn =
        std::make_shared<CyclotomicCtx>(std::lcm(classes.exponent, 5u));
    CharacterTable table = character_table(u.structure, classes, zn);
    MultiplicityData mult = multiplicities(d, u, classes, table);
};

const Fixture& fx() {
    static Fixture f;
    return f;
}

} // namespace

TEST_CASE("unitary group is the 120 scalar-block determinant-1 maps") {
    const UnitaryGroup& u = fx().u;
    CHECK(u.order() == 120);
    CHECK(u.candidates_checked == 625);
    CHECK(u.commutant_is_scalar);
    CHECK(u.dets_are_one);
    CHECK(u.cond2_sampled_ok);
    CHECK(u.elements[u.identity] == UnitaryElement{1, 0, 0, 1});
    // -identity is a member with every nonzero point moved.
    const auto minus = u.find(UnitaryElement{4, 0, 0, 4});
    REQUIRE(minus.has_value());
    CHECK(u.fix_count[*minus] == 1);
    CHECK(u.fix_count[u.identity] == 625);
}

TEST_CASE("sigma is an action by unitary permutation operators") {
    const Fixture& f = fx();
    CHECK(sigma_operator(f.d, f.u, f.u.identity).is_identity());
    // sigma_b sigma_b' = sigma_bb' on sampled pairs.
    for (std::size_t a = 0; a < 20; ++a) {
        const std::size_t b1 = (a * 37 + 11) % f.u.order(), b2 = (a * 53 + 29) % f.u.order();
        CHECK(sigma_operator(f.d, f.u, b1).multiply(sigma_operator(f.d, f.u, b2)) ==
              sigma_operator(f.d, f.u, f.u.structure.mul(b1, b2)));
    }
}

TEST_CASE("conjugacy classes of the unitary group") {
    const ClassData& cd = fx().classes;
    CHECK(cd.count() == 9);
    CHECK(cd.exponent == 60);
    CHECK(cd.sizes[cd.class_of[fx().u.identity]] == 1);
    std::uint64_t total = 0;
    for (auto s : cd.sizes) {
        total += s;
        CHECK(120 % s == 0);   // orbit-stabilizer
    }
    CHECK(total == 120);
}

TEST_CASE("character table via the Dixon method") {
    const CharacterTable& t = fx().table;
    CHECK(t.ell == 61);
    CHECK(t.dims == std::vector<long>({1, 2, 2, 3, 3, 4, 4, 5, 6}));
    CHECK(t.row_orthogonal);
    CHECK(t.col_orthogonal);
    CHECK(t.dims_consistent);
    // The trivial character row is all ones.
    for (std::size_t c = 0; c < fx().classes.count(); ++c)
        CHECK(t.values[0][c] == Cyclotomic(t.ctx.get(), 1));
}

TEST_CASE("multiplicities and the dimension identity") {
    const Fixture& f = fx();
    CHECK(f.mult.fix_formula_ok);
    CHECK(f.mult.integral);
    CHECK(f.mult.dimension_identity);
    long total = 0;
    for (std::size_t pi = 0; pi < f.table.count(); ++pi)
        total += f.mult.n[pi] * f.table.dims[pi];
    CHECK(total == 625);
    // Trivial-character multiplicity equals the orbit count (Burnside).
    const OrbitData orbits = module_orbits(f.u, f.d.module().size());
    CHECK(orbits.count() == 11);
    CHECK(f.mult.n[0] == 11);
}

TEST_CASE("projector algebra is exact") {
    const Fixture& f = fx();
    const CommutationReport cr = check_sigma_commutation(f.d, f.u, f.tables);
    CHECK(cr.all_commute);
    CHECK(cr.pairs_checked == 120u * f.tables.token_count());

    const IsotypicReport iso =
        verify_isotypic_projectors(f.d, f.u, f.classes, f.table, f.mult, cr);
    CHECK(iso.idempotent);
    CHECK(iso.mutually_orthogonal);
    CHECK(iso.complete);
    CHECK(iso.ranks_match);
    CHECK(iso.commutes_with_rho);
    CHECK(iso.direct_spot_ok);
    long rank_total = 0;
    for (long r : iso.ranks) rank_total += r;
    CHECK(rank_total == 625);
}

TEST_CASE("projector entries vanish across orbits") {
    const Fixture& f = fx();
    const OrbitData orbits = module_orbits(f.u, f.d.module().size());
    // Points 1 and 5 lie in different orbits here; entry must be zero.
    std::size_t p1 = 1, p2 = 0;
    bool found = false;
    for (std::size_t cand = 1; cand < 625 && !found; ++cand)
        if (orbits.orbit_of[cand] != orbits.orbit_of[p1]) {
            p2 = cand;
            found = true;
        }
    REQUIRE(found);
    CHECK(projector_entry(f.u, f.classes, f.table, 3, p1, p2).is_zero());
}

TEST_CASE("hom spaces have the right dimensions and close under the action") {
    const Fixture& f = fx();
    const auto reports = verify_hom_spaces(f.d, f.u, f.classes, f.table, f.mult, 2, 5);
    REQUIRE(reports.size() == 9);
    for (const auto& h : reports) {
        INFO("pi = ", h.pi);
        CHECK(h.model_traces_match);
        CHECK(h.model_multiplicative);
        CHECK(h.dimension_matches);
        CHECK(h.closed_under_w);
        CHECK(h.closed_under_hu);
        CHECK(h.closure_checked >= 2);
    }
}
