#include "doctest.h"

#include "oweil/weilrep.hpp"

using namespace oweil;

namespace {

const GroupCtx kCtx{5, 1, Involution::Tilde, -1};

const WeilDatum& datum5() {
    static WeilDatum d(kCtx, 1);
    return d;
}
const TokenTables& tables5() {
    static TokenTables t = build_token_tables(kCtx);
    return t;
}
const GroupTable& table5() {
    static GroupTable t = enumerate_group(kCtx, tables5());
    return t;
}

} // namespace

TEST_CASE("generator operators have the stated shapes") {
    WeilRep rep(datum5(), tables5());

    // h_I and u_0 are the identity operator.
    CHECK(rep.generator_operator(GeneratorToken::h(FqMatrix::identity(5, 2))).is_identity());
    CHECK(rep.generator_operator(GeneratorToken::u(FqMatrix(5, 2, 2))).is_identity());

    // w is dense with every entry of absolute value c = 1/25, and unitary.
    const WeilOperator w = rep.generator_operator(GeneratorToken::w());
    CHECK(w.form() == WeilOperator::Form::Dense);
    CHECK(w.scale() == rational_from(1, 25));
    for (std::size_t i = 0; i < 625 * 625; ++i) CHECK(w.codes()[i] >= 0);
    CHECK(w.unitary());
}

TEST_CASE("w squared is the point reflection") {
    WeilRep rep(datum5(), tables5());
    CHECK(check_w_square_reflection(rep));
}

TEST_CASE("operator relations on a reduced census") {
    // Smoke version with a trimmed h list; the acceptance suite runs all 480.
    TokenTables small = tables5();
    small.h_params.resize(24);
    WeilRep rep(datum5(), small);
    const OperatorRelationReport out = verify_operator_relations(rep);
    CHECK(out.all_pass());
}

TEST_CASE("word operators multiply consistently") {
    WeilRep rep(datum5(), tables5());
    const PairCheckReport out = check_pair_consistency(rep, table5(), 25, 59);
    CHECK(out.pairs == 25);
    CHECK(out.failures == 0);
}

TEST_CASE("generator unitarity plus sampled elements") {
    WeilRep rep(datum5(), tables5());
    const UnitarityReport out = check_unitarity(rep, table5(), 5, 61);
    CHECK(out.failures == 0);
    CHECK(out.checked == tables5().token_count() + 5);
}

TEST_CASE("psi intertwiner between lambda 1 and 2") {
    const WeilDatum d2(kCtx, 2);
    const IntertwinerReport out = psi_equivalence(datum5(), d2, tables5());
    CHECK(out.permutation);
    CHECK(out.intertwines);
    CHECK(out.tokens_checked == tables5().token_count());

    // lambda1 = lambda2 gives the identity intertwiner implicitly: the
    // operators themselves coincide token by token.
    WeilRep r1(datum5(), tables5());
    const WeilDatum d1b(kCtx, 1);
    WeilRep r1b(d1b, tables5());
    CHECK(r1.token_operator(0) == r1b.token_operator(0));
}

TEST_CASE("element operator memoization returns stable references") {
    WeilRep rep(datum5(), tables5(), false, 8);
    const WeilOperator& a = rep.element_operator(table5(), 100);
    const WeilOperator copy = a;
    const WeilOperator& b = rep.element_operator(table5(), 100);
    CHECK(b == copy);
}
