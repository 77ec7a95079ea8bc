#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>

#include "oweil/slstar.hpp"

using namespace oweil;

namespace {

const GroupCtx kCtx{5, 1, Involution::Tilde, -1};

const TokenTables& tables5() {
    static TokenTables t = build_token_tables(kCtx);
    return t;
}

const GroupTable& table5() {
    static GroupTable t = enumerate_group(kCtx, tables5());
    return t;
}

} // namespace

TEST_CASE("membership basics") {
    CHECK(is_member(kCtx, FqMatrix::identity(5, 4)));
    CHECK(is_member(kCtx, kCtx.jeps()));   // w itself

    // u_s with s = I is a member (I is tilde-fixed)...
    const FqMatrix one = FqMatrix::identity(5, 2), zero(5, 2, 2);
    CHECK(is_member(kCtx, FqMatrix::from_blocks(one, one, zero, one)));
    // ...but s = [[0,1],[0,0]] is not tilde-fixed and fails.
    FqMatrix s(5, 2, 2);
    s.set(0, 1, 1);
    CHECK_FALSE(is_member(kCtx, FqMatrix::from_blocks(one, s, zero, one)));
}

TEST_CASE("membership dual test agrees on random matrices") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<unsigned> e(0, 4);
    std::size_t members = 0;
    for (int t = 0; t < 10000; ++t) {
        FqMatrix m(5, 4, 4);
        for (unsigned i = 0; i < 4; ++i)
            for (unsigned j = 0; j < 4; ++j) m.set(i, j, e(rng));
        const MembershipDetail d = membership_tests(kCtx, m);
        CHECK(d.defining == d.identities);
        if (d.defining) ++members;
    }
    CHECK(members < 100);   // members are rare among random matrices
}

TEST_CASE("generators") {
    const FqMatrix one = FqMatrix::identity(5, 2);
    CHECK(generator(kCtx, GeneratorToken::h(one)).mat == FqMatrix::identity(5, 4));

    // w^2 = h_eps with eps = -1.
    const FqMatrix w = token_matrix(kCtx, GeneratorToken::w());
    CHECK(w * w == token_matrix(kCtx, GeneratorToken::h(FqMatrix::scalar(5, 2, 4))));

    // u additivity on scalar parameters.
    for (unsigned a = 0; a < 5; ++a)
        for (unsigned b = 0; b < 5; ++b) {
            const FqMatrix ua = token_matrix(kCtx, GeneratorToken::u(FqMatrix::scalar(5, 2, a)));
            const FqMatrix ub = token_matrix(kCtx, GeneratorToken::u(FqMatrix::scalar(5, 2, b)));
            const FqMatrix uab =
                token_matrix(kCtx, GeneratorToken::u(FqMatrix::scalar(5, 2, (a + b) % 5)));
            CHECK(ua * ub == uab);
        }

    CHECK_THROWS_AS(token_matrix(kCtx, GeneratorToken::h(FqMatrix(5, 2, 2))),
                    std::invalid_argument);
}

TEST_CASE("presentation relations hold at n=1 q=5") {
    const PresentationReport rep = verify_presentation(kCtx, tables5());
    CHECK(rep.exhaustive);
    CHECK(rep.all_pass());
    REQUIRE(rep.relations.size() == 6);
    CHECK(rep.relations[0].checked == 480u * 480u);
    CHECK(rep.relations[1].checked == 25);
    CHECK(rep.relations[3].checked == 480u * 5u);
    CHECK(rep.relations[4].checked == 480);
    CHECK(rep.relations[5].checked == 4);
}

TEST_CASE("BFS closure is the determinant-1 half of the membership set") {
    CHECK(group_order_oracle(1, 5) == 28800);
    CHECK(group_order_oracle(1, 7) == 225792);

    const GroupTable& t = table5();
    // Every generator has determinant 1, so the closure is the determinant-1
    // subgroup: index 2 in the 28800-element membership set.
    CHECK(t.order() == 14400);
    CHECK(t.oracle_order == 28800);
    for (std::size_t i = 0; i < t.order(); i += 97)
        CHECK(t.matrix_of(i).determinant() == 1);
    CHECK(t.word_of(0).empty());   // identity is the root

    // Every element passes membership; words evaluate to their matrices.
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::size_t> pick(0, t.order() - 1);
    for (int i = 0; i < 500; ++i) {
        const std::size_t idx = pick(rng);
        const FqMatrix m = t.matrix_of(idx);
        CHECK(is_member(kCtx, m));
        CHECK(evaluate_word(kCtx, tables5(), t.word_of(idx)) == m);
    }

    // Homomorphism sanity: concatenated words evaluate to products.
    for (int i = 0; i < 200; ++i) {
        const std::size_t a = pick(rng), b = pick(rng);
        auto word = t.word_of(a);
        const auto wb = t.word_of(b);
        word.insert(word.end(), wb.begin(), wb.end());
        CHECK(evaluate_word(kCtx, tables5(), word) == t.matrix_of(a) * t.matrix_of(b));
    }

    // Closure under product and inverse via the index.
    for (int i = 0; i < 100; ++i) {
        const std::size_t a = pick(rng), b = pick(rng);
        CHECK(t.find(t.matrix_of(a) * t.matrix_of(b)).has_value());
        CHECK(t.find(*t.matrix_of(a).inverse()).has_value());
    }

    CHECK_THROWS_AS(enumerate_group(kCtx, tables5(), 1000), BudgetError);
}

TEST_CASE("membership set is closure plus a reflection coset") {
    const FqMatrix refl = determinant_minus_member(kCtx);
    CHECK(is_member(kCtx, refl));
    CHECK(refl.determinant() == 4);   // -1 mod 5
    CHECK_FALSE(table5().find(refl).has_value());

    const MembershipEnumeration full = enumerate_membership_group(kCtx, tables5());
    CHECK(full.closure_is_proper);
    CHECK(full.closure_order == 14400);
    CHECK(full.all_members);
    CHECK(full.coset_disjoint);
    CHECK(full.matches_oracle);
    CHECK(full.elements.size() == 28800);
    // The coset half has determinant -1 throughout (sampled).
    for (std::size_t i = 14400; i < 28800; i += 531)
        CHECK(full.elements[i].determinant() == 4);
}

TEST_CASE("group cache round-trips bit-exactly") {
    const GroupTable& t = table5();
    const std::string path = "group_cache_test.bin";
    save_group_table(path, t);

    const GroupTable loaded = load_group_table(path, kCtx);
    REQUIRE(loaded.order() == t.order());
    CHECK(loaded.mats == t.mats);
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<std::size_t> pick(0, t.order() - 1);
    for (int i = 0; i < 100; ++i) {
        const std::size_t idx = pick(rng);
        CHECK(loaded.word_of(idx) == t.word_of(idx));
    }

    // Saving the loaded table reproduces the file byte for byte.
    const std::string path2 = "group_cache_test2.bin";
    save_group_table(path2, loaded);
    std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);

    // Corruption is detected.
    std::string corrupted = b1;
    corrupted[corrupted.size() / 2] ^= 0x01;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(corrupted.data(), static_cast<std::streamsize>(corrupted.size()));
    out.close();
    CHECK_THROWS_AS(load_group_table(path, kCtx), CacheError);

    // Parameter mismatch is detected.
    const GroupCtx other{7, 1, Involution::Tilde, -1};
    CHECK_THROWS_AS(load_group_table(path2, other), CacheError);

    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("duality between the transpose +1 and tilde -1 groups") {
    const DualityReport rep = verify_duality(1, 5, /*seed=*/41, /*pairs=*/300);
    CHECK(rep.structural);
    CHECK(rep.members_forward);
    CHECK(rep.members_back);
    CHECK(rep.image_matches);
    CHECK(rep.homomorphic);
    CHECK(rep.source_order == 28800);
    CHECK(rep.target_order == 28800);

    // duality_map rejects non-members.
    const GroupCtx source{5, 1, Involution::Transpose, +1};
    FqMatrix bad = FqMatrix::identity(5, 4);
    bad.set(0, 1, 1);
    CHECK_THROWS_AS(duality_map(source, bad), std::domain_error);
}
