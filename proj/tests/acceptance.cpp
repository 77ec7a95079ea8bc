// Acceptance suite: the full battery of exact checks at desk scale, one
// PASS/FAIL line per criterion. Every tolerance is zero; all comparisons are
// exact arithmetic.

#include <cstdio>
#include <numeric>
#include <string>

#include "oweil/pipeline.hpp"

using namespace oweil;

namespace {

int failures = 0;

void line(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

struct Workspace {
    unsigned q;
    GroupCtx ctx;
    WeilDatum datum;
    TokenTables tables;

    explicit Workspace(unsigned q_)
        : q(q_), ctx{q_, 1, Involution::Tilde, -1}, datum(ctx, 1),
          tables(build_token_tables(ctx)) {}
};

} // namespace

int main() {
    Workspace w5(5);
    Workspace w7(7);

    // 1. Presentation relations, exhaustive at (n=1, q=5).
    {
        const PresentationReport rep = verify_presentation(w5.ctx, w5.tables);
        bool pass = rep.all_pass() && rep.exhaustive;
        // Census: 480 t values, 5 s values, 4 invertible tilde-fixed t.
        pass = pass && rep.relations[3].checked == 480u * 5u &&
               rep.relations[4].checked == 480u && rep.relations[5].checked == 4u &&
               rep.relations[1].checked == 25u;
        RunConfig cfg;
        const CommandResult cli = cmd_verify_presentation(cfg);
        pass = pass && cli.exit_code == 0;
        line(1, "five defining relations hold exactly (480 t / 5 s / 4 rel-5 t)", pass,
             "exit " + std::to_string(cli.exit_code));
    }

    // 2. Group order: BFS closure vs 28800 (q=5) and 225792 (q=7).
    GroupTable table5 = enumerate_group(w5.ctx, w5.tables);
    {
        GroupTable table7 = enumerate_group(w7.ctx, w7.tables);
        const bool pass = table5.order() == 28800 && table7.order() == 225792;
        line(2, "BFS closure orders 28800 (q=5) and 225792 (q=7)", pass,
             "closure orders are " + std::to_string(table5.order()) + " and " +
                 std::to_string(table7.order()) +
                 ": every Bruhat generator has determinant 1, so the closure is "
                 "the index-2 determinant-1 subgroup of the membership set");
    }

    // 3. Duality: conjugation by P is a bijective homomorphism between the
    // full membership groups, with P J+ P* = J- U exact.
    {
        const DualityReport rep = verify_duality(1, 5, 41, 1000);
        const bool pass = rep.all_pass() && rep.source_order == 28800 &&
                          rep.target_order == 28800;
        line(3, "duality transpose(+1) <-> tilde(-1) at q=5", pass,
             "membership orders " + std::to_string(rep.source_order) + " / " +
                 std::to_string(rep.target_order));
    }

    // 4. Weil datum conditions and Gauss sums.
    {
        const DataConditionReport rep5 = verify_data_conditions(w5.datum, 8, 1);
        const DataConditionReport rep7 = verify_data_conditions(w7.datum, 4, 1);
        bool gauss = true;
        for (const auto& u : w5.datum.sym_invertible())
            gauss = gauss && gauss_sum(w5.datum, u) == 25;
        for (const auto& u : w7.datum.sym_invertible())
            gauss = gauss && gauss_sum(w7.datum, u) == 49;
        const bool pass = rep5.all_pass() && rep7.all_pass() && gauss;
        line(4, "datum conditions 1(a-c), 2(a-c), 3; Gauss sums q^2n", pass,
             "q=5: 4 sums = 25, q=7: 6 sums = 49");
    }

    // 5. Quadratic forms: nondegenerate, split, zero count 145, all equal.
    {
        bool pass = true;
        std::uint64_t count = 0;
        bool first = true;
        for (const auto& u : w5.datum.sym_invertible()) {
            const QuadraticFormReport qr = classify_quadratic_form(w5.datum, u);
            pass = pass && qr.nondegenerate && qr.split && qr.zero_count == 145;
            if (first) {
                count = qr.zero_count;
                first = false;
            } else {
                pass = pass && qr.zero_count == count;
            }
        }
        line(5, "Q_u nondegenerate split; zero count 145; all u equivalent", pass, "");
    }

    // 6. Operator relations, pair consistency, unitarity, w^2 reflection.
    {
        WeilRep rep(w5.datum, w5.tables, false);
        const OperatorRelationReport rel = verify_operator_relations(rep);
        const PairCheckReport pairs = check_pair_consistency(rep, table5, 1000, 7);
        const UnitarityReport unit = check_unitarity(rep, table5, 100, 11);
        const bool wsq = check_w_square_reflection(rep);
        const bool pass =
            rel.all_pass() && pairs.failures == 0 && unit.failures == 0 && wsq;
        line(6, "operator relations; 1000 pair products; unitarity; w^2 = h_-1", pass,
             std::to_string(pairs.pairs) + " pairs, " + std::to_string(unit.checked) +
                 " unitarity checks");
    }

    // 7. psi-independence: the intertwiner for (lambda1, lambda2) = (1, 2).
    {
        const WeilDatum d2(w5.ctx, 2);
        const IntertwinerReport rep = psi_equivalence(w5.datum, d2, w5.tables);
        const bool pass = rep.permutation && rep.intertwines &&
                          rep.tokens_checked == w5.tables.token_count();
        line(7, "Psi intertwines rho_1 and rho_2 on all generators", pass,
             std::to_string(rep.tokens_checked) + " tokens");
    }

    // Shared decomposition data at q=5.
    const UnitaryGroup u5 = unitary_group(w5.datum, 1);
    const ClassData cls5 = conjugacy_classes(u5.structure);
    auto zn5 = std::make_shared<CyclotomicCtx>(std::lcm(cls5.exponent, 5u));
    const CharacterTable tab5 = character_table(u5.structure, cls5, zn5);
    const MultiplicityData mult5 = multiplicities(w5.datum, u5, cls5, tab5);
    const CommutationReport comm5 = check_sigma_commutation(w5.datum, u5, w5.tables);

    // 8. Unitary group: 120 scalar-block determinant-1 maps; sigma commutes.
    {
        const bool pass = u5.order() == 120 && u5.commutant_is_scalar &&
                          u5.dets_are_one && u5.candidates_checked == 625 &&
                          comm5.all_commute;
        line(8, "unitary group has exactly 120 elements; sigma commutes with rho", pass,
             std::to_string(comm5.pairs_checked) + " commutation pairs");
    }

    // 9. Character table: 9 classes, dims {1,2,2,3,3,4,4,5,6}, orthogonality.
    {
        const std::vector<long> expect{1, 2, 2, 3, 3, 4, 4, 5, 6};
        const bool pass = cls5.count() == 9 && tab5.dims == expect &&
                          tab5.row_orthogonal && tab5.col_orthogonal &&
                          tab5.dims_consistent;
        line(9, "9 classes; dims {1,2,2,3,3,4,4,5,6}; exact orthogonality", pass,
             "Dixon prime " + std::to_string(tab5.ell));
    }

    // 10. Decomposition: projector algebra and hom spaces at q=5 and q=7.
    {
        const IsotypicReport iso5 =
            verify_isotypic_projectors(w5.datum, u5, cls5, tab5, mult5, comm5, 1);
        const auto hom5 = verify_hom_spaces(w5.datum, u5, cls5, tab5, mult5, 1000, 1);
        long total5 = 0;
        bool hom5_ok = true;
        for (std::size_t pi = 0; pi < tab5.count(); ++pi) {
            total5 += mult5.n[pi] * tab5.dims[pi];
            hom5_ok = hom5_ok && hom5[pi].dimension_matches && hom5[pi].closed_under_w &&
                      hom5[pi].closed_under_hu && hom5[pi].model_traces_match;
        }

        const UnitaryGroup u7 = unitary_group(w7.datum, 1);
        const ClassData cls7 = conjugacy_classes(u7.structure);
        auto zn7 = std::make_shared<CyclotomicCtx>(std::lcm(cls7.exponent, 7u));
        const CharacterTable tab7 = character_table(u7.structure, cls7, zn7);
        const MultiplicityData mult7 = multiplicities(w7.datum, u7, cls7, tab7);
        const CommutationReport comm7 = check_sigma_commutation(w7.datum, u7, w7.tables);
        const IsotypicReport iso7 =
            verify_isotypic_projectors(w7.datum, u7, cls7, tab7, mult7, comm7, 1);
        const auto hom7 = verify_hom_spaces(w7.datum, u7, cls7, tab7, mult7, 1, 1);
        long total7 = 0;
        bool hom7_ok = true;
        for (std::size_t pi = 0; pi < tab7.count(); ++pi) {
            total7 += mult7.n[pi] * tab7.dims[pi];
            hom7_ok = hom7_ok && hom7[pi].dimension_matches && hom7[pi].closed_under_w &&
                      hom7[pi].closed_under_hu && hom7[pi].model_traces_match;
        }

        const bool proj_ok = iso5.idempotent && iso5.mutually_orthogonal &&
                             iso5.complete && iso5.ranks_match && iso5.commutes_with_rho &&
                             iso5.direct_spot_ok && iso7.idempotent &&
                             iso7.mutually_orthogonal && iso7.complete &&
                             iso7.ranks_match && iso7.commutes_with_rho &&
                             iso7.direct_spot_ok;
        const bool pass =
            proj_ok && total5 == 625 && total7 == 2401 && hom5_ok && hom7_ok;
        line(10, "projector algebra exact; sum n*m = 625 / 2401; hom dims = n", pass,
             "q=7 closure sampled one basis vector per irreducible");
    }

    // 11. Dual pair: omega = rho on all generator families at q in {5, 7};
    // the SL2 action matches sigma element by element.
    {
        const DualPairReport r5 = compare_models(w5.datum, w5.tables, u5, table5, 1000, 13);
        GroupTable table7 = enumerate_group(w7.ctx, w7.tables);
        const UnitaryGroup u7 = unitary_group(w7.datum, 1);
        const DualPairReport r7 = compare_models(w7.datum, w7.tables, u7, table7, 200, 13);
        const bool pass = r5.all_pass() && r7.all_pass() && r5.sl2_checked == 120;
        line(11, "omega(h)=rho(h), omega(u)=rho(u), omega(w)=rho(w); SL2 = sigma", pass,
             "q=5: " + std::to_string(r5.h_checked) + " h / " +
                 std::to_string(r5.sl2_checked) + " sl2; q=7: " +
                 std::to_string(r7.h_checked) + " h / " + std::to_string(r7.sl2_checked) +
                 " sl2");
    }

    // 12. Determinism: byte-identical reports for identical configs.
    {
        RunConfig cfg;
        cfg.pair_samples = 5;
        cfg.unitary_samples = 2;
        const std::string a1 = render_report(cmd_verify_presentation(cfg), "json");
        const std::string a2 = render_report(cmd_verify_presentation(cfg), "json");
        const std::string b1 = render_report(cmd_build_rep(cfg), "json");
        const std::string b2 = render_report(cmd_build_rep(cfg), "json");
        const bool pass = a1 == a2 && b1 == b2;
        line(12, "byte-identical JSON reports for identical configs", pass, "");
    }

    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "SUCCESS" : "FAILURE",
                failures);
    // Criterion 2 is expected to fail: the generated subgroup has index 2 in
    // the membership set (see the closure note above); the remaining criteria
    // must all pass.
    return failures;
}
