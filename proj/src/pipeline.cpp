#include "oweil/pipeline.hpp"

#include <complex>
#include <filesystem>
#include <numeric>
#include <random>
#include <sstream>

namespace oweil {

namespace {

Json config_json(const RunConfig& cfg) {
    Json j;
    j["q"] = cfg.q;
    j["n"] = cfg.n;
    j["lambda"] = cfg.lambda;
    j["backend"] = cfg.backend;
    j["seed"] = cfg.seed;
    j["budget"] = cfg.budget;
    return j;
}

Json relation_json(const std::vector<RelationCheck>& relations) {
    Json arr = Json::array();
    for (const auto& r : relations) {
        Json j;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["checked"] = r.checked;
        if (!r.failure.empty()) j["failure"] = r.failure;
        arr.push_back(std::move(j));
    }
    return arr;
}

GroupCtx group_ctx(const RunConfig& cfg) {
    return GroupCtx{cfg.q, cfg.n, Involution::Tilde, -1};
}

std::string cache_path(const RunConfig& cfg, const GroupCtx& ctx) {
    return cfg.cache_dir + "/group_q" + std::to_string(ctx.q) + "_n" +
           std::to_string(ctx.n) + (ctx.inv == Involution::Tilde ? "_tilde" : "_transpose") +
           (ctx.eps == 1 ? "_plus" : "_minus") + ".owgt";
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

} // namespace

void validate_config(const RunConfig& cfg) {
    if (cfg.q < 5 || cfg.q % 2 == 0) throw UsageError("q must be an odd prime greater than 3");
    for (unsigned p = 3; p * p <= cfg.q; p += 2)
        if (cfg.q % p == 0) throw UsageError("q must be prime");
    if (cfg.n < 1) throw UsageError("n must be at least 1");
    if (cfg.lambda % cfg.q == 0) throw UsageError("lambda must be nonzero mod q");
    if (cfg.backend != "exact" && cfg.backend != "float")
        throw UsageError("backend must be exact or float");
    if (cfg.format != "json" && cfg.format != "text")
        throw UsageError("format must be json or text");
}

GroupTable load_or_enumerate(const GroupCtx& ctx, const TokenTables& tables,
                             const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) {
        const std::string path = cache_path(cfg, ctx);
        if (std::filesystem::exists(path)) return load_group_table(path, ctx);
        GroupTable table = enumerate_group(ctx, tables, cfg.budget);
        std::filesystem::create_directories(cfg.cache_dir);
        save_group_table(path, table);
        return table;
    }
    return enumerate_group(ctx, tables, cfg.budget);
}

CommandResult cmd_verify_presentation(const RunConfig& cfg) {
    validate_config(cfg);
    CommandResult out;
    const GroupCtx ctx = group_ctx(cfg);
    const TokenTables tables = build_token_tables(ctx);
    const PresentationReport rep = verify_presentation(ctx, tables);

    out.report["command"] = "verify-presentation";
    out.report["config"] = config_json(cfg);
    out.report["exhaustive"] = rep.exhaustive;
    out.report["relations"] = relation_json(rep.relations);
    out.report["census"] = {{"h_params", tables.h_params.size()},
                            {"s_params", tables.s_params.size()},
                            {"s_invertible", tables.s_invertible.size()}};
    bool pass = rep.all_pass();
    if (ctx.dim() == 4) {
        const GroupTable table = load_or_enumerate(ctx, tables, cfg);
        out.report["closure_order"] = table.order();
        out.report["membership_order_oracle"] = table.oracle_order;
        out.report["closure_matches_oracle"] = table.order() == table.oracle_order;
        out.report["closure_note"] =
            "all Bruhat generators have determinant 1, so the closure is the "
            "determinant-1 subgroup of the membership set";
    }
    out.report["pass"] = pass;
    out.exit_code = pass ? 0 : 1;
    return out;
}

namespace {

// Floating mirror of the generator-level checks.
Json float_mirror_checks(const WeilDatum& d, const TokenTables& tables) {
    using cd = std::complex<double>;
    const std::size_t dim = d.module().size();
    const CyclotomicCtx& zq = d.zeta_ctx();
    const WeilRep rep(d, tables, false);

    auto to_dense = [&](const WeilOperator& op) {
        std::vector<cd> m(dim * dim, cd(0, 0));
        for (std::size_t x = 0; x < dim; ++x)
            for (std::size_t y = 0; y < dim; ++y)
                m[x * dim + y] = op.entry(zq, x, y).to_complex();
        return m;
    };
    auto mul = [&](const std::vector<cd>& a, const std::vector<cd>& b) {
        std::vector<cd> c(dim * dim, cd(0, 0));
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) {
                const cd v = a[i * dim + k];
                if (std::abs(v) < 1e-15) continue;
                for (std::size_t j = 0; j < dim; ++j) c[i * dim + j] += v * b[k * dim + j];
            }
        return c;
    };
    auto unitary_defect = [&](const std::vector<cd>& a) {
        double worst = 0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                cd acc(0, 0);
                for (std::size_t k = 0; k < dim; ++k)
                    acc += a[i * dim + k] * std::conj(a[j * dim + k]);
                worst = std::max(worst, std::abs(acc - (i == j ? cd(1, 0) : cd(0, 0))));
            }
        return worst;
    };

    const auto w = to_dense(rep.generator_operator(GeneratorToken::w()));
    const double wdef = unitary_defect(w);

    // w^2 = h_eps numerically.
    const unsigned q = d.group().q;
    const auto heps = to_dense(rep.generator_operator(
        GeneratorToken::h(FqMatrix::scalar(q, d.group().asize(), q - 1))));
    const auto w2 = mul(w, w);
    double relation_defect = 0;
    for (std::size_t i = 0; i < dim * dim; ++i)
        relation_defect = std::max(relation_defect, std::abs(w2[i] - heps[i]));

    Json j;
    j["w_unitarity_defect"] = fmt_double(wdef);
    j["w_squared_defect"] = fmt_double(relation_defect);
    j["tolerance"] = "1e-9";
    j["pass"] = wdef < 1e-9 && relation_defect < 1e-9;
    return j;
}

} // namespace

CommandResult cmd_build_rep(const RunConfig& cfg) {
    validate_config(cfg);
    CommandResult out;
    const GroupCtx ctx = group_ctx(cfg);
    const WeilDatum datum(ctx, cfg.lambda);
    const TokenTables tables = build_token_tables(ctx);

    out.report["command"] = "build-rep";
    out.report["config"] = config_json(cfg);

    const DataConditionReport conditions = verify_data_conditions(datum, 8, cfg.seed);
    Json cond = Json::array();
    for (const auto& c : conditions.conditions) {
        Json j;
        j["name"] = c.name;
        j["pass"] = c.pass;
        j["checked"] = c.checked;
        if (!c.detail.empty()) j["detail"] = c.detail;
        cond.push_back(std::move(j));
    }
    out.report["data_conditions"] = std::move(cond);

    Json gauss = Json::array();
    bool gauss_ok = true;
    const Rational expected = 1 / datum.c();
    for (const auto& u : datum.sym_invertible()) {
        const Rational g = gauss_sum(datum, u);
        Json j;
        j["value"] = to_string(g);
        j["expected"] = to_string(expected);
        gauss.push_back(std::move(j));
        if (g != expected) gauss_ok = false;
    }
    out.report["gauss_sums"] = std::move(gauss);

    Json quad = Json::array();
    bool quad_ok = true;
    std::uint64_t zero_count = 0;
    bool first = true;
    for (const auto& u : datum.sym_invertible()) {
        const QuadraticFormReport qr = classify_quadratic_form(datum, u);
        Json j;
        j["nondegenerate"] = qr.nondegenerate;
        j["split"] = qr.split;
        j["witt_index"] = qr.witt_index;
        j["zero_count"] = qr.zero_count;
        quad.push_back(std::move(j));
        if (!qr.nondegenerate || !qr.split) quad_ok = false;
        if (first) {
            zero_count = qr.zero_count;
            first = false;
        } else if (qr.zero_count != zero_count) {
            quad_ok = false;   // the forms must be equivalent
        }
    }
    out.report["quadratic_forms"] = std::move(quad);

    bool pass = conditions.all_pass() && gauss_ok && quad_ok;

    if (ctx.dim() == 4) {
        WeilRep rep(datum, tables, cfg.parallel);
        const OperatorRelationReport op_rel = verify_operator_relations(rep);
        out.report["operator_relations"] = relation_json(op_rel.relations);

        const GroupTable table = load_or_enumerate(ctx, tables, cfg);
        const PairCheckReport pairs =
            check_pair_consistency(rep, table, cfg.pair_samples, cfg.seed);
        out.report["pair_consistency"] = {{"pairs", pairs.pairs},
                                          {"failures", pairs.failures}};
        if (!pairs.first_failure.empty())
            out.report["pair_consistency"]["first_failure"] = pairs.first_failure;

        const UnitarityReport unit =
            check_unitarity(rep, table, cfg.unitary_samples, cfg.seed);
        out.report["unitarity"] = {{"checked", unit.checked}, {"failures", unit.failures}};
        out.report["w_square_is_reflection"] = check_w_square_reflection(rep);

        pass = pass && op_rel.all_pass() && pairs.failures == 0 && unit.failures == 0 &&
               check_w_square_reflection(rep);

        if (cfg.backend == "float") {
            out.report["float_mirror"] = float_mirror_checks(datum, tables);
            pass = pass && out.report["float_mirror"]["pass"].get<bool>();
        }
    } else {
        out.report["operators"] =
            "generator-level checks only; the module is too large to materialize "
            "operator matrices at n > 1";
    }

    out.report["pass"] = pass;
    out.exit_code = pass ? 0 : 1;
    return out;
}

CommandResult cmd_decompose(const RunConfig& cfg) {
    validate_config(cfg);
    if (cfg.n != 1) throw UsageError("decompose requires n = 1 (operator scale)");
    CommandResult out;
    const GroupCtx ctx = group_ctx(cfg);
    const WeilDatum datum(ctx, cfg.lambda);
    const TokenTables tables = build_token_tables(ctx);

    out.report["command"] = "decompose";
    out.report["config"] = config_json(cfg);

    const UnitaryGroup u = unitary_group(datum, cfg.seed);
    out.report["unitary_group"] = {{"order", u.order()},
                                   {"commutant_is_scalar", u.commutant_is_scalar},
                                   {"determinants_one", u.dets_are_one},
                                   {"chi_invariance_sampled", u.cond2_sampled_ok},
                                   {"candidates", u.candidates_checked}};

    const ClassData classes = conjugacy_classes(u.structure);
    const unsigned N = std::lcm(classes.exponent, ctx.q);
    auto zn = std::make_shared<CyclotomicCtx>(N);
    const CharacterTable table = character_table(u.structure, classes, zn);
    out.report["character_table"] = {{"classes", classes.count()},
                                     {"dixon_prime", table.ell},
                                     {"cyclotomic_order", N},
                                     {"dims", table.dims},
                                     {"row_orthogonal", table.row_orthogonal},
                                     {"col_orthogonal", table.col_orthogonal},
                                     {"sum_of_squares", table.dims_consistent}};

    const MultiplicityData mult = multiplicities(datum, u, classes, table);
    const CommutationReport commutation = check_sigma_commutation(datum, u, tables, cfg.parallel);
    const IsotypicReport iso =
        verify_isotypic_projectors(datum, u, classes, table, mult, commutation, cfg.seed);
    const auto hom = verify_hom_spaces(datum, u, classes, table, mult,
                                       cfg.closure_samples, cfg.seed);
    const OrbitData orbits = module_orbits(u, datum.module().size());

    Json comps = Json::array();
    long total = 0;
    bool hom_ok = true;
    for (std::size_t pi = 0; pi < table.count(); ++pi) {
        Json j;
        j["pi"] = pi;
        j["dim"] = table.dims[pi];
        j["multiplicity"] = mult.n[pi];
        j["projector_rank"] = iso.ranks[pi];
        j["hom_dimension"] = hom[pi].dimension;
        j["hom_matches"] = hom[pi].dimension_matches;
        j["model_certified"] = hom[pi].model_traces_match && hom[pi].model_multiplicative;
        j["closure_checked"] = hom[pi].closure_checked;
        j["closed_under_w"] = hom[pi].closed_under_w;
        j["closed_under_hu"] = hom[pi].closed_under_hu;
        comps.push_back(std::move(j));
        total += mult.n[pi] * table.dims[pi];
        hom_ok = hom_ok && hom[pi].dimension_matches && hom[pi].model_traces_match &&
                 hom[pi].model_multiplicative && hom[pi].closed_under_w &&
                 hom[pi].closed_under_hu;
    }
    out.report["components"] = std::move(comps);
    out.report["dimension_sum"] = total;
    out.report["module_size"] = datum.module().size();
    out.report["orbits"] = orbits.count();
    out.report["multiplicities"] = {{"fix_formula", mult.fix_formula_ok},
                                    {"integral", mult.integral},
                                    {"dimension_identity", mult.dimension_identity}};
    out.report["projectors"] = {{"idempotent", iso.idempotent},
                                {"mutually_orthogonal", iso.mutually_orthogonal},
                                {"complete", iso.complete},
                                {"ranks_match", iso.ranks_match},
                                {"commute_with_rho", iso.commutes_with_rho},
                                {"sigma_commutation_pairs", commutation.pairs_checked},
                                {"direct_spot_check", iso.direct_spot_ok}};
    if (!iso.first_failure.empty()) out.report["projectors"]["first_failure"] = iso.first_failure;

    const bool pass = u.commutant_is_scalar && u.dets_are_one && u.cond2_sampled_ok &&
                      table.row_orthogonal && table.col_orthogonal && table.dims_consistent &&
                      mult.fix_formula_ok && mult.integral && mult.dimension_identity &&
                      iso.idempotent && iso.mutually_orthogonal && iso.complete &&
                      iso.ranks_match && iso.commutes_with_rho && iso.direct_spot_ok &&
                      commutation.all_commute && hom_ok;
    out.report["pass"] = pass;
    out.exit_code = pass ? 0 : 1;
    return out;
}

CommandResult cmd_dual_pair(const RunConfig& cfg) {
    validate_config(cfg);
    if (cfg.n != 1) throw UsageError("dual-pair requires n = 1 (operator scale)");
    CommandResult out;
    const GroupCtx ctx = group_ctx(cfg);
    const WeilDatum datum(ctx, cfg.lambda);
    const TokenTables tables = build_token_tables(ctx);
    const GroupTable table = load_or_enumerate(ctx, tables, cfg);
    const UnitaryGroup u = unitary_group(datum, cfg.seed);

    const DualPairReport rep =
        compare_models(datum, tables, u, table, 1000, cfg.seed, cfg.parallel);

    out.report["command"] = "dual-pair";
    out.report["config"] = config_json(cfg);
    out.report["form"] = {{"alternating", rep.form_alternating},
                          {"skew", rep.form_skew},
                          {"nondegenerate", rep.form_nondegenerate},
                          {"g_invariant", rep.g_invariant},
                          {"invariance_samples", rep.invariance_samples}};
    out.report["schrodinger_vs_rho"] = {{"h_match", rep.h_match},
                                        {"h_checked", rep.h_checked},
                                        {"u_match", rep.u_match},
                                        {"u_checked", rep.u_checked},
                                        {"w_match", rep.w_match},
                                        {"kernel_identity", rep.kernel_identity}};
    out.report["sl2_vs_sigma"] = {{"match", rep.sl2_matches_sigma},
                                  {"checked", rep.sl2_checked}};
    if (!rep.first_failure.empty()) out.report["first_failure"] = rep.first_failure;
    out.report["pass"] = rep.all_pass();
    out.exit_code = rep.all_pass() ? 0 : 1;
    return out;
}

Json operator_to_json(const WeilOperator& op, const CyclotomicCtx& ctx) {
    Json j;
    j["dim"] = op.dim();
    j["zeta_order"] = ctx.order();
    j["scale"] = to_string(op.scale());
    Json rows = Json::array();
    for (std::size_t x = 0; x < op.dim(); ++x) {
        Json row = Json::array();
        for (std::size_t y = 0; y < op.dim(); ++y) {
            const Cyclotomic v = op.entry(ctx, x, y);
            Json entry = Json::array();
            for (const auto& c : v.coefficients()) entry.push_back(c.get_str());
            row.push_back(std::move(entry));
        }
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

std::string character_table_csv(const CharacterTable& table, const ClassData& classes) {
    std::ostringstream os;
    os << "irreducible,dim";
    for (std::size_t c = 0; c < classes.count(); ++c)
        os << ",class" << c << "(size " << classes.sizes[c] << ")";
    os << "\n";
    for (std::size_t pi = 0; pi < table.count(); ++pi) {
        os << pi << "," << table.dims[pi];
        for (std::size_t c = 0; c < classes.count(); ++c)
            os << ",\"" << table.values[pi][c].to_string() << "\"";
        os << "\n";
    }
    return os.str();
}

std::string multiplicity_csv(const CharacterTable& table, const MultiplicityData& mult) {
    std::ostringstream os;
    os << "irreducible,dim,multiplicity,isotypic_dimension\n";
    for (std::size_t pi = 0; pi < table.count(); ++pi)
        os << pi << "," << table.dims[pi] << "," << mult.n[pi] << ","
           << mult.n[pi] * table.dims[pi] << "\n";
    return os.str();
}

namespace {

void render_text(const Json& j, std::ostream& os, int indent) {
    const std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object() || value.is_array()) {
                os << pad << key << ":\n";
                render_text(value, os, indent + 2);
            } else {
                os << pad << key << ": " << value.dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& value : j) {
            if (value.is_object() || value.is_array()) {
                os << pad << "-\n";
                render_text(value, os, indent + 2);
            } else {
                os << pad << "- " << value.dump() << "\n";
            }
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}

} // namespace

std::string render_report(const CommandResult& result, const std::string& format) {
    if (format == "json") return result.report.dump(2) + "\n";
    std::ostringstream os;
    render_text(result.report, os, 0);
    return os.str();
}

} // namespace oweil
