#include "oweil/weilrep.hpp"

#include <random>

namespace oweil {

WeilRep::WeilRep(const WeilDatum& datum, const TokenTables& tables, bool parallel,
                 std::size_t memo_cap)
    : datum_(&datum), tables_(&tables), parallel_(parallel), memo_cap_(memo_cap) {}

WeilOperator WeilRep::generator_operator(const GeneratorToken& tok) const {
    const ModuleSpace& mod = datum_->module();
    const std::size_t dim = mod.size();
    const unsigned q = datum_->group().q;

    switch (tok.kind) {
        case GeneratorToken::Kind::H: {
            // rho(h_t) f(x) = f(xt): permutation kernel K(x, y) = [y = xt].
            if (!tok.param.inverse()) throw std::invalid_argument("h-token not invertible");
            std::vector<std::uint32_t> col(dim);
            for (std::size_t p = 0; p < dim; ++p)
                col[p] = static_cast<std::uint32_t>(mod.point_action(p, tok.param));
            return WeilOperator::monomial(q, std::move(col),
                                          std::vector<std::uint16_t>(dim, 0), 1);
        }
        case GeneratorToken::Kind::U: {
            // rho(u_s) f(x) = gamma(s, x) f(x): diagonal character kernel.
            std::vector<std::uint32_t> col(dim);
            std::vector<std::uint16_t> exp(dim);
            for (std::size_t p = 0; p < dim; ++p) {
                col[p] = static_cast<std::uint32_t>(p);
                exp[p] = static_cast<std::uint16_t>(datum_->gamma_exp(tok.param, p));
            }
            return WeilOperator::monomial(q, std::move(col), std::move(exp), 1);
        }
        case GeneratorToken::Kind::W: {
            // rho(w) f(x) = c sum_y chi(-eps x, y) f(y).
            const GroupCtx& ctx = datum_->group();
            const unsigned meps = ctx.eps == -1 ? 1 : q - 1;
            const FqMatrix scal = FqMatrix::scalar(q, ctx.asize(), meps);
            std::vector<std::int16_t> codes(dim * dim);
            #pragma omp parallel for schedule(static) if (parallel_)
            for (std::size_t x = 0; x < dim; ++x) {
                const std::size_t mx = mod.point_action(x, scal);
                for (std::size_t y = 0; y < dim; ++y)
                    codes[x * dim + y] = static_cast<std::int16_t>(datum_->chi_exp(mx, y));
            }
            return WeilOperator::dense(q, dim, std::move(codes), datum_->c());
        }
    }
    throw std::logic_error("unreachable");
}

WeilOperator WeilRep::token_operator(std::int32_t code) const {
    return generator_operator(tables_->token(code));
}

WeilOperator WeilRep::word_operator(const std::vector<std::int32_t>& word) const {
    WeilOperator acc = WeilOperator::identity(datum_->group().q, datum_->module().size());
    for (std::int32_t code : word) acc = acc.multiply(token_operator(code), parallel_);
    return acc;
}

WeilOperator WeilRep::element_operator(const GroupTable& table, std::size_t index) {
    const std::uint64_t key = table.keys[index];
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    WeilOperator op = word_operator(table.word_of(index));
    std::lock_guard<std::mutex> lock(memo_mutex_);
    if (memo_.size() < memo_cap_) memo_.emplace(key, op);
    return op;
}

OperatorRelationReport verify_operator_relations(WeilRep& rep) {
    OperatorRelationReport out;
    const WeilDatum& d = rep.datum();
    const TokenTables& tables = rep.tables();
    const GroupCtx& ctx = d.group();
    const bool par = rep.parallel();
    auto star = [&](const FqMatrix& x) { return involution_apply(ctx.inv, x); };
    auto h_op = [&](const FqMatrix& t) {
        return rep.generator_operator(GeneratorToken::h(t));
    };
    auto u_op = [&](const FqMatrix& s) {
        return rep.generator_operator(GeneratorToken::u(s));
    };
    const WeilOperator w = rep.generator_operator(GeneratorToken::w());

    auto run = [&](const std::string& name, auto&& body) {
        RelationCheck rc;
        rc.name = name;
        rc.pass = true;
        try {
            body(rc);
        } catch (const CollapseError& e) {
            rc.pass = false;
            rc.failure = e.what();
        }
        out.relations.push_back(std::move(rc));
    };

    run("rho: h_t h_t' = h_tt'", [&](RelationCheck& rc) {
        for (const auto& t1 : tables.h_params) {
            const WeilOperator op1 = h_op(t1);
            for (const auto& t2 : tables.h_params) {
                ++rc.checked;
                if (op1.multiply(h_op(t2), par) != h_op(t1 * t2)) {
                    rc.pass = false;
                    rc.failure = "t pair failed";
                    return;
                }
            }
        }
    });

    run("rho: u_s u_s' = u_s+s'", [&](RelationCheck& rc) {
        for (const auto& s1 : tables.s_params)
            for (const auto& s2 : tables.s_params) {
                ++rc.checked;
                if (u_op(s1).multiply(u_op(s2), par) != u_op(s1 + s2)) {
                    rc.pass = false;
                    rc.failure = "s pair failed";
                    return;
                }
            }
    });

    run("rho: w^2 = h_eps", [&](RelationCheck& rc) {
        rc.checked = 1;
        const unsigned e = ctx.eps == 1 ? 1 : ctx.q - 1;
        if (w.multiply(w, par) != h_op(FqMatrix::scalar(ctx.q, ctx.asize(), e))) {
            rc.pass = false;
            rc.failure = "w^2 mismatch";
        }
    });

    run("rho: h_t u_s = u_tst* h_t", [&](RelationCheck& rc) {
        for (const auto& t : tables.h_params) {
            const WeilOperator ht = h_op(t);
            for (const auto& s : tables.s_params) {
                ++rc.checked;
                if (ht.multiply(u_op(s), par) != u_op(t * s * star(t)).multiply(ht, par)) {
                    rc.pass = false;
                    rc.failure = "(t,s) failed";
                    return;
                }
            }
        }
    });

    run("rho: w h_t = h_t*^-1 w", [&](RelationCheck& rc) {
        for (const auto& t : tables.h_params) {
            ++rc.checked;
            if (w.multiply(h_op(t), par) != h_op(*star(t).inverse()).multiply(w, par)) {
                rc.pass = false;
                rc.failure = "t failed";
                return;
            }
        }
    });

    run("rho: w u_t^-1 w u_-eps*t w u_t^-1 = h_-eps*t", [&](RelationCheck& rc) {
        for (const auto& t : tables.s_invertible) {
            ++rc.checked;
            const FqMatrix tinv = *t.inverse();
            const FqMatrix met = ctx.eps == 1 ? -t : t;
            const WeilOperator ut = u_op(tinv);
            WeilOperator lhs = w.multiply(ut, par);
            lhs = lhs.multiply(w, par);
            lhs = lhs.multiply(u_op(met), par);
            lhs = lhs.multiply(w, par);
            lhs = lhs.multiply(ut, par);
            if (lhs != h_op(met)) {
                rc.pass = false;
                rc.failure = "t failed";
                return;
            }
        }
    });

    return out;
}

PairCheckReport check_pair_consistency(WeilRep& rep, const GroupTable& table,
                                       std::size_t pairs, std::uint64_t seed) {
    PairCheckReport out;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, table.order() - 1);
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::size_t gi = pick(rng), hi = pick(rng);
        ++out.pairs;
        const FqMatrix prod = table.matrix_of(gi) * table.matrix_of(hi);
        const auto pi = table.find(prod);
        if (!pi) {
            ++out.failures;
            if (out.first_failure.empty()) out.first_failure = "product not in table";
            continue;
        }
        try {
            const WeilOperator lhs = rep.word_operator(table.word_of(gi))
                                         .multiply(rep.word_operator(table.word_of(hi)),
                                                   rep.parallel());
            if (lhs != rep.word_operator(table.word_of(*pi))) {
                ++out.failures;
                if (out.first_failure.empty())
                    out.first_failure = "pair (" + std::to_string(gi) + ", " +
                                        std::to_string(hi) + ") operator mismatch";
            }
        } catch (const CollapseError& e) {
            ++out.failures;
            if (out.first_failure.empty()) out.first_failure = e.what();
        }
    }
    return out;
}

UnitarityReport check_unitarity(WeilRep& rep, const GroupTable& table,
                                std::size_t element_samples, std::uint64_t seed) {
    UnitarityReport out;
    const TokenTables& tables = rep.tables();
    for (std::size_t code = 0; code < tables.token_count(); ++code) {
        ++out.checked;
        if (!rep.token_operator(static_cast<std::int32_t>(code)).unitary(rep.parallel()))
            ++out.failures;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, table.order() - 1);
    for (std::size_t i = 0; i < element_samples; ++i) {
        ++out.checked;
        try {
            if (!rep.word_operator(table.word_of(pick(rng))).unitary(rep.parallel()))
                ++out.failures;
        } catch (const CollapseError&) {
            ++out.failures;
        }
    }
    return out;
}

bool check_w_square_reflection(WeilRep& rep) {
    const WeilDatum& d = rep.datum();
    const GroupCtx& ctx = d.group();
    const ModuleSpace& mod = d.module();
    const WeilOperator w = rep.generator_operator(GeneratorToken::w());
    const FqMatrix minus = FqMatrix::scalar(ctx.q, ctx.asize(), ctx.q - 1);
    const WeilOperator hminus = rep.generator_operator(GeneratorToken::h(minus));
    if (w.multiply(w, rep.parallel()) != hminus) return false;
    // h_-1 must be the point reflection x -> -x.
    for (std::size_t p = 0; p < mod.size(); ++p)
        if (hminus.columns()[p] != mod.point_action(p, minus) ||
            hminus.exponents()[p] != 0)
            return false;
    return true;
}

IntertwinerReport psi_equivalence(const WeilDatum& d1, const WeilDatum& d2,
                                  const TokenTables& tables, bool parallel) {
    IntertwinerReport out;
    const ModuleSpace& mod = d1.module();
    const FieldCtx& f = d1.field();
    const unsigned q = d1.group().q;
    // lambda = lambda2 / lambda1: psi_2(r) = psi_1(lambda r).
    const unsigned lambda = f.mul(d2.psi().lambda(), f.inv(d1.psi().lambda()));

    // Psi f(x, y) = f(x, lambda y): permutation on points.
    const std::size_t dim = mod.size();
    std::vector<std::uint32_t> col(dim);
    for (std::size_t p = 0; p < dim; ++p) {
        const std::size_t xc = mod.xcode(p), yc = mod.ycode(p);
        std::vector<std::uint8_t> y(mod.vdim());
        const std::uint8_t* yv = mod.vector_of(yc);
        for (unsigned i = 0; i < mod.vdim(); ++i)
            y[i] = static_cast<std::uint8_t>(yv[i] * lambda % q);
        col[p] = static_cast<std::uint32_t>(mod.index(xc, mod.code_of(y.data())));
    }
    WeilOperator psi =
        WeilOperator::monomial(q, std::move(col), std::vector<std::uint16_t>(dim, 0), 1);
    out.permutation = true;

    WeilRep rep1(d1, tables, parallel), rep2(d2, tables, parallel);
    out.intertwines = true;
    for (std::size_t code = 0; code < tables.token_count(); ++code) {
        ++out.tokens_checked;
        const auto c = static_cast<std::int32_t>(code);
        try {
            if (psi.multiply(rep1.token_operator(c), parallel) !=
                rep2.token_operator(c).multiply(psi, parallel)) {
                out.intertwines = false;
                break;
            }
        } catch (const CollapseError&) {
            out.intertwines = false;
            break;
        }
    }
    return out;
}

} // namespace oweil
