#include "oweil/weildata.hpp"

#include <algorithm>
#include <random>

namespace oweil {

ModuleSpace::ModuleSpace(unsigned q, unsigned n) : q_(q), vdim_(2 * n) {
    vcount_ = 1;
    for (unsigned i = 0; i < vdim_; ++i) vcount_ *= q;
    coords_.assign(vcount_ * vdim_, 0);
    for (std::size_t code = 0; code < vcount_; ++code) {
        std::size_t rem = code;
        for (unsigned i = vdim_; i-- > 0;) {
            coords_[code * vdim_ + i] = static_cast<std::uint8_t>(rem % q);
            rem /= q;
        }
    }
}

std::size_t ModuleSpace::code_of(const std::uint8_t* v) const {
    std::size_t code = 0;
    for (unsigned i = 0; i < vdim_; ++i) code = code * q_ + v[i] % q_;
    return code;
}

std::size_t ModuleSpace::vector_action(std::size_t code, const FqMatrix& a) const {
    const std::uint8_t* x = vector_of(code);
    std::size_t out = 0;
    for (unsigned j = 0; j < vdim_; ++j) {
        unsigned acc = 0;
        for (unsigned i = 0; i < vdim_; ++i) acc += x[i] * a.at(i, j);
        out = out * q_ + acc % q_;
    }
    return out;
}

WeilDatum::WeilDatum(const GroupCtx& ctx, unsigned lambda)
    : ctx_(ctx),
      field_(std::make_shared<FieldCtx>(ctx.q)),
      zq_(std::make_shared<CyclotomicCtx>(ctx.q)),
      module_(ctx.q, ctx.n),
      psi_(field_, lambda, zq_),
      sym_(eps_symmetric_elements(ctx.eps, ctx.inv, ctx.asize(), ctx.q)),
      j2n_(j_matrix(ctx.q, ctx.n)) {
    if (ctx.inv != Involution::Tilde || ctx.eps != -1)
        throw std::invalid_argument("the Weil datum is built for the tilde, eps = -1 group");
    // c = q^(-2n); c^2 |M| = 1 holds by construction.
    Rational qn(1);
    for (unsigned i = 0; i < 2 * ctx.n; ++i) qn *= ctx.q;
    c_ = 1 / qn;
}

unsigned WeilDatum::bracket(const std::uint8_t* x, const std::uint8_t* y) const {
    // [x, y] = <x, y J_2n>; with J = [[0, I], [-I, 0]] this is
    // sum_i x_i (yJ)_i computed directly from the block shape.
    const unsigned n = ctx_.n, q = ctx_.q;
    unsigned acc = 0;
    for (unsigned i = 0; i < n; ++i) {
        acc += x[i] * (q - y[n + i] % q) % q;       // (yJ)_i = -y_(n+i)
        acc += x[n + i] * (y[i] % q);               // (yJ)_(n+i) = y_i
    }
    return acc % q;
}

unsigned WeilDatum::bracket_codes(std::size_t xc, std::size_t yc) const {
    return bracket(module_.vector_of(xc), module_.vector_of(yc));
}

unsigned WeilDatum::chi_exp(std::size_t p1, std::size_t p2) const {
    const unsigned q = ctx_.q;
    const unsigned a = bracket_codes(module_.xcode(p1), module_.ycode(p2));
    const unsigned b = bracket_codes(module_.ycode(p1), module_.xcode(p2));
    return psi_.exponent(static_cast<long>(a + q - b));
}

unsigned WeilDatum::gamma_exp(const FqMatrix& u, std::size_t p) const {
    const std::size_t xu = module_.vector_action(module_.xcode(p), u);
    return psi_.exponent(static_cast<long>(bracket_codes(xu, module_.ycode(p))));
}

Cyclotomic WeilDatum::gamma(const FqMatrix& u, std::size_t p) const {
    if (involution_apply(ctx_.inv, u) != u)
        throw std::domain_error("gamma parameter must be tilde-fixed");
    return zeta_pow(*zq_, gamma_exp(u, p));
}

namespace {

// Point of M whose coordinate vector (x concat y) is the k-th basis vector.
std::size_t basis_point(const ModuleSpace& mod, unsigned k) {
    std::vector<std::uint8_t> v(2 * mod.vdim(), 0);
    v[k] = 1;
    return mod.index(mod.code_of(v.data()), mod.code_of(v.data() + mod.vdim()));
}

std::size_t point_add(const ModuleSpace& mod, std::size_t p1, std::size_t p2) {
    const unsigned d = mod.vdim(), q = mod.q();
    std::vector<std::uint8_t> v(2 * d);
    const std::uint8_t* x1 = mod.vector_of(mod.xcode(p1));
    const std::uint8_t* y1 = mod.vector_of(mod.ycode(p1));
    const std::uint8_t* x2 = mod.vector_of(mod.xcode(p2));
    const std::uint8_t* y2 = mod.vector_of(mod.ycode(p2));
    for (unsigned i = 0; i < d; ++i) {
        v[i] = static_cast<std::uint8_t>((x1[i] + x2[i]) % q);
        v[d + i] = static_cast<std::uint8_t>((y1[i] + y2[i]) % q);
    }
    return mod.index(mod.code_of(v.data()), mod.code_of(v.data() + d));
}

} // namespace

DataConditionReport verify_data_conditions(const WeilDatum& d,
                                           std::size_t pointwise_t_samples,
                                           std::uint64_t seed) {
    DataConditionReport rep;
    const ModuleSpace& mod = d.module();
    const GroupCtx& ctx = d.group();
    const std::size_t msize = mod.size();
    const unsigned mdim = 2 * mod.vdim();

    const TokenTables tables = build_token_tables(ctx);

    auto run = [&](const std::string& name, auto&& body) {
        ConditionCheck cc;
        cc.name = name;
        body(cc);
        rep.conditions.push_back(std::move(cc));
    };

    // 1(a) chi(pt, p') = chi(p, p' t*). Both exponents are bilinear in
    // (p, p'), so equality of the basis-pair matrices over F_q settles every
    // pair; a full pointwise sweep runs for sampled t as a cross-check.
    run("chi(pt,p') = chi(p,p't*)", [&](ConditionCheck& cc) {
        std::vector<std::size_t> basis(mdim);
        for (unsigned k = 0; k < mdim; ++k) basis[k] = basis_point(mod, k);
        for (const auto& t : tables.h_params) {
            ++cc.checked;
            const FqMatrix tstar = involution_apply(ctx.inv, t);
            for (unsigned k = 0; k < mdim && cc.pass; ++k)
                for (unsigned l = 0; l < mdim; ++l) {
                    const unsigned lhs = d.chi_exp(mod.point_action(basis[k], t), basis[l]);
                    const unsigned rhs = d.chi_exp(basis[k], mod.point_action(basis[l], tstar));
                    if (lhs != rhs) {
                        cc.pass = false;
                        cc.detail = "basis pair mismatch";
                        break;
                    }
                }
            if (!cc.pass) return;
        }
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, tables.h_params.size() - 1);
        for (std::size_t s = 0; s < pointwise_t_samples; ++s) {
            const FqMatrix& t = tables.h_params[pick(rng)];
            const FqMatrix tstar = involution_apply(ctx.inv, t);
            std::vector<std::size_t> pt(msize), pts(msize);
            for (std::size_t p = 0; p < msize; ++p) {
                pt[p] = mod.point_action(p, t);
                pts[p] = mod.point_action(p, tstar);
            }
            for (std::size_t p = 0; p < msize; ++p)
                for (std::size_t p2 = 0; p2 < msize; ++p2)
                    if (d.chi_exp(pt[p], p2) != d.chi_exp(p, pts[p2])) {
                        cc.pass = false;
                        cc.detail = "pointwise mismatch";
                        return;
                    }
        }
        cc.detail = "all t via bilinear-form equality; pointwise sweep for sampled t";
    });

    // 1(b) chi(p', p) = chi(-eps p, p').
    run("chi(p',p) = chi(-eps p,p')", [&](ConditionCheck& cc) {
        const unsigned s = ctx.eps == -1 ? 1 : ctx.q - 1;
        const FqMatrix scal = FqMatrix::scalar(ctx.q, ctx.asize(), s);
        for (std::size_t p1 = 0; p1 < msize; ++p1)
            for (std::size_t p2 = 0; p2 < msize; ++p2) {
                ++cc.checked;
                if (d.chi_exp(p2, p1) != d.chi_exp(mod.point_action(p1, scal), p2)) {
                    cc.pass = false;
                    cc.detail = "pair failed";
                    return;
                }
            }
    });

    // 1(c) chi(., p) trivial forces p = 0.
    run("chi nondegenerate", [&](ConditionCheck& cc) {
        for (std::size_t p2 = 1; p2 < msize; ++p2) {
            ++cc.checked;
            bool witness = false;
            for (std::size_t p1 = 0; p1 < msize; ++p1)
                if (d.chi_exp(p1, p2) != 0) { witness = true; break; }
            if (!witness) {
                cc.pass = false;
                cc.detail = "nonzero point with trivial pairing";
                return;
            }
        }
    });

    // 2(a) gamma(u+u', p) = gamma(u, p) gamma(u', p).
    run("gamma additive in u", [&](ConditionCheck& cc) {
        for (const auto& u1 : d.sym_elements())
            for (const auto& u2 : d.sym_elements()) {
                const FqMatrix sum = u1 + u2;
                for (std::size_t p = 0; p < msize; ++p) {
                    ++cc.checked;
                    if (d.gamma_exp(sum, p) !=
                        (d.gamma_exp(u1, p) + d.gamma_exp(u2, p)) % ctx.q) {
                        cc.pass = false;
                        cc.detail = "(u,u',p) failed";
                        return;
                    }
                }
            }
    });

    // 2(b) gamma(u, pr) = gamma(r u r*, p).
    run("gamma twist law", [&](ConditionCheck& cc) {
        for (const auto& r : tables.h_params) {
            const FqMatrix rstar = involution_apply(ctx.inv, r);
            for (const auto& u : d.sym_elements()) {
                const FqMatrix rur = r * u * rstar;
                for (std::size_t p = 0; p < msize; ++p) {
                    ++cc.checked;
                    if (d.gamma_exp(u, mod.point_action(p, r)) != d.gamma_exp(rur, p)) {
                        cc.pass = false;
                        cc.detail = "(r,u,p) failed";
                        return;
                    }
                }
            }
        }
    });

    // 2(c) gamma(t, p+p') = gamma(t, p) gamma(t, p') chi(p, p' t).
    run("gamma cocycle", [&](ConditionCheck& cc) {
        for (const auto& t : d.sym_elements())
            for (std::size_t p1 = 0; p1 < msize; ++p1)
                for (std::size_t p2 = 0; p2 < msize; ++p2) {
                    ++cc.checked;
                    const unsigned lhs = d.gamma_exp(t, point_add(mod, p1, p2));
                    const unsigned rhs = (d.gamma_exp(t, p1) + d.gamma_exp(t, p2) +
                                          d.chi_exp(p1, mod.point_action(p2, t))) %
                                         ctx.q;
                    if (lhs != rhs) {
                        cc.pass = false;
                        cc.detail = "(t,p,p') failed";
                        return;
                    }
                }
    });

    // 3: the Gauss normalization sum_p gamma(t, p) = 1/c for invertible t.
    run("gauss normalization", [&](ConditionCheck& cc) {
        const Rational expect = 1 / d.c();
        for (const auto& t : d.sym_invertible()) {
            ++cc.checked;
            if (gauss_sum(d, t) != expect) {
                cc.pass = false;
                cc.detail = "sum != 1/c";
                return;
            }
        }
    });

    return rep;
}

Rational gauss_sum(const WeilDatum& d, const FqMatrix& u) {
    const GroupCtx& ctx = d.group();
    if (involution_apply(ctx.inv, u) != u || u.determinant() == 0)
        throw std::domain_error("gauss sum parameter must be invertible and tilde-fixed");
    const ModuleSpace& mod = d.module();
    std::vector<std::int64_t> counts(ctx.q, 0);
    const std::size_t msize = mod.size();
    #pragma omp parallel
    {
        std::vector<std::int64_t> local(ctx.q, 0);
        #pragma omp for schedule(static) nowait
        for (std::size_t p = 0; p < msize; ++p) ++local[d.gamma_exp(u, p)];
        #pragma omp critical(gauss_acc)
        for (unsigned k = 0; k < ctx.q; ++k) counts[k] += local[k];
    }
    Cyclotomic total(&d.zeta_ctx());
    for (unsigned k = 0; k < ctx.q; ++k)
        if (counts[k] != 0)
            total += zeta_pow(d.zeta_ctx(), k) * Rational(static_cast<long>(counts[k]));
    if (!total.is_rational())
        throw std::logic_error("gauss sum is not rational; datum bug");
    return total.rational_value();
}

QuadraticFormReport classify_quadratic_form(const WeilDatum& d, const FqMatrix& u) {
    const GroupCtx& ctx = d.group();
    if (involution_apply(ctx.inv, u) != u || u.determinant() == 0)
        throw std::domain_error("form parameter must be invertible and tilde-fixed");
    const ModuleSpace& mod = d.module();
    const unsigned q = ctx.q, half = mod.vdim(), dim = 2 * half;
    FieldCtx f(q);

    // Q(v) with v = (x | y) split into the two V-coordinates.
    auto quad = [&](const std::vector<std::uint8_t>& v) -> unsigned {
        std::vector<std::uint8_t> xu(half, 0);
        for (unsigned j = 0; j < half; ++j) {
            unsigned acc = 0;
            for (unsigned i = 0; i < half; ++i) acc += v[i] * u.at(i, j);
            xu[j] = static_cast<std::uint8_t>(acc % q);
        }
        return d.bracket(xu.data(), v.data() + half);
    };

    // Polar form B(v, w) = Q(v+w) - Q(v) - Q(w).
    auto polar = [&](const std::vector<std::uint8_t>& v,
                     const std::vector<std::uint8_t>& w) -> unsigned {
        std::vector<std::uint8_t> sum(dim);
        for (unsigned i = 0; i < dim; ++i) sum[i] = static_cast<std::uint8_t>((v[i] + w[i]) % q);
        return f.sub(f.sub(quad(sum), quad(v)), quad(w));
    };

    QuadraticFormReport rep;

    FqMatrix gram(q, dim, dim);
    std::vector<std::vector<std::uint8_t>> basis;
    for (unsigned k = 0; k < dim; ++k) {
        std::vector<std::uint8_t> e(dim, 0);
        e[k] = 1;
        basis.push_back(std::move(e));
    }
    for (unsigned i = 0; i < dim; ++i)
        for (unsigned j = 0; j < dim; ++j) gram.set(i, j, polar(basis[i], basis[j]));
    rep.nondegenerate = gram.rank() == dim;

    // Exhaustive zero count over M.
    const std::size_t msize = mod.size();
    std::uint64_t zeros = 0;
    #pragma omp parallel for reduction(+ : zeros) schedule(static)
    for (std::size_t p = 0; p < msize; ++p) {
        const std::uint8_t* x = mod.vector_of(mod.xcode(p));
        std::vector<std::uint8_t> xu(half, 0);
        for (unsigned j = 0; j < half; ++j) {
            unsigned acc = 0;
            for (unsigned i = 0; i < half; ++i) acc += x[i] * u.at(i, j);
            xu[j] = static_cast<std::uint8_t>(acc % q);
        }
        if (d.bracket(xu.data(), mod.vector_of(mod.ycode(p))) == 0) ++zeros;
    }
    rep.zero_count = zeros;

    // Witt index through iterated hyperbolic-pair splitting.
    std::vector<std::vector<std::uint8_t>> space = basis;
    auto in_span = [&](const std::vector<std::vector<std::uint8_t>>& sp, std::size_t combo)
        -> std::vector<std::uint8_t> {
        std::vector<std::uint8_t> v(dim, 0);
        for (const auto& b : sp) {
            const unsigned ci = static_cast<unsigned>(combo % q);
            combo /= q;
            if (ci)
                for (unsigned i = 0; i < dim; ++i)
                    v[i] = static_cast<std::uint8_t>((v[i] + ci * b[i]) % q);
        }
        return v;
    };
    while (!space.empty()) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < space.size(); ++i) total *= q;
        std::vector<std::uint8_t> iso;
        for (std::size_t combo = 1; combo < total; ++combo) {
            std::vector<std::uint8_t> v = in_span(space, combo);
            if (std::all_of(v.begin(), v.end(), [](std::uint8_t c) { return c == 0; })) continue;
            if (quad(v) == 0) { iso = std::move(v); break; }
        }
        if (iso.empty()) break;   // anisotropic remainder
        // Partner with B(iso, w) != 0, normalized to a hyperbolic pair.
        std::vector<std::uint8_t> partner;
        for (const auto& b : space) {
            if (polar(iso, b) != 0) { partner = b; break; }
        }
        if (partner.empty()) break;   // radical vector; degenerate restriction
        const unsigned binv = f.inv(polar(iso, partner));
        for (unsigned i = 0; i < dim; ++i)
            partner[i] = static_cast<std::uint8_t>(partner[i] * binv % q);
        const unsigned t = f.neg(quad(partner));
        for (unsigned i = 0; i < dim; ++i)
            partner[i] = static_cast<std::uint8_t>((partner[i] + t * iso[i]) % q);
        ++rep.witt_index;
        // Restrict to the orthogonal complement of the pair inside the span.
        std::vector<std::vector<std::uint8_t>> next;
        FqMatrix cond(q, 2, static_cast<unsigned>(space.size()));
        for (unsigned jcol = 0; jcol < space.size(); ++jcol) {
            cond.set(0, jcol, polar(iso, space[jcol]));
            cond.set(1, jcol, polar(partner, space[jcol]));
        }
        // Nullspace of cond gives coefficients of complement vectors.
        const unsigned k = static_cast<unsigned>(space.size());
        std::vector<unsigned> rowdata(2 * k);
        for (unsigned r = 0; r < 2; ++r)
            for (unsigned c2 = 0; c2 < k; ++c2) rowdata[r * k + c2] = cond.at(r, c2);
        std::vector<int> pivot_of_col(k, -1);
        unsigned rank = 0;
        for (unsigned col = 0; col < k && rank < 2; ++col) {
            unsigned pr = 2;
            for (unsigned r = rank; r < 2; ++r)
                if (rowdata[r * k + col] != 0) { pr = r; break; }
            if (pr == 2) continue;
            for (unsigned j = 0; j < k; ++j) std::swap(rowdata[pr * k + j], rowdata[rank * k + j]);
            const unsigned pinv = f.inv(rowdata[rank * k + col]);
            for (unsigned j = 0; j < k; ++j) rowdata[rank * k + j] = f.mul(rowdata[rank * k + j], pinv);
            for (unsigned r = 0; r < 2; ++r) {
                if (r == rank || rowdata[r * k + col] == 0) continue;
                const unsigned factor = rowdata[r * k + col];
                for (unsigned j = 0; j < k; ++j)
                    rowdata[r * k + j] = f.sub(rowdata[r * k + j], f.mul(factor, rowdata[rank * k + j]));
            }
            pivot_of_col[col] = static_cast<int>(rank);
            ++rank;
        }
        for (unsigned col = 0; col < k; ++col) {
            if (pivot_of_col[col] >= 0) continue;
            std::vector<std::uint8_t> v(dim, 0);
            for (unsigned i = 0; i < dim; ++i) v[i] = space[col][i];
            for (unsigned c2 = 0; c2 < k; ++c2) {
                if (pivot_of_col[c2] < 0) continue;
                const unsigned coefficient = rowdata[pivot_of_col[c2] * k + col];
                if (coefficient == 0) continue;
                const unsigned negc = f.neg(coefficient);
                for (unsigned i = 0; i < dim; ++i)
                    v[i] = static_cast<std::uint8_t>((v[i] + negc * space[c2][i]) % q);
            }
            next.push_back(std::move(v));
        }
        space = std::move(next);
    }
    rep.split = rep.nondegenerate && rep.witt_index == mod.vdim() && space.empty();
    return rep;
}

} // namespace oweil
