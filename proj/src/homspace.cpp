#include "oweil/unidecomp.hpp"

#include <numeric>
#include <random>

namespace oweil {

namespace {

// --- linear algebra over Q(zeta_N) ------------------------------------------

using CycVec = std::vector<Cyclotomic>;

struct CycRREF {
    const CyclotomicCtx* ctx;
    std::vector<CycVec> rows;           // pivot-normalized
    std::vector<std::size_t> pivots;

    explicit CycRREF(const CyclotomicCtx* c) : ctx(c) {}

    // Reduce v against the rows in place; returns the first nonzero column.
    std::size_t reduce(CycVec& v) const {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Cyclotomic& c = v[pivots[r]];
            if (c.is_zero()) continue;
            const Cyclotomic factor = c;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (!rows[r][j].is_zero()) v[j] -= factor * rows[r][j];
        }
        for (std::size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) return j;
        return v.size();
    }

    bool insert(CycVec v) {
        const std::size_t piv = reduce(v);
        if (piv == v.size()) return false;
        const Cyclotomic pinv = inverse(v[piv]);
        for (auto& c : v) c = c * pinv;
        // Back-substitute into existing rows to keep full RREF.
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Cyclotomic& f = rows[r][piv];
            if (f.is_zero()) continue;
            const Cyclotomic factor = f;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (!v[j].is_zero()) rows[r][j] -= factor * v[j];
        }
        // Keep rows sorted by pivot column.
        std::size_t at = rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (piv < pivots[r]) { at = r; break; }
        rows.insert(rows.begin() + at, std::move(v));
        pivots.insert(pivots.begin() + at, piv);
        return true;
    }

    // Coordinates of v in the row basis; nullopt when v is outside the span.
    std::optional<CycVec> expand(CycVec v) const {
        CycVec coords(rows.size(), Cyclotomic(ctx));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Cyclotomic c = v[pivots[r]];
            if (c.is_zero()) continue;
            coords[r] = c;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (!rows[r][j].is_zero()) v[j] -= c * rows[r][j];
        }
        for (const auto& c : v)
            if (!c.is_zero()) return std::nullopt;
        return coords;
    }
};

// --- integer model action ----------------------------------------------------

// m x m matrix over Z[zeta_N] with a common denominator.
struct IntModelMat {
    std::size_t m = 0;
    unsigned deg = 0;
    std::vector<std::int64_t> entries;   // [row][col][coeff]
    std::int64_t denom = 1;
    const std::int64_t* at(std::size_t r, std::size_t c) const {
        return entries.data() + (r * m + c) * deg;
    }
};

// theta value at one point: integer coefficient m-vector plus denominator.
struct IntValue {
    std::vector<std::int64_t> num;   // m * deg
    std::int64_t denom = 1;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        const std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

void reduce_value(IntValue& v) {
    std::int64_t g = v.denom;
    for (std::int64_t c : v.num) {
        g = gcd64(g, c);
        if (g == 1) return;
    }
    if (g <= 1) return;
    v.denom /= g;
    for (auto& c : v.num) c /= g;
}

// out = (mat / mat.denom) * (v / v.denom), with exact reduction.
IntValue apply_model(const CyclotomicCtx& ctx, const IntModelMat& mat, const IntValue& v) {
    const std::size_t m = mat.m;
    const unsigned deg = mat.deg;
    IntValue out;
    out.num.assign(m * deg, 0);
    std::vector<std::int64_t> acc(ctx.order());
    std::vector<std::int64_t> a(deg), b(deg);
    for (std::size_t r = 0; r < m; ++r) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t c = 0; c < m; ++c) {
            const std::int64_t* e = mat.at(r, c);
            std::copy(e, e + deg, a.begin());
            std::copy(v.num.begin() + c * deg, v.num.begin() + (c + 1) * deg, b.begin());
            redundant_mul_acc(ctx, a, b, acc);
        }
        const auto folded = fold_redundant(ctx, acc);
        std::copy(folded.begin(), folded.end(), out.num.begin() + r * deg);
    }
    out.denom = mat.denom * v.denom;
    reduce_value(out);
    return out;
}

std::int64_t max_abs(const std::vector<std::int64_t>& v) {
    std::int64_t m = 0;
    for (std::int64_t c : v) m = std::max(m, c < 0 ? -c : c);
    return m;
}

// Rational -> int64 numerator/denominator with range checks.
std::pair<std::int64_t, std::int64_t> to_i64(const Rational& r) {
    if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p())
        throw std::overflow_error("rational too large for the integer model path");
    return {r.get_num().get_si(), r.get_den().get_si()};
}

// --- model extraction ---------------------------------------------------------

struct Model {
    std::size_t pi = 0;
    std::size_t m = 0;
    CycRREF basis;
    bool traces_match = false;
    bool multiplicative = false;

    explicit Model(const CyclotomicCtx* ctx) : basis(ctx) {}
};

CycVec translate(const FiniteGroup& g, const CycVec& v, std::size_t h) {
    CycVec out(v.size());
    const std::size_t hinv = g.inverse(h);
    for (std::size_t x = 0; x < v.size(); ++x) out[x] = v[g.mul(hinv, x)];
    return out;
}

// Matrix of left translation by beta on the basis row space.
std::vector<CycVec> model_matrix(const Model& model, const FiniteGroup& g, std::size_t beta) {
    const std::size_t m = model.m;
    std::vector<CycVec> cols;
    for (std::size_t i = 0; i < m; ++i) {
        auto coords = model.basis.expand(translate(g, model.basis.rows[i], beta));
        if (!coords) throw std::logic_error("model space is not translation-invariant");
        cols.push_back(std::move(*coords));
    }
    // cols[i][j]: coefficient of b_j in L_beta b_i; matrix acts on coordinate
    // columns as (pi_beta c)_j = sum_i cols[i][j] c_i.
    std::vector<CycVec> mat(m, CycVec(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) mat[j][i] = cols[i][j];
    return mat;
}

std::vector<CycVec> mat_mul(const CyclotomicCtx& ctx, const std::vector<CycVec>& a,
                            const std::vector<CycVec>& b) {
    const std::size_t m = a.size();
    std::vector<CycVec> out(m, CycVec(m, Cyclotomic(&ctx)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[k][j].is_zero()) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

// Find a cyclic-subgroup character of restriction multiplicity one and build
// the corresponding cut idempotent seed; returns the spun model.
Model extract_model(const UnitaryGroup& u, const ClassData& classes,
                    const CharacterTable& table, std::size_t pi,
                    const std::vector<std::size_t>& gens) {
    const CyclotomicCtx& ctx = *table.ctx;
    const FiniteGroup& g = u.structure;
    const long m = table.dims[pi];
    Model model(&ctx);
    model.pi = pi;
    model.m = static_cast<std::size_t>(m);

    // chi values per element and their conjugates.
    std::vector<Cyclotomic> chi(g.size);
    for (std::size_t b = 0; b < g.size; ++b) chi[b] = table.values[pi][classes.class_of[b]];

    // Search (b, r): multiplicity of lambda_r in Res_<b> pi equals one.
    std::size_t cut_b = g.size;
    unsigned cut_r = 0, cut_e = 1;
    for (std::size_t b = 0; b < g.size && cut_b == g.size; ++b) {
        const unsigned e = classes.element_order[b];
        std::vector<std::size_t> powers(e);
        std::size_t cur = g.identity;
        for (unsigned s = 0; s < e; ++s) {
            powers[s] = cur;
            cur = g.mul(cur, b);
        }
        for (unsigned r = 0; r < e; ++r) {
            Cyclotomic acc(&ctx);
            for (unsigned s = 0; s < e; ++s)
                acc += chi[powers[s]] *
                       zeta_pow(ctx, -static_cast<long>(r) * s * (ctx.order() / e));
            const Cyclotomic mult = acc * Rational(1, e);
            if (!mult.is_rational() || !is_integer(mult.rational_value()))
                throw std::logic_error("restriction multiplicity is not integral");
            if (mult.rational_value() == 1) {
                cut_b = b;
                cut_r = r;
                cut_e = e;
                break;
            }
        }
    }
    if (cut_b == g.size)
        throw std::logic_error("no multiplicity-one cyclic cut found for this irreducible");

    // Seed a(g) = sum_s conj(chi)(g b^-s) zeta_e^(-rs): the left ideal it
    // generates is a single copy of V_pi.
    CycVec seed(g.size, Cyclotomic(&ctx));
    {
        std::vector<std::size_t> powers(cut_e);
        std::size_t cur = g.identity;
        for (unsigned s = 0; s < cut_e; ++s) {
            powers[s] = cur;
            cur = g.mul(cur, cut_b);
        }
        for (std::size_t x = 0; x < g.size; ++x) {
            Cyclotomic acc(&ctx);
            for (unsigned s = 0; s < cut_e; ++s)
                acc += conjugate(chi[g.mul(x, g.inverse(powers[s]))]) *
                       zeta_pow(ctx, -static_cast<long>(cut_r) * s *
                                         (ctx.order() / cut_e));
            seed[x] = std::move(acc);
        }
    }

    // Spin by the generators until the rank settles at m.
    model.basis.insert(seed);
    std::vector<CycVec> frontier{std::move(seed)};
    while (!frontier.empty() && model.basis.rows.size() < model.m) {
        std::vector<CycVec> next;
        for (const auto& v : frontier)
            for (std::size_t gen : gens) {
                CycVec t = translate(g, v, gen);
                if (model.basis.insert(t)) next.push_back(model.basis.rows.back());
            }
        frontier = std::move(next);
    }
    if (model.basis.rows.size() != model.m)
        throw std::logic_error("cut ideal dimension does not match the degree");
    // Closure certificate: generator translates of every basis row stay inside.
    for (std::size_t i = 0; i < model.m; ++i)
        for (std::size_t gen : gens)
            if (!model.basis.expand(translate(g, model.basis.rows[i], gen)))
                throw std::logic_error("model space is not closed under translation");

    // Certificates: traces match the character on every class and the action
    // is multiplicative on sampled pairs.
    model.traces_match = true;
    for (std::size_t c = 0; c < classes.count(); ++c) {
        const auto mat = model_matrix(model, g, classes.reps[c]);
        Cyclotomic tr(&ctx);
        for (std::size_t i = 0; i < model.m; ++i) tr += mat[i][i];
        if (tr != table.values[pi][c]) { model.traces_match = false; break; }
    }
    model.multiplicative = true;
    std::mt19937_64 rng(pi * 1000003 + 17);
    std::uniform_int_distribution<std::size_t> pick(0, g.size - 1);
    for (int t = 0; t < 8 && model.multiplicative; ++t) {
        const std::size_t a = pick(rng), b = pick(rng);
        const auto ma = model_matrix(model, g, a);
        const auto mb = model_matrix(model, g, b);
        const auto mab = model_matrix(model, g, g.mul(a, b));
        if (mat_mul(ctx, ma, mb) != mab) model.multiplicative = false;
    }
    return model;
}

IntModelMat to_int_mat(const CyclotomicCtx& ctx, const std::vector<CycVec>& mat) {
    IntModelMat out;
    out.m = mat.size();
    out.deg = ctx.degree();
    // Common denominator of all coefficients.
    BigInt lcm = 1;
    for (const auto& row : mat)
        for (const auto& entry : row)
            for (const auto& c : entry.coefficients())
                lcm = lcm / gcd(lcm, BigInt(c.get_den())) * BigInt(c.get_den());
    if (!lcm.fits_slong_p()) throw std::overflow_error("model denominator too large");
    out.denom = lcm.get_si();
    out.entries.assign(out.m * out.m * out.deg, 0);
    for (std::size_t r = 0; r < out.m; ++r)
        for (std::size_t c = 0; c < out.m; ++c)
            for (unsigned t = 0; t < out.deg; ++t) {
                const Rational v = mat[r][c].coefficients()[t] * Rational(out.denom);
                if (!is_integer(v)) throw std::logic_error("denominator scaling failed");
                const auto [num, den] = to_i64(v);
                (void)den;
                out.entries[(r * out.m + c) * out.deg + t] = num;
            }
    return out;
}

// --- equivariant hom spaces ---------------------------------------------------

struct OrbitTree {
    std::vector<std::int32_t> parent;      // -1 at the base point
    std::vector<std::int8_t> via;          // generator index of the tree edge
    std::vector<std::uint32_t> bfs_order;  // points in traversal order
};

OrbitTree orbit_tree(const UnitaryGroup& u, const std::vector<std::size_t>& gens,
                     std::size_t base, std::size_t module_size) {
    OrbitTree t;
    t.parent.assign(module_size, -2);   // -2 = not in orbit
    t.via.assign(module_size, -1);
    t.parent[base] = -1;
    t.bfs_order.push_back(static_cast<std::uint32_t>(base));
    for (std::size_t head = 0; head < t.bfs_order.size(); ++head) {
        const std::size_t x = t.bfs_order[head];
        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
            const std::size_t y = u.perm[gens[gi]][x];
            if (t.parent[y] != -2) continue;
            t.parent[y] = static_cast<std::int32_t>(x);
            t.via[y] = static_cast<std::int8_t>(gi);
            t.bfs_order.push_back(static_cast<std::uint32_t>(y));
        }
    }
    return t;
}

std::size_t closure_size(const FiniteGroup& g, const std::vector<std::size_t>& gens) {
    std::vector<bool> in(g.size, false);
    std::vector<std::size_t> all{g.identity};
    in[g.identity] = true;
    for (std::size_t head = 0; head < all.size(); ++head)
        for (std::size_t f : gens) {
            const std::size_t y = g.mul(all[head], f);
            if (!in[y]) {
                in[y] = true;
                all.push_back(y);
            }
        }
    return all.size();
}

// Generating set of a subgroup by greedy closure over its member list.
std::vector<std::size_t> subgroup_generators(const FiniteGroup& g,
                                             const std::vector<std::size_t>& members) {
    std::vector<std::size_t> gens;
    std::vector<bool> in_closure(g.size, false);
    in_closure[g.identity] = true;
    auto close_over = [&](std::size_t added) {
        std::vector<std::size_t> frontier{added};
        if (!in_closure[added]) in_closure[added] = true;
        while (!frontier.empty()) {
            std::vector<std::size_t> next;
            for (std::size_t x = 0; x < g.size; ++x) {
                if (!in_closure[x]) continue;
                for (std::size_t f : frontier) {
                    for (std::size_t y : {g.mul(x, f), g.mul(f, x)}) {
                        if (!in_closure[y]) {
                            in_closure[y] = true;
                            next.push_back(y);
                        }
                    }
                }
            }
            frontier = std::move(next);
        }
    };
    for (std::size_t m : members)
        if (!in_closure[m]) {
            gens.push_back(m);
            close_over(m);
        }
    return gens;
}

} // namespace

std::vector<HomSpaceReport> verify_hom_spaces(const WeilDatum& d, const UnitaryGroup& u,
                                              const ClassData& classes,
                                              const CharacterTable& table,
                                              const MultiplicityData& mult,
                                              std::size_t closure_samples_per_pi,
                                              std::uint64_t seed) {
    const CyclotomicCtx& ctx = *table.ctx;
    const unsigned deg = ctx.degree();
    const ModuleSpace& mod = d.module();
    const std::size_t msize = mod.size();
    const FiniteGroup& g = u.structure;

    // A small generating set of U; the standard unipotent pair generates
    // SL_2, with the greedy fallback kept for safety.
    std::vector<std::size_t> gens;
    {
        const auto a = u.find(UnitaryElement{1, 0, 1, 1});
        const auto b = u.find(UnitaryElement{1, 1, 0, 1});
        if (a && b && closure_size(g, {*a, *b}) == g.size) {
            gens = {*a, *b};
        } else {
            std::vector<std::size_t> all(g.size);
            std::iota(all.begin(), all.end(), 0);
            gens = subgroup_generators(g, all);
        }
    }

    const OrbitData orbits = module_orbits(u, msize);
    std::vector<OrbitTree> trees;
    for (std::size_t o = 0; o < orbits.count(); ++o)
        trees.push_back(orbit_tree(u, gens, orbits.base_point[o], msize));

    // Stabilizer generators per orbit.
    std::vector<std::vector<std::size_t>> stab_gens(orbits.count());
    for (std::size_t o = 0; o < orbits.count(); ++o) {
        std::vector<std::size_t> members;
        const std::size_t base = orbits.base_point[o];
        for (std::size_t b = 0; b < g.size; ++b)
            if (u.perm[b][base] == base) members.push_back(b);
        stab_gens[o] = subgroup_generators(g, members);
    }

    // The w kernel exponents for the closure check.
    const GroupCtx& gctx = d.group();
    const unsigned q = gctx.q;
    const unsigned zq_scale = ctx.order() / q;   // zeta_q = zeta_N^(N/q)
    const unsigned meps = gctx.eps == -1 ? 1 : q - 1;
    const FqMatrix scal = FqMatrix::scalar(q, gctx.asize(), meps);
    const TokenTables closure_tables = build_token_tables(gctx);

    std::mt19937_64 rng(seed);
    std::vector<HomSpaceReport> reports;

    for (std::size_t pi = 0; pi < table.count(); ++pi) {
        HomSpaceReport rep;
        rep.pi = pi;
        Model model = extract_model(u, classes, table, pi, gens);
        rep.model_dim = static_cast<long>(model.m);
        rep.model_traces_match = model.traces_match;
        rep.model_multiplicative = model.multiplicative;
        const std::size_t m = model.m;

        // Integer generator action.
        std::vector<IntModelMat> gen_mats;
        for (std::size_t gen : gens)
            gen_mats.push_back(to_int_mat(ctx, model_matrix(model, g, gen)));

        // Fixed space of the stabilizer per orbit (coordinates in the model).
        std::vector<std::vector<CycVec>> fixed_bases(orbits.count());
        long total_dim = 0;
        for (std::size_t o = 0; o < orbits.count(); ++o) {
            // Solve (pi_sigma - 1) c = 0 for all stabilizer generators.
            std::vector<CycVec> constraints;
            for (std::size_t sg : stab_gens[o]) {
                const auto mat = model_matrix(model, g, sg);
                for (std::size_t r = 0; r < m; ++r) {
                    CycVec row = mat[r];
                    row[r] -= Cyclotomic(&ctx, 1);
                    constraints.push_back(std::move(row));
                }
            }
            // Nullspace via RREF of the constraint rows.
            CycRREF rref(&ctx);
            for (auto& row : constraints) rref.insert(std::move(row));
            std::vector<bool> is_pivot(m, false);
            for (std::size_t p : rref.pivots) is_pivot[p] = true;
            for (std::size_t c = 0; c < m; ++c) {
                if (is_pivot[c]) continue;
                CycVec v(m, Cyclotomic(&ctx));
                v[c] = Cyclotomic(&ctx, 1);
                for (std::size_t r = 0; r < rref.rows.size(); ++r)
                    v[rref.pivots[r]] = -rref.rows[r][c];
                fixed_bases[o].push_back(std::move(v));
            }
            total_dim += static_cast<long>(fixed_bases[o].size());
        }
        rep.dimension = total_dim;
        rep.dimension_matches = total_dim == mult.n[pi];

        // Closure under the w kernel for (sampled) basis theta's.
        rep.closed_under_w = true;
        rep.closed_under_hu = true;
        std::size_t budget = closure_samples_per_pi;
        for (std::size_t o = 0; o < orbits.count() && budget > 0; ++o) {
            for (const auto& fv : fixed_bases[o]) {
                if (budget == 0) break;
                --budget;
                ++rep.closure_checked;
                // Integer seed value.
                IntValue base_val;
                {
                    BigInt lcm = 1;
                    for (const auto& c : fv)
                        for (const auto& r : c.coefficients())
                            lcm = lcm / gcd(lcm, BigInt(r.get_den())) * BigInt(r.get_den());
                    if (!lcm.fits_slong_p())
                        throw std::overflow_error("seed denominator too large");
                    base_val.num.assign(m * deg, 0);
                    base_val.denom = 1;
                    for (std::size_t i = 0; i < m; ++i)
                        for (unsigned t = 0; t < deg; ++t) {
                            const Rational v =
                                fv[i].coefficients()[t] * Rational(lcm.get_si());
                            base_val.num[i * deg + t] = to_i64(v).first;
                        }
                }
                // theta over the orbit by tree propagation; zero elsewhere.
                std::vector<IntValue> theta(msize);
                const OrbitTree& tree = trees[o];
                theta[orbits.base_point[o]] = base_val;
                for (std::size_t idx = 1; idx < tree.bfs_order.size(); ++idx) {
                    const std::size_t x = tree.bfs_order[idx];
                    theta[x] = apply_model(ctx, gen_mats[tree.via[x]],
                                           theta[tree.parent[x]]);
                }
                // Common denominator across the orbit.
                BigInt lcm = 1;
                for (const auto& xp : tree.bfs_order)
                    lcm = lcm / gcd(lcm, BigInt(theta[xp].denom)) * BigInt(theta[xp].denom);
                if (!lcm.fits_slong_p()) throw std::overflow_error("theta denominator too large");
                const std::int64_t common = lcm.get_si();
                std::vector<std::int64_t> flat(msize * m * deg, 0);
                for (const auto& xp : tree.bfs_order) {
                    const std::int64_t scale = common / theta[xp].denom;
                    for (std::size_t i = 0; i < m * deg; ++i)
                        flat[xp * m * deg + i] = theta[xp].num[i] * scale;
                }

                // theta'(x) = sum_y zeta^(e(x,y)) theta(y) (the c scale and the
                // common denominator drop out of the membership conditions).
                guard_product_bound(ctx, max_abs(flat), 1,
                                    static_cast<std::int64_t>(msize));
                std::vector<std::int64_t> image(msize * m * deg, 0);
                std::vector<std::int64_t> acc(ctx.order());
                for (std::size_t x = 0; x < msize; ++x) {
                    const std::size_t mx = mod.point_action(x, scal);
                    for (std::size_t i = 0; i < m; ++i) {
                        std::fill(acc.begin(), acc.end(), 0);
                        for (std::size_t y = 0; y < msize; ++y) {
                            const std::int64_t* src = flat.data() + (y * m + i) * deg;
                            const unsigned shift = d.chi_exp(mx, y) * zq_scale % ctx.order();
                            for (unsigned t = 0; t < deg; ++t)
                                if (src[t] != 0) acc[(shift + t) % ctx.order()] += src[t];
                        }
                        const auto folded = fold_redundant(ctx, acc);
                        std::copy(folded.begin(), folded.end(),
                                  image.data() + (x * m + i) * deg);
                    }
                }
                // Membership: d_gen * theta'(gen.x) == P_gen theta'(x) on every
                // Cayley edge of every orbit (zero values included). Edge
                // consistency for both generators at every point is equivalent
                // to the equivariance equation for all of U.
                auto edge_consistent = [&](const std::vector<std::int64_t>& vals) {
                    std::int64_t max_entry = 0;
                    for (const auto& pm : gen_mats)
                        max_entry = std::max(max_entry, max_abs(pm.entries));
                    guard_product_bound(ctx, max_entry, max_abs(vals),
                                        static_cast<std::int64_t>(m));
                    std::vector<std::int64_t> a(deg), b(deg), acc2(ctx.order());
                    for (std::size_t x = 0; x < msize; ++x)
                        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                            const std::size_t y = u.perm[gens[gi]][x];
                            const IntModelMat& pm = gen_mats[gi];
                            for (std::size_t r = 0; r < m; ++r) {
                                std::fill(acc2.begin(), acc2.end(), 0);
                                for (std::size_t c2 = 0; c2 < m; ++c2) {
                                    std::copy(pm.at(r, c2), pm.at(r, c2) + deg, a.begin());
                                    std::copy(vals.begin() + (x * m + c2) * deg,
                                              vals.begin() + (x * m + c2 + 1) * deg, b.begin());
                                    redundant_mul_acc(ctx, a, b, acc2);
                                }
                                const auto rhs = fold_redundant(ctx, acc2);
                                const std::int64_t* lhs = vals.data() + (y * m + r) * deg;
                                for (unsigned t = 0; t < deg; ++t)
                                    if (static_cast<__int128>(lhs[t]) * pm.denom !=
                                        static_cast<__int128>(rhs[t]))
                                        return false;
                            }
                        }
                    return true;
                };
                if (!edge_consistent(image)) rep.closed_under_w = false;

                // Sampled h and u closures: permutation and diagonal twists.
                {
                    const TokenTables& tbl = closure_tables;
                    // h: theta'(x) = theta(x t).
                    const FqMatrix& t =
                        tbl.h_params[rng() % tbl.h_params.size()];
                    std::vector<std::int64_t> himg(msize * m * deg, 0);
                    for (std::size_t x = 0; x < msize; ++x) {
                        const std::size_t src = mod.point_action(x, t);
                        std::copy(flat.begin() + src * m * deg,
                                  flat.begin() + (src + 1) * m * deg,
                                  himg.begin() + x * m * deg);
                    }
                    if (!edge_consistent(himg)) rep.closed_under_hu = false;
                    // u: theta'(x) = zeta^(gamma exp) theta(x).
                    const FqMatrix& s = d.sym_elements()[rng() % d.sym_elements().size()];
                    std::vector<std::int64_t> uimg(msize * m * deg, 0);
                    std::vector<std::int64_t> acc3(ctx.order());
                    for (std::size_t x = 0; x < msize; ++x) {
                        const unsigned shift = d.gamma_exp(s, x) * zq_scale % ctx.order();
                        for (std::size_t i = 0; i < m; ++i) {
                            std::fill(acc3.begin(), acc3.end(), 0);
                            const std::int64_t* src = flat.data() + (x * m + i) * deg;
                            for (unsigned tt = 0; tt < deg; ++tt)
                                if (src[tt] != 0) acc3[(shift + tt) % ctx.order()] += src[tt];
                            const auto folded = fold_redundant(ctx, acc3);
                            std::copy(folded.begin(), folded.end(),
                                      uimg.begin() + (x * m + i) * deg);
                        }
                    }
                    if (!edge_consistent(uimg)) rep.closed_under_hu = false;

                }
            }
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

} // namespace oweil
