#include "oweil/chartable.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace oweil {

namespace {

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

unsigned primitive_root(unsigned p) {
    std::vector<unsigned> prime_factors;
    unsigned m = p - 1;
    for (unsigned d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            prime_factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) prime_factors.push_back(m);
    for (unsigned g = 2; g < p; ++g) {
        bool ok = true;
        for (unsigned f : prime_factors)
            if (powmod(g, (p - 1) / f, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root found");
}

// Nullspace basis of an r x c matrix over F_ell.
std::vector<std::vector<std::uint64_t>> nullspace_mod(std::vector<std::uint64_t> m,
                                                      std::size_t rows, std::size_t cols,
                                                      std::uint64_t ell) {
    std::vector<int> pivot_of_col(cols, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pr = rows;
        for (std::size_t r = rank; r < rows; ++r)
            if (m[r * cols + col] % ell != 0) { pr = r; break; }
        if (pr == rows) continue;
        for (std::size_t j = 0; j < cols; ++j) std::swap(m[pr * cols + j], m[rank * cols + j]);
        const std::uint64_t pinv = invmod(m[rank * cols + col], ell);
        for (std::size_t j = 0; j < cols; ++j) m[rank * cols + j] = m[rank * cols + j] * pinv % ell;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank) continue;
            const std::uint64_t f = m[r * cols + col] % ell;
            if (!f) continue;
            for (std::size_t j = 0; j < cols; ++j)
                m[r * cols + j] = (m[r * cols + j] + (ell - f) * m[rank * cols + j]) % ell;
        }
        pivot_of_col[col] = static_cast<int>(rank);
        ++rank;
    }
    std::vector<std::vector<std::uint64_t>> basis;
    for (std::size_t col = 0; col < cols; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        std::vector<std::uint64_t> v(cols, 0);
        v[col] = 1;
        for (std::size_t c2 = 0; c2 < cols; ++c2)
            if (pivot_of_col[c2] >= 0)
                v[c2] = (ell - m[pivot_of_col[c2] * cols + col] % ell) % ell;
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace

ClassData conjugacy_classes(const FiniteGroup& g) {
    ClassData cd;
    const std::size_t n = g.size;
    cd.class_of.assign(n, 0xFFFFFFFFu);
    for (std::size_t a = 0; a < n; ++a) {
        if (cd.class_of[a] != 0xFFFFFFFFu) continue;
        const auto cls = static_cast<std::uint32_t>(cd.reps.size());
        cd.reps.push_back(static_cast<std::uint32_t>(a));
        std::uint32_t size = 0;
        for (std::size_t h = 0; h < n; ++h) {
            const std::size_t conj = g.mul(g.mul(h, a), g.inverse(h));
            if (cd.class_of[conj] == 0xFFFFFFFFu) {
                cd.class_of[conj] = cls;
                ++size;
            }
        }
        cd.sizes.push_back(size);
    }
    cd.inverse_class.resize(cd.count());
    for (std::size_t c = 0; c < cd.count(); ++c)
        cd.inverse_class[c] = cd.class_of[g.inverse(cd.reps[c])];
    cd.element_order.assign(n, 1);
    cd.exponent = 1;
    for (std::size_t a = 0; a < n; ++a) {
        unsigned order = 1;
        std::size_t cur = a;
        while (cur != g.identity) {
            cur = g.mul(cur, a);
            ++order;
        }
        cd.element_order[a] = order;
        cd.exponent = static_cast<unsigned>(std::lcm<std::uint64_t>(cd.exponent, order));
    }
    return cd;
}

unsigned smallest_dixon_prime(unsigned exponent, std::uint64_t group_order) {
    for (std::uint64_t ell = exponent + 1;; ell += exponent)
        if (is_prime(ell) && group_order % ell != 0) return static_cast<unsigned>(ell);
}

CharacterTable character_table(const FiniteGroup& g, const ClassData& cd,
                               std::shared_ptr<const CyclotomicCtx> ctx) {
    const std::size_t k = cd.count();
    const std::uint64_t order = g.size;
    CharacterTable table;
    table.ctx = ctx;
    if (ctx->order() % cd.exponent != 0)
        throw std::invalid_argument("cyclotomic order must be divisible by the group exponent");
    const std::uint64_t ell = smallest_dixon_prime(cd.exponent, order);
    table.ell = static_cast<unsigned>(ell);

    // Class-sum structure constants a[i][j][k2] = #{(u,v) in Ci x Cj : uv = rep_k2}.
    std::vector<std::uint64_t> a(k * k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t u = 0; u < g.size; ++u) {
            if (cd.class_of[u] != i) continue;
            for (std::size_t k2 = 0; k2 < k; ++k2) {
                const std::size_t v = g.mul(g.inverse(u), cd.reps[k2]);
                a[(i * k + cd.class_of[v]) * k + k2] += 1;
            }
        }
    }

    // Split common eigenspaces of the class matrices M_i over F_ell. M_i acts
    // on class functions by (M_i x)_k2 = sum_j a[i][j][k2] x_j.
    std::vector<std::vector<std::vector<std::uint64_t>>> spaces;
    {
        std::vector<std::vector<std::uint64_t>> full;
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<std::uint64_t> e(k, 0);
            e[j] = 1;
            full.push_back(std::move(e));
        }
        spaces.push_back(std::move(full));
    }
    for (std::size_t i = 1; i < k; ++i) {
        std::vector<std::vector<std::vector<std::uint64_t>>> next;
        for (auto& space : spaces) {
            if (space.size() <= 1) { next.push_back(std::move(space)); continue; }
            const std::size_t dim = space.size();
            // M_i applied to each basis vector.
            std::vector<std::uint64_t> image(k * dim, 0);
            for (std::size_t b = 0; b < dim; ++b)
                for (std::size_t k2 = 0; k2 < k; ++k2) {
                    std::uint64_t acc = 0;
                    for (std::size_t j = 0; j < k; ++j)
                        acc = (acc + a[(i * k + j) * k + k2] * space[b][j]) % ell;
                    image[k2 * dim + b] = acc;
                }
            bool split_any = false;
            for (std::uint64_t lam = 0; lam < ell; ++lam) {
                // Kernel of (M_i - lam) restricted to the space.
                std::vector<std::uint64_t> sys(k * dim);
                for (std::size_t k2 = 0; k2 < k; ++k2)
                    for (std::size_t b = 0; b < dim; ++b)
                        sys[k2 * dim + b] =
                            (image[k2 * dim + b] + (ell - lam) * space[b][k2]) % ell;
                auto kernel = nullspace_mod(std::move(sys), k, dim, ell);
                if (kernel.empty() || kernel.size() == dim) continue;
                split_any = true;
                std::vector<std::vector<std::uint64_t>> sub;
                for (const auto& coeff : kernel) {
                    std::vector<std::uint64_t> v(k, 0);
                    for (std::size_t b = 0; b < dim; ++b)
                        for (std::size_t k2 = 0; k2 < k; ++k2)
                            v[k2] = (v[k2] + coeff[b] * space[b][k2]) % ell;
                    sub.push_back(std::move(v));
                }
                next.push_back(std::move(sub));
            }
            if (!split_any) next.push_back(std::move(space));
        }
        spaces = std::move(next);
        bool all_one = true;
        for (const auto& s : spaces) all_one = all_one && s.size() == 1;
        if (all_one) break;
    }
    if (spaces.size() != k)
        throw std::logic_error("class matrices did not split into k common eigenvectors");

    const std::size_t id_class = cd.class_of[g.identity];
    const unsigned z = primitive_root(static_cast<unsigned>(ell));

    // Recover degrees and lift each character.
    struct Row {
        long dim;
        std::vector<Cyclotomic> values;
        std::string sort_key;
    };
    std::vector<Row> rows;
    for (const auto& space : spaces) {
        // The eigenvalues of the class matrices on this common eigenvector are
        // the central characters omega_i = |C_i| chi(g_i) / chi(1).
        const std::vector<std::uint64_t>& v = space[0];
        std::size_t k0 = k;
        for (std::size_t j = 0; j < k; ++j)
            if (v[j] % ell != 0) { k0 = j; break; }
        if (k0 == k) throw std::logic_error("zero eigenvector");
        const std::uint64_t vk0_inv = invmod(v[k0], ell);
        std::vector<std::uint64_t> omega(k);
        for (std::size_t i = 0; i < k; ++i) {
            std::uint64_t wk0 = 0;
            for (std::size_t j = 0; j < k; ++j)
                wk0 = (wk0 + a[(i * k + j) * k + k0] * v[j]) % ell;
            omega[i] = wk0 * vk0_inv % ell;
            // Proportionality sanity: M_i v = omega_i v on every coordinate.
            for (std::size_t k2 = 0; k2 < k; ++k2) {
                std::uint64_t wk2 = 0;
                for (std::size_t j = 0; j < k; ++j)
                    wk2 = (wk2 + a[(i * k + j) * k + k2] * v[j]) % ell;
                if (wk2 != omega[i] * v[k2] % ell)
                    throw std::logic_error("not a common eigenvector");
            }
        }
        if (omega[id_class] != 1)
            throw std::logic_error("identity class eigenvalue is not one");

        // d^2 = |U| / sum_i omega_i omega_i* / |C_i|.
        std::uint64_t denom = 0;
        for (std::size_t i = 0; i < k; ++i)
            denom = (denom + omega[i] * omega[cd.inverse_class[i]] % ell *
                                 invmod(cd.sizes[i], ell)) %
                    ell;
        const std::uint64_t d2 = order % ell * invmod(denom, ell) % ell;
        long dim = 0;
        for (long d = 1; static_cast<std::uint64_t>(d) * d <= order; ++d)
            if (static_cast<std::uint64_t>(d) * d % ell == d2) { dim = d; break; }
        if (dim == 0) throw std::logic_error("degree recovery failed");

        // chi(rep_i) mod ell.
        std::vector<std::uint64_t> chi_mod(k);
        for (std::size_t i = 0; i < k; ++i)
            chi_mod[i] = static_cast<std::uint64_t>(dim) % ell * omega[i] % ell *
                         invmod(cd.sizes[i], ell) % ell;

        // Lift: chi(g) = sum_t mu_t zeta_e^t with mu_t the multiplicity of
        // eigenvalue zeta_e^t, recovered mod ell from the power map.
        Row row;
        row.dim = dim;
        row.values.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t rep = cd.reps[i];
            const unsigned e = cd.element_order[rep];
            const std::uint64_t ze = powmod(z, (ell - 1) / e, ell);
            const std::uint64_t einv = invmod(e % ell, ell);
            Cyclotomic val(ctx.get());
            std::size_t cur = g.identity;
            std::vector<std::uint64_t> chi_pow(e);
            for (unsigned s = 0; s < e; ++s) {
                chi_pow[s] = chi_mod[cd.class_of[cur]];
                cur = g.mul(cur, rep);
            }
            const std::uint64_t zinv = invmod(ze, ell);
            for (unsigned t = 0; t < e; ++t) {
                // mu_t = (1/e) sum_s chi(g^s) zeta_e^(-st), computed mod ell.
                std::uint64_t mu = 0;
                for (unsigned s = 0; s < e; ++s)
                    mu = (mu + chi_pow[s] * powmod(zinv, static_cast<std::uint64_t>(s) * t %
                                                             (ell - 1),
                                                   ell)) %
                         ell;
                mu = mu * einv % ell;
                if (mu == 0) continue;
                if (mu > static_cast<std::uint64_t>(dim))
                    throw std::logic_error("eigenvalue multiplicity exceeds the degree");
                val += zeta_pow(*ctx, static_cast<long>(t) * (ctx->order() / e)) *
                       Rational(static_cast<long>(mu));
            }
            row.values.push_back(std::move(val));
        }
        rows.push_back(std::move(row));
    }

    // Canonical order: by degree, then by the value list rendering.
    for (auto& row : rows) {
        row.sort_key = std::to_string(row.dim) + "|";
        for (const auto& v : row.values) row.sort_key += v.to_string() + ";";
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& a2, const Row& b2) {
                  return a2.dim != b2.dim ? a2.dim < b2.dim : a2.sort_key < b2.sort_key;
              });
    for (auto& row : rows) {
        table.dims.push_back(row.dim);
        table.values.push_back(std::move(row.values));
    }

    // Exact verification over Q(zeta_N).
    std::uint64_t sumsq = 0;
    for (long d : table.dims) sumsq += static_cast<std::uint64_t>(d) * d;
    table.dims_consistent = sumsq == order;

    table.row_orthogonal = true;
    for (std::size_t a2 = 0; a2 < k && table.row_orthogonal; ++a2)
        for (std::size_t b2 = 0; b2 < k; ++b2) {
            Cyclotomic acc(ctx.get());
            for (std::size_t i = 0; i < k; ++i)
                acc += table.values[a2][i] * conjugate(table.values[b2][i]) *
                       Rational(static_cast<long>(cd.sizes[i]));
            const Cyclotomic expect(ctx.get(),
                                    a2 == b2 ? Rational(static_cast<long>(order)) : Rational(0));
            if (acc != expect) { table.row_orthogonal = false; break; }
        }

    table.col_orthogonal = true;
    for (std::size_t i = 0; i < k && table.col_orthogonal; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Cyclotomic acc(ctx.get());
            for (std::size_t a2 = 0; a2 < k; ++a2)
                acc += table.values[a2][i] * conjugate(table.values[a2][j]);
            const Cyclotomic expect(
                ctx.get(), i == j ? Rational(static_cast<long>(order / cd.sizes[i])) : Rational(0));
            if (acc != expect) { table.col_orthogonal = false; break; }
        }

    return table;
}

} // namespace oweil
