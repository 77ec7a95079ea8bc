#pragma once

#include "oweil/unidecomp.hpp"
#include "oweil/weilrep.hpp"

namespace oweil {

/**
 * The symplectic space W = Hom(V1, V2) of 2 x 4n matrices with form
 * <<w1, w2>> = tr(w1 F w2^t J_2), its polarization W = X + Y, and the
 * Schrodinger-model operators on L^2(X). X is identified with M through
 * (x1, x2) -> (x, y), so the kernels compare entrywise with rho.
 */
class DualPairCtx {
public:
    DualPairCtx(const WeilDatum& datum);

    const WeilDatum& datum() const { return *datum_; }
    const FqMatrix& f_matrix() const { return f_; }

    // <<w1, w2>> for 2 x 4n matrices over F_q.
    unsigned symplectic_form(const FqMatrix& w1, const FqMatrix& w2) const;

    // Module point as the X element [[x1, 0], [x2, 0]].
    FqMatrix embed_point(std::size_t p) const;
    std::size_t point_of(const FqMatrix& x) const;

    // Schrodinger operators per generator token on L^2(X).
    WeilOperator schrodinger_operator(const GeneratorToken& tok, bool parallel = false) const;

    // omega(g) f(x) = f(g^-1 x) for g in SL_2(F_q) acting on the left.
    WeilOperator sl2_operator(const FqMatrix& g) const;

private:
    const WeilDatum* datum_;
    FqMatrix f_;          // [[0, J], [-J, 0]]
    FqMatrix j2_;         // [[0, 1], [-1, 0]] over F_q
    unsigned inv2_;       // (2)^-1 mod q for the Cayley transform
};

struct DualPairReport {
    bool form_alternating = false;      // <<w, w>> = 0, sampled
    bool form_skew = false;             // <<w1, w2>> = -<<w2, w1>>, sampled
    bool form_nondegenerate = false;    // Gram rank over a basis of W
    bool g_invariant = false;           // <<w1 g^-1, w2 g^-1>> = <<w1, w2>>, sampled
    bool h_match = false;               // omega(h_a) = rho(h_a), all a
    bool u_match = false;               // omega(u_s) = rho(u_s), all s
    bool w_match = false;               // omega(w) = rho(w)
    bool kernel_identity = false;       // chi(x, x') = psi(<<x w^-1, x'>>) entrywise
    bool sl2_matches_sigma = false;     // all |U| elements
    std::uint64_t h_checked = 0, u_checked = 0, sl2_checked = 0, invariance_samples = 0;
    std::string first_failure;
    bool all_pass() const {
        return form_alternating && form_skew && form_nondegenerate && g_invariant &&
               h_match && u_match && w_match && kernel_identity && sl2_matches_sigma;
    }
};

DualPairReport compare_models(const WeilDatum& d, const TokenTables& tables,
                              const UnitaryGroup& u, const GroupTable& table,
                              std::size_t invariance_samples = 1000,
                              std::uint64_t seed = 1, bool parallel = false);

} // namespace oweil
