#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oweil/chartable.hpp"
#include "oweil/weilrep.hpp"

namespace oweil {

/// Scalar-block automorphism beta(x, y) = (b1 x + b3 y, b2 x + b4 y) of M.
struct UnitaryElement {
    unsigned b1 = 1, b2 = 0, b3 = 0, b4 = 1;
    bool operator==(const UnitaryElement& o) const {
        return b1 == o.b1 && b2 == o.b2 && b3 == o.b3 && b4 == o.b4;
    }
};

/**
 * The unitary group of the datum: all A-linear automorphisms preserving
 * gamma (and chi). Found by brute force over scalar-block candidates, with
 * the A-linearity commutant argument verified separately: any A-linear map
 * has scalar blocks, so the scan is exhaustive over all of them.
 */
struct UnitaryGroup {
    std::vector<UnitaryElement> elements;
    std::size_t identity = 0;
    FiniteGroup structure;                         // mult/inv tables
    std::vector<std::vector<std::uint32_t>> perm;  // [i][point] -> beta_i . point
    std::vector<std::uint32_t> fix_count;          // fixed points per element

    // Scan diagnostics.
    bool commutant_is_scalar = false;   // A-linear maps have scalar blocks
    bool dets_are_one = false;          // every member has b1 b4 - b2 b3 = 1
    bool cond2_sampled_ok = false;      // chi-invariance on sampled pairs
    std::uint64_t candidates_checked = 0;

    std::size_t order() const { return elements.size(); }
    std::optional<std::size_t> find(const UnitaryElement& e) const;
};

UnitaryGroup unitary_group(const WeilDatum& d, std::uint64_t seed = 1,
                           std::size_t chi_samples = 200);

// sigma_beta f(x) = f(beta^-1 . x), as a permutation operator.
WeilOperator sigma_operator(const WeilDatum& d, const UnitaryGroup& u, std::size_t i);

// sigma_beta rho(tok) = rho(tok) sigma_beta for every beta and every token
// in the tables; exact. This is the basis for projector commutation: each
// projector is a finite linear combination of the sigma_beta.
struct CommutationReport {
    std::uint64_t pairs_checked = 0;
    bool all_commute = false;
    std::string first_failure;
};
CommutationReport check_sigma_commutation(const WeilDatum& d, const UnitaryGroup& u,
                                          const TokenTables& tables, bool parallel = false);

struct MultiplicityData {
    std::vector<long> fix_per_class;      // permutation character
    bool fix_formula_ok = false;          // q^(2n dim ker(beta - 1)) cross-check
    std::vector<long> n;                  // multiplicity per irreducible
    bool integral = false;                // inner products are integers >= 0
    bool dimension_identity = false;      // sum n_pi m_pi = |M|
};
MultiplicityData multiplicities(const WeilDatum& d, const UnitaryGroup& u,
                                const ClassData& classes, const CharacterTable& table);

/**
 * Isotypic projectors P_pi = (m_pi/|U|) sum_beta conj(chi_pi(beta)) sigma_beta.
 *
 * The projector algebra is verified exactly through the averaged-operator
 * identity: a product of U-averaged operators is the U-averaged operator of
 * the convolved coefficient function (a finite-sum rearrangement), so
 * P_i P_j - delta_ij P_i = 0 is checked entrywise as sum_{beta z = x}
 * h(beta) = 0 for the convolution-difference h. A direct mpq spot check of
 * sampled entries guards the machinery itself.
 */
struct IsotypicReport {
    std::vector<long> ranks;             // trace(P_pi), = n_pi m_pi
    bool ranks_match = false;
    bool idempotent = false;
    bool mutually_orthogonal = false;
    bool complete = false;               // sum P_pi = identity
    bool commutes_with_rho = false;      // via exhaustive sigma commutation
    bool direct_spot_ok = false;         // definition-level mpq spot entries
    std::string first_failure;
};
IsotypicReport verify_isotypic_projectors(const WeilDatum& d, const UnitaryGroup& u,
                                          const ClassData& classes,
                                          const CharacterTable& table,
                                          const MultiplicityData& mult,
                                          const CommutationReport& commutation,
                                          std::uint64_t seed = 1);

// Exact projector entry (m_pi/|U|) sum_{beta . y = x} conj(chi_pi(beta)).
Cyclotomic projector_entry(const UnitaryGroup& u, const ClassData& classes,
                           const CharacterTable& table, std::size_t pi,
                           std::size_t x, std::size_t y);

/**
 * Equivariant hom spaces: V_pi-valued maps theta with theta(beta.x) =
 * pi_beta theta(x). The matrix model of pi is cut out of the regular
 * representation by a rank-1 idempotent e_pi f_C for a cyclic subgroup
 * character (C, lambda) of restriction multiplicity one.
 */
struct HomSpaceReport {
    std::size_t pi = 0;
    long model_dim = 0;
    bool model_traces_match = false;     // trace(pi_beta) = chi(beta) on classes
    bool model_multiplicative = false;   // sampled pairs
    long dimension = 0;                  // sum over orbits of fixed-space dims
    bool dimension_matches = false;      // equals n_pi
    std::size_t closure_checked = 0;     // basis vectors pushed through rho_w
    bool closed_under_w = false;
    bool closed_under_hu = false;        // sampled h and u tokens
    std::string note;
};
std::vector<HomSpaceReport> verify_hom_spaces(const WeilDatum& d, const UnitaryGroup& u,
                                              const ClassData& classes,
                                              const CharacterTable& table,
                                              const MultiplicityData& mult,
                                              std::size_t closure_samples_per_pi,
                                              std::uint64_t seed = 1);

// Orbits of U on M; Burnside count used as the trivial-character oracle.
struct OrbitData {
    std::vector<std::uint32_t> orbit_of;
    std::vector<std::uint32_t> base_point;
    std::vector<std::uint32_t> sizes;
    std::size_t count() const { return base_point.size(); }
};
OrbitData module_orbits(const UnitaryGroup& u, std::size_t module_size);

} // namespace oweil
