#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "oweil/weildata.hpp"
#include "oweil/weilop.hpp"

namespace oweil {

/**
 * The representation rho on L^2(M) built from the datum: permutation
 * operators for h_t, diagonal character operators for u_s, and the dense
 * c-scaled chi kernel for w. Arbitrary elements are products along their
 * generator words; operators are memoized per element up to a size cap.
 */
class WeilRep {
public:
    WeilRep(const WeilDatum& datum, const TokenTables& tables,
            bool parallel = false, std::size_t memo_cap = 64);

    const WeilDatum& datum() const { return *datum_; }
    const TokenTables& tables() const { return *tables_; }
    bool parallel() const { return parallel_; }

    WeilOperator generator_operator(const GeneratorToken& tok) const;
    WeilOperator token_operator(std::int32_t code) const;
    WeilOperator word_operator(const std::vector<std::int32_t>& word) const;

    // Operator of a stored group element. Memoized by packed matrix key up to
    // the cap; concurrent insert-if-absent is safe and the winner is
    // deterministic because the value is a function of the key.
    WeilOperator element_operator(const GroupTable& table, std::size_t index);

private:
    const WeilDatum* datum_;
    const TokenTables* tables_;
    bool parallel_;
    std::size_t memo_cap_;
    std::mutex memo_mutex_;
    std::unordered_map<std::uint64_t, WeilOperator> memo_;
};

struct OperatorRelationReport {
    std::vector<RelationCheck> relations;
    bool all_pass() const {
        for (const auto& r : relations)
            if (!r.pass) return false;
        return !relations.empty();
    }
};
// The five defining relations as exact operator identities, over the same
// parameter census as the matrix-level verifier.
OperatorRelationReport verify_operator_relations(WeilRep& rep);

struct PairCheckReport {
    std::uint64_t pairs = 0;
    std::uint64_t failures = 0;
    std::string first_failure;
};
// rho(g) rho(h) == rho(gh) for seeded random pairs from the group table.
PairCheckReport check_pair_consistency(WeilRep& rep, const GroupTable& table,
                                       std::size_t pairs, std::uint64_t seed);

struct UnitarityReport {
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
};
// All generator operators plus seeded random elements.
UnitarityReport check_unitarity(WeilRep& rep, const GroupTable& table,
                                std::size_t element_samples, std::uint64_t seed);

// rho(w)^2 = rho(h_-1) and rho(h_-1) is the point reflection f(x) -> f(-x).
bool check_w_square_reflection(WeilRep& rep);

// The intertwiner Psi f(x, y) = f(x, lambda y) between the psi_1 and psi_2
// representations; verifies Psi rho1(tok) = rho2(tok) Psi on every token.
struct IntertwinerReport {
    bool permutation = false;
    std::uint64_t tokens_checked = 0;
    bool intertwines = false;
};
IntertwinerReport psi_equivalence(const WeilDatum& d1, const WeilDatum& d2,
                                  const TokenTables& tables, bool parallel = false);

} // namespace oweil
