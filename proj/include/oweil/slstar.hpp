#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oweil/fqmatrix.hpp"

namespace oweil {

struct CacheError : std::runtime_error {
    explicit CacheError(const std::string& what) : std::runtime_error(what) {}
};
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * Context for the group of 2x2 matrices over A = M_{2n}(F_q) preserving the
 * eps-hermitian form J_eps, with * one of the two involutions on A. The
 * split orthogonal construction uses (Tilde, eps = -1); the duality check
 * also instantiates (Transpose, eps = +1).
 */
struct GroupCtx {
    unsigned q = 5;
    unsigned n = 1;
    Involution inv = Involution::Tilde;
    int eps = -1;

    unsigned asize() const { return 2 * n; }   // A = M_{2n}(F_q)
    unsigned dim() const { return 4 * n; }     // elements are 4n x 4n over F_q
    FqMatrix jeps() const;                     // [[0, I], [eps I, 0]]
    bool operator==(const GroupCtx& o) const {
        return q == o.q && n == o.n && inv == o.inv && eps == o.eps;
    }
};

// Defining test T J_eps T^* = J_eps together with the five block identities
// that characterize membership; both verdicts must agree.
struct MembershipDetail {
    bool defining = false;
    bool identities = false;
};
MembershipDetail membership_tests(const GroupCtx& ctx, const FqMatrix& t);
bool is_member(const GroupCtx& ctx, const FqMatrix& t);

struct GeneratorToken {
    enum class Kind { W, U, H };
    Kind kind = Kind::W;
    FqMatrix param;    // t for H (invertible), s for U (eps-symmetric)

    static GeneratorToken w() { return GeneratorToken{Kind::W, FqMatrix()}; }
    static GeneratorToken u(FqMatrix s) { return GeneratorToken{Kind::U, std::move(s)}; }
    static GeneratorToken h(FqMatrix t) { return GeneratorToken{Kind::H, std::move(t)}; }
};

struct GroupElement {
    FqMatrix mat;
    std::vector<std::int32_t> word;   // token codes, evaluated left to right
};

/**
 * Parameter tables for the Bruhat generators. Exhaustive for small A
 * (everything at n = 1); sampled above the threshold.
 *
 * Token codes: 0 = w, 1..S = u_(s_params[code-1]),
 * S+1..S+H = h_(h_params[code-S-1]).
 */
struct TokenTables {
    std::vector<FqMatrix> h_params;
    std::vector<FqMatrix> s_params;           // full eps-symmetric space
    std::vector<FqMatrix> s_invertible;       // invertible eps-symmetric
    bool exhaustive = false;

    std::size_t token_count() const { return 1 + s_params.size() + h_params.size(); }
    GeneratorToken token(std::int32_t code) const;
};
TokenTables build_token_tables(const GroupCtx& ctx, std::size_t exhaustive_limit = 10000,
                               std::size_t sample_size = 1000, std::uint64_t seed = 1);

FqMatrix token_matrix(const GroupCtx& ctx, const GeneratorToken& tok);
GroupElement generator(const GroupCtx& ctx, const GeneratorToken& tok);
FqMatrix evaluate_word(const GroupCtx& ctx, const TokenTables& tables,
                       const std::vector<std::int32_t>& word);

struct RelationCheck {
    std::string name;
    bool pass = false;
    std::uint64_t checked = 0;
    std::string failure;
};
struct PresentationReport {
    std::vector<RelationCheck> relations;
    bool exhaustive = false;
    bool all_pass() const {
        for (const auto& r : relations)
            if (!r.pass) return false;
        return !relations.empty();
    }
};
// Checks the five defining relations as exact matrix identities over all
// admissible parameters (or a seeded sample when the tables are sampled).
PresentationReport verify_presentation(const GroupCtx& ctx, const TokenTables& tables);

/**
 * BFS closure of the generator set, recording one shortest word per element.
 * Elements are hash-indexed by the packed matrix; insertion order is BFS
 * order, so parent chains give shortest words.
 *
 * The closure is the subgroup the generators actually generate. Because all
 * Bruhat generators have determinant 1, it is the determinant-1 subgroup of
 * the membership set, of index 2; order() is half of oracle_order.
 */
class GroupTable {
public:
    GroupCtx ctx;
    std::uint64_t oracle_order = 0;                   // classical order formula
    std::vector<std::array<std::uint8_t, 16>> mats;   // dim 4 elements only
    std::vector<std::int32_t> parent;                 // -1 for roots
    std::vector<std::int32_t> via;                    // token code from parent
    std::uint64_t order() const { return mats.size(); }

    FqMatrix matrix_of(std::size_t i) const;
    std::vector<std::int32_t> word_of(std::size_t i) const;
    std::optional<std::size_t> find(const FqMatrix& m) const;

    void build_index();
    std::vector<std::uint64_t> keys;                  // packed matrices
private:
    std::vector<std::uint64_t> slots_;                // open addressing
    std::vector<std::uint32_t> slot_val_;
    std::size_t mask_ = 0;
    friend GroupTable enumerate_group(const GroupCtx&, const TokenTables&, std::uint64_t);
};

std::uint64_t group_order_oracle(unsigned n, unsigned q);

GroupTable enumerate_group(const GroupCtx& ctx, const TokenTables& tables,
                           std::uint64_t budget = 10000000);

// A membership element of determinant -1 (a Gram reflection, conjugated into
// the tilde picture when needed); witnesses that the closure is proper.
FqMatrix determinant_minus_member(const GroupCtx& ctx);

/**
 * The full membership set {T : T J_eps T^* = J_eps}: the BFS closure plus the
 * reflection coset when the closure is proper. Every coset element is
 * membership-checked; matches_oracle compares against the classical order.
 */
struct MembershipEnumeration {
    std::vector<FqMatrix> elements;     // closure first, then the coset
    std::uint64_t closure_order = 0;
    bool closure_is_proper = false;
    bool all_members = false;
    bool coset_disjoint = false;
    bool matches_oracle = false;
};
MembershipEnumeration enumerate_membership_group(const GroupCtx& ctx,
                                                 const TokenTables& tables,
                                                 std::uint64_t budget = 10000000);

// Binary cache with a parameter header; loading validates the header and a
// checksum and throws CacheError on any mismatch.
void save_group_table(const std::string& path, const GroupTable& table);
GroupTable load_group_table(const std::string& path, const GroupCtx& expected);

// Conjugation realizing the isomorphism SL^+_transpose -> SL^-_tilde.
FqMatrix duality_map(const GroupCtx& source, const FqMatrix& t);

struct DualityReport {
    bool structural = false;       // P J+ P* = J- U
    bool members_forward = false;  // images land in the tilde group
    bool members_back = false;     // preimages of the tilde group are members
    bool image_matches = false;    // image set equals the enumerated target
    bool homomorphic = false;      // multiplicativity on sampled pairs
    std::uint64_t source_order = 0;
    std::uint64_t target_order = 0;
    bool all_pass() const {
        return structural && members_forward && members_back && image_matches && homomorphic;
    }
};
DualityReport verify_duality(unsigned n, unsigned q, std::uint64_t seed = 1,
                             std::size_t pair_samples = 1000);

} // namespace oweil
