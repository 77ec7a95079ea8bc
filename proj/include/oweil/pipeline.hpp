#pragma once

#include <string>

#include "json.hpp"
#include "oweil/dualpair.hpp"

namespace oweil {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * Shared configuration of the command pipelines. A fixed config (including
 * the seed) produces byte-identical reports.
 */
struct RunConfig {
    unsigned q = 5;
    unsigned n = 1;
    unsigned lambda = 1;
    std::string backend = "exact";   // exact | float
    std::uint64_t seed = 1;
    std::uint64_t budget = 10000000;
    std::string cache_dir;           // empty: no cache
    std::string format = "json";     // json | text
    bool parallel = false;
    std::size_t pair_samples = 1000;
    std::size_t unitary_samples = 100;
    std::size_t closure_samples = 1000;   // hom-space closure budget per pi
};

// Throws UsageError on invalid parameters (exit code 2 at the CLI).
void validate_config(const RunConfig& cfg);

struct CommandResult {
    int exit_code = 0;   // 0 pass, 1 math check failed, 2 usage, 3 cache/env
    Json report;
};

CommandResult cmd_verify_presentation(const RunConfig& cfg);
CommandResult cmd_build_rep(const RunConfig& cfg);
CommandResult cmd_decompose(const RunConfig& cfg);
CommandResult cmd_dual_pair(const RunConfig& cfg);

// Operator JSON dump: entries as exact cyclotomic coefficient strings.
Json operator_to_json(const WeilOperator& op, const CyclotomicCtx& ctx);

// Character table CSV (exact coefficient lists) and multiplicity CSV.
std::string character_table_csv(const CharacterTable& table, const ClassData& classes);
std::string multiplicity_csv(const CharacterTable& table, const MultiplicityData& mult);

std::string render_report(const CommandResult& result, const std::string& format);

// Group table via the cache directory when set; falls back to enumeration.
GroupTable load_or_enumerate(const GroupCtx& ctx, const TokenTables& tables,
                             const RunConfig& cfg);

} // namespace oweil
