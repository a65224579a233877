#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "roundsearch/game.hpp"

namespace roundsearch {

nlohmann::json to_json(const GameResult& result);

// --- suites --------------------------------------------------------------------

/// Adversaries every strategy is checked against: the lower-bound rules
/// (lemma only for d = 1), truthful hidden sets ∅, {1}, {n}, [n], and a
/// seeded random one.
std::vector<std::string> suite_adversaries(const GameConfig& config);

/// The round-splitting algorithm for this d ("katona" or "katona-parallel").
std::string splitting_questioner(const GameConfig& config);

/// Asks nothing until the last round, then only {1}. Cheap enough to expose
/// an adversary that gives singletons away.
class LastRoundProbe final : public Questioner {
public:
    explicit LastRoundProbe(const GameConfig& config) : config_(config) {}
    std::string name() const override { return "probe"; }
    std::vector<Query> next_round(const KnowledgeState& state, int round) override;
    std::optional<Verdict> verdict(const KnowledgeState& state) override;

private:
    GameConfig config_;
};

// --- sweep ---------------------------------------------------------------------

struct SweepSpec {
    enum class Format { csv, json };

    std::vector<int> ns;
    std::vector<int> ds;
    std::vector<int> rs;
    std::vector<std::pair<std::string, std::string>> pairs;  ///< (questioner, adversary)
    std::uint64_t seed = 0;
    Format format = Format::csv;
};

struct SweepRow {
    GameConfig config;
    std::string questioner;
    std::string adversary;
    std::int64_t total_queries = 0;
    double lower = 0;
    std::int64_t upper_alg = 0;
    std::string verdict;
    bool valid = false;
    bool bound_ok = true;
};

struct SweepOutcome {
    std::vector<SweepRow> rows;
    std::int64_t bound_violations = 0;
    std::optional<std::string> error;  ///< set when a game failed; rows hold what finished
};

/// Fixed CSV schema.
inline constexpr const char* kSweepColumns = "n,d,r,questioner,adversary,total_queries,lower,upper_alg,verdict,valid";

/// Plays every (n, d, r) × pair in that nested order, skipping d > n. Row i
/// uses seed derive_seed(spec.seed, i). Stops at the first failing game.
SweepOutcome run_sweep(const SweepSpec& spec, const std::function<void(const SweepRow&)>& on_row = {});

std::string csv_row(const SweepRow& row);

/// Runs the sweep and writes it in the requested format. CSV rows are flushed
/// as they finish; a trailing "# bound_violations=<c>" line follows when
/// rows exist and "# error=<msg>" when the sweep stopped early. Returns the
/// outcome for the caller to choose an exit status.
SweepOutcome write_sweep(const SweepSpec& spec, std::ostream& out);

// --- verify --------------------------------------------------------------------

struct VerifyOptions {
    enum class Level { quick, full };
    Level level = Level::quick;
    std::uint64_t seed = 0;
    /// "mutant" swaps every lower-bound adversary for one that gives away
    /// last-round singletons; verification must then fail.
    std::optional<std::string> inject_fault;
};

struct InvariantResult {
    std::string module;
    std::string name;
    bool passed = true;
    std::int64_t cases = 0;
    std::string detail;
    double seconds = 0;
};

struct VerifyReport {
    std::vector<InvariantResult> results;
    bool passed() const;
    const InvariantResult* first_failure() const;
};

/// Runs every module's invariant suite. Each invariant keeps the first
/// counterexample it meets in `detail`.
VerifyReport verify(const VerifyOptions& options,
                    const std::function<void(const InvariantResult&)>& on_result = {});

}  // namespace roundsearch
