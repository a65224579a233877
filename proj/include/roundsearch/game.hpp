#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roundsearch/adversary.hpp"
#include "roundsearch/bounds.hpp"
#include "roundsearch/questioner.hpp"
#include "roundsearch/types.hpp"

namespace roundsearch {

/// A game that could not be refereed to the end.
class GameFailure : public std::runtime_error {
public:
    enum class Kind { adversary_inconsistent, protocol_violation };

    GameFailure(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct GameResult {
    GameConfig config;
    std::string questioner;
    std::string adversary;
    std::int64_t total_queries = 0;
    std::vector<std::int64_t> per_round;
    Verdict verdict;
    bool verdict_valid = false;
    BoundsReport bounds;
    std::vector<LedgerCheck> ledger_checks;
    Transcript transcript;
    KnowledgeState final_state{1};
    bool lower_bound_adversary = false;  ///< adversary built to force the proved lower bound
    std::optional<ElementSet> hidden;   ///< hidden set of a truthful adversary

    bool ledger_ok() const;
};

/// Referee loop: r rounds of (questioner batch, adversary answers, knowledge
/// update), then the verdict, validated here and never by the strategies.
/// When the verdict is valid and the adversary certifies an accounting
/// floor, an "endgame_accounting" check is appended.
///
/// Throws GameFailure on an inconsistent adversary, a query outside [n], a
/// wrong number of answers, or a missing verdict.
GameResult play(const GameConfig& config, Questioner& questioner, Adversary& adversary);

/// Builds both strategies by name. Seeds for the two sides are derived from
/// `seed` so that identical arguments replay identically.
GameResult play(const GameConfig& config, const std::string& questioner, const std::string& adversary,
                std::uint64_t seed);

/// Mixes a base seed with a stream id (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Which bound a result breaks, if any. Upper: the round-splitting
/// strategies must stay within the algorithmic bound with a valid verdict.
/// Lower: a valid verdict against a lower-bound adversary must have cost at
/// least ⌈lower⌉ (skipped where the lower formula exceeds the upper one).
struct BoundCheck {
    bool upper_applies = false;
    bool upper_ok = true;
    bool lower_applies = false;
    bool lower_ok = true;
    bool ok() const { return upper_ok && lower_ok; }
};

BoundCheck check_bounds(const GameResult& result);

}  // namespace roundsearch
