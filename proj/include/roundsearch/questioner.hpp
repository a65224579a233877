#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "roundsearch/knowledge.hpp"
#include "roundsearch/types.hpp"

namespace roundsearch {

/// Ordered disjoint parts covering a base set; sizes differ by at most one.
using Partition = std::vector<ElementSet>;

/// Deals the sorted base into `parts_count` contiguous blocks, larger blocks
/// first. Empty blocks (parts_count > |base|) are dropped.
Partition balanced_partition(const ElementSet& base, int parts_count);

/// A round-by-round decision procedure. Strategies only ever see the public
/// knowledge state plus their own memory.
class Questioner {
public:
    virtual ~Questioner() = default;

    virtual std::string name() const = 0;

    /// Query family for round `round` (1-based).
    virtual std::vector<Query> next_round(const KnowledgeState& state, int round) = 0;

    /// Called once the round's answers are known.
    virtual void observe(const RoundRecord& record, const KnowledgeState& after) {
        (void)record;
        (void)after;
    }

    /// Called after the last round. An empty optional is a protocol violation.
    virtual std::optional<Verdict> verdict(const KnowledgeState& state) = 0;
};

/// Found with the d smallest forced elements when there are enough,
/// otherwise FewerThanD.
Verdict best_verdict(const KnowledgeState& state, int d);

/// Single-element r-round algorithm: split the current region into ⌈n^{1/r}⌉
/// parts and ask all but one smallest part C; continue on the first yes part
/// (or C). In the last round, if every answer so far was no, ask all parts.
class KatonaSplit final : public Questioner {
public:
    explicit KatonaSplit(const GameConfig& config);

    std::string name() const override { return "katona"; }
    std::vector<Query> next_round(const KnowledgeState& state, int round) override;
    void observe(const RoundRecord& record, const KnowledgeState& after) override;
    std::optional<Verdict> verdict(const KnowledgeState& state) override;

    int branching() const { return branching_; }
    const ElementSet& picked() const { return picked_; }

private:
    GameConfig config_;
    int branching_;
    ElementSet picked_;
    ElementSet held_back_;  // C for the current round
    std::vector<Query> asked_;
    bool had_yes_ = false;
};

/// d-element algorithm: ⌈(d^{r−1}n)^{1/r}⌉ parts in round 1, then every
/// picked part is split into ⌈(n/k)^{1/(r−1)}⌉ parts. Up to d yes-parts are
/// pursued. While fewer than d yes-parts exist every sub-part is asked and
/// the last round asks all remaining singletons; once d are in hand one
/// smallest sub-part per picked part is held back, as in KatonaSplit.
class KatonaParallel final : public Questioner {
public:
    explicit KatonaParallel(const GameConfig& config);

    std::string name() const override { return "katona-parallel"; }
    std::vector<Query> next_round(const KnowledgeState& state, int round) override;
    void observe(const RoundRecord& record, const KnowledgeState& after) override;
    std::optional<Verdict> verdict(const KnowledgeState& state) override;

    std::int64_t first_round_parts() const { return first_parts_; }
    std::int64_t later_round_parts() const { return later_parts_; }

private:
    struct Split {
        ElementSet parent;
        Partition asked;
        std::optional<ElementSet> held_back;
    };

    GameConfig config_;
    std::int64_t first_parts_;
    std::int64_t later_parts_;
    std::vector<ElementSet> picked_;
    bool closed_ = true;  // every possibly-excellent element lies in picked_
    std::vector<Split> splits_;
};

/// Asks every free singleton in the first round and nothing afterwards.
class ExhaustiveSingletons final : public Questioner {
public:
    explicit ExhaustiveSingletons(const GameConfig& config) : config_(config) {}

    std::string name() const override { return "singletons"; }
    std::vector<Query> next_round(const KnowledgeState& state, int round) override;
    std::optional<Verdict> verdict(const KnowledgeState& state) override;

private:
    GameConfig config_;
};

std::vector<Query> exhaustive_singletons(const KnowledgeState& state);

/// Seeded baseline mixing random subsets, random partitions and (in the last
/// round) singleton sweeps that sometimes certify a verdict.
class RandomQuestioner final : public Questioner {
public:
    RandomQuestioner(const GameConfig& config, std::uint64_t seed);

    std::string name() const override { return "random"; }
    std::vector<Query> next_round(const KnowledgeState& state, int round) override;
    std::optional<Verdict> verdict(const KnowledgeState& state) override;

private:
    std::vector<Query> final_round(const KnowledgeState& state);

    GameConfig config_;
    std::mt19937_64 rng_;
};

/// "katona", "katona-parallel", "singletons" or "random".
std::unique_ptr<Questioner> make_questioner(const std::string& name, const GameConfig& config,
                                            std::uint64_t seed = 0);

}  // namespace roundsearch
