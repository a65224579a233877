#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "roundsearch/knowledge.hpp"
#include "roundsearch/set_family.hpp"
#include "roundsearch/types.hpp"

namespace roundsearch {

/// Quantities the lower-bound adversaries track between rounds.
struct AdversaryLedger {
    enum class Mode { all_no_so_far, had_yes };

    std::vector<std::int64_t> n_seq;     ///< n_0 = n, n_1, ...
    std::vector<std::int64_t> round_sizes;  ///< k_t as asked (duplicates counted)
    std::optional<std::int64_t> m_current;  ///< smallest residual yes-set
    std::vector<std::optional<std::int64_t>> m_d;  ///< m_t(i) for i = 1..d; empty optional = fewer than i sets
    std::optional<std::int64_t> n_prime;  ///< threshold used in round r−1 by the good-family rule
    Mode mode = Mode::all_no_so_far;
    bool exact = true;  ///< false once any round used the heuristic good-family search
};

/// Outcome of one invariant evaluation recorded by an adversary.
struct LedgerCheck {
    std::string name;
    int round = 0;
    bool passed = true;
    bool exact = true;  ///< false if it rests on a heuristic step or a budget cut-off
    std::string detail;
};

/// Within-round view of knowledge, updated answer by answer. Lets an
/// adversary ask "is a no on this query still consistent?" cheaply.
class RoundWorkspace {
public:
    explicit RoundWorkspace(const KnowledgeState& state);

    int live_size(const Query& q) const;
    ElementSet live_part(const Query& q) const;
    bool is_dead(Element x) const { return dead_[static_cast<std::size_t>(x)] != 0; }

    /// True iff answering no keeps every residual set nonempty.
    bool can_deny(const Query& q);
    void deny(const Query& q);
    /// Records a yes. Throws std::logic_error if the live part is empty.
    void affirm(const Query& q);

private:
    std::vector<std::uint8_t> dead_;
    std::vector<int> live_;
    std::vector<std::vector<int>> holders_;
    std::vector<int> scratch_;
};

// --- answering rules -------------------------------------------------------

/// Greedy threshold rule for rounds t <= r−1 (d = 1): order the round's
/// queries greedily; with n_t = ⌊n_{t−1}/(k_t+1)⌋, find the first marginal of
/// size >= n_t + 1, answer no before it and yes from it on; otherwise all no.
/// Appends n_t and k_t to the ledger and updates its mode.
std::vector<Answer> greedy_lemma_answer(const KnowledgeState& state, const std::vector<Query>& queries,
                                        AdversaryLedger& ledger, int round, const GameConfig& config);

struct GoodFamilyAnswer {
    std::vector<Answer> answers;
    GoodFamily family;
};

/// Good-family rule for rounds t <= r−1: threshold n_t for t <= r−2 and
/// n'_{r−1} = ⌊n_{r−2}/(k_{r−1}+d)⌋ for t = r−1. No on the good family, yes
/// on the rest. Queries with no free element are always answered no.
GoodFamilyAnswer good_family_answer(const KnowledgeState& state, const std::vector<Query>& queries,
                                    AdversaryLedger& ledger, int round, const GameConfig& config,
                                    std::int64_t tuple_budget = kDefaultTupleBudget);

/// Last-round rule. With A a minimum hitting set of the residual family,
/// queries are processed by current live size (ties by element list, then
/// position): a query with no live element gets no; a live singleton {x} gets
/// no iff that stays consistent and, when |A| < d, x is not in A; any query
/// with two or more live elements gets yes.
/// Throws BudgetExceeded from the hitting-set search.
std::vector<Answer> endgame_answer(const KnowledgeState& state, const std::vector<Query>& queries, int d,
                                   std::int64_t node_budget = 10'000'000);

/// Truthful answers for a hidden excellent set.
std::vector<Answer> fixed_set_answer(const ElementSet& hidden, const std::vector<Query>& queries);

/// Refreshes m_current and m_d from the public state.
void refresh_ledger(AdversaryLedger& ledger, const KnowledgeState& after, int d,
                    std::int64_t node_budget = 10'000'000);

// --- strategies ------------------------------------------------------------

class Adversary {
public:
    virtual ~Adversary() = default;

    virtual std::string name() const = 0;
    virtual std::vector<Answer> answer(const KnowledgeState& state, const std::vector<Query>& queries,
                                       int round) = 0;
    virtual void observe(const RoundRecord& record, const KnowledgeState& after) {
        (void)record;
        (void)after;
    }

    virtual std::vector<LedgerCheck> ledger_checks() const { return {}; }
    /// Least number of queries any questioner must have asked in total to end
    /// with a valid verdict, when the strategy certifies one.
    virtual std::optional<std::int64_t> accounting_floor() const { return std::nullopt; }
    /// True for strategies built to force the proved lower bound.
    virtual bool forces_lower_bound() const { return false; }
    /// Hidden set when the answers are truthful for one.
    virtual std::optional<ElementSet> hidden_set() const { return std::nullopt; }
};

/// Greedy or good-family rule in rounds 1..r−1, endgame rule in round r.
class LowerBoundAdversary final : public Adversary {
public:
    enum class EarlyRule { greedy, good_family };

    LowerBoundAdversary(const GameConfig& config, EarlyRule rule,
                        std::int64_t tuple_budget = kDefaultTupleBudget);

    std::string name() const override { return rule_ == EarlyRule::greedy ? "lemma" : "good-family"; }
    std::vector<Answer> answer(const KnowledgeState& state, const std::vector<Query>& queries, int round) override;
    void observe(const RoundRecord& record, const KnowledgeState& after) override;
    std::vector<LedgerCheck> ledger_checks() const override { return checks_; }
    std::optional<std::int64_t> accounting_floor() const override;
    bool forces_lower_bound() const override;

    const AdversaryLedger& ledger() const { return ledger_; }
    bool endgame_fell_back() const { return fell_back_; }

private:
    GameConfig config_;
    EarlyRule rule_;
    std::int64_t tuple_budget_;
    AdversaryLedger ledger_;
    std::vector<LedgerCheck> checks_;
    bool fell_back_ = false;
};

class FixedSetAdversary final : public Adversary {
public:
    FixedSetAdversary(const GameConfig& config, ElementSet hidden);

    std::string name() const override;
    std::vector<Answer> answer(const KnowledgeState& state, const std::vector<Query>& queries, int round) override;
    std::optional<ElementSet> hidden_set() const override { return hidden_; }

private:
    ElementSet hidden_;
};

/// Answers yes with probability p, otherwise no whenever a no stays consistent.
class RandomAdversary final : public Adversary {
public:
    RandomAdversary(double p, std::uint64_t seed);

    std::string name() const override;
    std::vector<Answer> answer(const KnowledgeState& state, const std::vector<Query>& queries, int round) override;

private:
    double p_;
    std::mt19937_64 rng_;
};

/// Test fixture: a lower-bound adversary whose last-round rule is broken
/// (every live singleton gets yes). A sound harness must notice.
class MutantAdversary final : public Adversary {
public:
    explicit MutantAdversary(const GameConfig& config);

    std::string name() const override { return "mutant"; }
    std::vector<Answer> answer(const KnowledgeState& state, const std::vector<Query>& queries, int round) override;
    void observe(const RoundRecord& record, const KnowledgeState& after) override { inner_.observe(record, after); }
    std::vector<LedgerCheck> ledger_checks() const override { return inner_.ledger_checks(); }
    std::optional<std::int64_t> accounting_floor() const override { return inner_.accounting_floor(); }
    bool forces_lower_bound() const override { return true; }

private:
    GameConfig config_;
    LowerBoundAdversary inner_;
};

/// Parses "lemma", "good-family", "endgame-auto", "fixed:<ids>", "fixed:all", "random:<p>"
/// (and "mutant" for fault injection).
std::unique_ptr<Adversary> make_adversary(const std::string& spec, const GameConfig& config,
                                          std::uint64_t seed = 0,
                                          std::int64_t tuple_budget = kDefaultTupleBudget);

}  // namespace roundsearch
