#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roundsearch/adversary.hpp"
#include "roundsearch/knowledge.hpp"
#include "roundsearch/questioner.hpp"
#include "roundsearch/types.hpp"

namespace roundsearch {

struct SolverConfig {
    int max_n = 4;
    int max_r = 3;
    std::size_t memo_limit = 2'000'000;
    std::int64_t node_budget = 200'000'000;
};

/// Defaults, with node_budget overridden by ROUNDSEARCH_NODE_BUDGET if set.
SolverConfig solver_config_from_env();

/// A game position with dead elements dropped: free elements are relabelled
/// 0..free_count−1 and the residual family is an antichain of bitmasks
/// (supersets of another member constrain nothing and are removed).
struct SolverState {
    int free_count = 0;
    std::vector<std::uint32_t> residual;
    int rounds_left = 0;
    int d = 1;
};

using CanonicalKey = std::vector<std::uint32_t>;

/// Identical keys iff the states agree up to relabelling free elements.
/// Exhaustive over relabellings; free_count must be <= 8.
CanonicalKey canonicalize(const SolverState& state);

/// Removes duplicates and strict supersets, keeping the result sorted.
std::vector<std::uint32_t> antichain(std::vector<std::uint32_t> family);

SolverState solver_state_from(const KnowledgeState& state, int rounds_left, int d);

/// Optimal questioner play as a tree: each inner node is one round's query
/// family with one branch per consistent answer pattern.
struct StrategyTree {
    struct Branch {
        std::vector<Answer> answers;
        std::size_t child = 0;
    };
    struct Node {
        int round = 1;
        std::vector<Query> queries;
        std::vector<Branch> branches;
        std::optional<Verdict> verdict;  ///< set on leaves
    };

    GameConfig config;
    int value = 0;
    std::vector<Node> nodes;  ///< nodes[0] is the root
};

nlohmann::json to_json(const StrategyTree& tree);

/// |P(n,?,d,r)| at desk scale by minimax over canonical knowledge states.
///
/// V(state) = 0 when a valid verdict already exists; otherwise the minimum,
/// over families of distinct nonempty queries on free elements, of
/// |F| + max over consistent answer patterns of V(successor). Queries touching
/// dead elements are equivalent to their restriction and duplicates carry no
/// information, so neither is enumerated. The empty family (skip a round) is
/// always an option, and families are tried by increasing size so the
/// search stops once |F| reaches the best value found.
class ExactSolver {
public:
    static constexpr int kInfinity = 1 << 20;

    explicit ExactSolver(SolverConfig config = {});

    /// Throws std::invalid_argument outside the configured limits and
    /// BudgetExceeded when the node budget runs out.
    int solve(int n, int d, int r);

    int value(const SolverState& state);
    int value(const KnowledgeState& state, int rounds_left, int d);

    StrategyTree strategy_tree(int n, int d, int r);

    std::int64_t nodes_expanded() const { return nodes_; }
    std::size_t memo_size() const { return memo_.size(); }
    const SolverConfig& config() const { return config_; }

private:
    void check_limits(int n, int d, int r) const;
    std::size_t build(StrategyTree& tree, const KnowledgeState& state, int round, int rounds_left);

    SolverConfig config_;
    std::map<CanonicalKey, int> memo_;
    std::int64_t nodes_ = 0;
};

/// Plays the answer pattern that maximizes the remaining game value.
class SolverAdversary final : public Adversary {
public:
    SolverAdversary(const GameConfig& config, ExactSolver& solver);

    std::string name() const override { return "solver"; }
    std::vector<Answer> answer(const KnowledgeState& state, const std::vector<Query>& queries, int round) override;

private:
    GameConfig config_;
    ExactSolver& solver_;
};

/// Follows a strategy tree.
class TreeQuestioner final : public Questioner {
public:
    explicit TreeQuestioner(StrategyTree tree);

    std::string name() const override { return "solver-tree"; }
    std::vector<Query> next_round(const KnowledgeState& state, int round) override;
    void observe(const RoundRecord& record, const KnowledgeState& after) override;
    std::optional<Verdict> verdict(const KnowledgeState& state) override;

private:
    StrategyTree tree_;
    std::size_t current_ = 0;
};

struct SandwichRow {
    GameConfig config;
    int value = 0;
    double lower = 0;
    double upper = 0;
    bool passed = false;
};

struct SandwichReport {
    std::vector<SandwichRow> rows;
    std::optional<GameConfig> first_failure;
    bool passed() const { return !first_failure.has_value(); }
};

/// Exact values against the closed-form bounds (real r·n^{1/r} upper for
/// d = 1, ceiling form for d >= 2). Stops at the first failing row.
SandwichReport verify_sandwich(const std::vector<GameConfig>& grid, ExactSolver& solver);

}  // namespace roundsearch
