#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "roundsearch/types.hpp"

namespace roundsearch {

/// Default cap on tuples examined by the exact good-family violation search.
inline constexpr std::int64_t kDefaultTupleBudget = 1'000'000;

/// Distinct queries (restricted to the base set) ordered so each marginal
/// H_i = F_i \ (F_1 ∪ ... ∪ F_{i−1}) is as small as possible at its step.
/// Ties go to the lexicographically smallest element list. Marginals are
/// pairwise disjoint.
struct GreedyOrdering {
    std::vector<ElementSet> ordered_queries;
    std::vector<ElementSet> marginals;
};

GreedyOrdering greedy_ordering(const std::vector<Query>& queries, const ElementSet& base);

/// A subfamily 𝒜 such that no i <= d members outside it have
/// |∪A_j \ ∪𝒜| < i·threshold, built by repeatedly absorbing violating tuples.
/// Always |∪𝒜| <= |𝒜|·threshold.
struct GoodFamily {
    std::vector<ElementSet> members;  ///< distinct, in absorption order
    std::int64_t threshold = 0;
    bool heuristic = false;  ///< goodness could not be verified exactly within budget
};

/// Queries are expected to be restricted to free elements already; duplicates
/// are merged.
GoodFamily find_good_family(const std::vector<Query>& queries, std::int64_t threshold, int d,
                            std::int64_t tuple_budget = kDefaultTupleBudget);

/// Exhaustive goodness predicate, for tests and verification. Returns nullopt
/// when the budget runs out.
std::optional<bool> is_good_family(const std::vector<Query>& queries, const std::vector<ElementSet>& members,
                                   std::int64_t threshold, int d, std::int64_t tuple_budget = kDefaultTupleBudget);

/// m(i, F): least |A_1 ∪ ... ∪ A_i| over i distinct members of F. Returns
/// nullopt when F has fewer than i members. Throws BudgetExceeded.
std::optional<std::int64_t> min_union(const std::vector<ElementSet>& family, int i,
                                      std::int64_t node_budget = 10'000'000);

/// Exact minimum hitting set by iterative-deepening branch and bound,
/// branching on the elements of a smallest unhit member.
/// Throws std::invalid_argument on an empty member, BudgetExceeded past budget.
ElementSet min_hitting_set(const std::vector<ElementSet>& family, std::int64_t node_budget = 10'000'000);

/// A minimum hitting set if one of size <= limit exists, else nullopt.
std::optional<ElementSet> hitting_set_up_to(const std::vector<ElementSet>& family, int limit,
                                            std::int64_t node_budget = 10'000'000);

}  // namespace roundsearch
