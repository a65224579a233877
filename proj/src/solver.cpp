#include "roundsearch/solver.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <set>
#include <stdexcept>

#include "roundsearch/bounds.hpp"
#include "roundsearch/transcript_io.hpp"

namespace roundsearch {

namespace {

using Mask = std::uint32_t;

constexpr int kMaxCanonicalFree = 8;

// Drops the bits in `dead` and packs the survivors downwards, keeping order.
Mask compress(Mask m, Mask dead, int width) {
    Mask out = 0;
    int j = 0;
    for (int i = 0; i < width; ++i) {
        if (dead >> i & 1U) continue;
        if (m >> i & 1U) out |= Mask{1} << j;
        ++j;
    }
    return out;
}

bool hits_all(Mask world, const std::vector<Mask>& family) {
    return std::all_of(family.begin(), family.end(), [&](Mask m) { return (m & world) != 0; });
}

std::vector<Mask> consistent_worlds(int free_count, const std::vector<Mask>& residual) {
    std::vector<Mask> worlds;
    const Mask end = Mask{1} << free_count;
    for (Mask s = 0; s < end; ++s)
        if (hits_all(s, residual)) worlds.push_back(s);
    return worlds;
}

// Answer pattern of a family against a world, one bit per query.
std::uint64_t pattern_of(const std::vector<Mask>& family, Mask world) {
    std::uint64_t p = 0;
    for (std::size_t i = 0; i < family.size(); ++i)
        if (family[i] & world) p |= std::uint64_t{1} << i;
    return p;
}

SolverState successor(const SolverState& s, const std::vector<Mask>& family, std::uint64_t pattern) {
    Mask dead = 0;
    for (std::size_t i = 0; i < family.size(); ++i)
        if (!(pattern >> i & 1U)) dead |= family[i];
    std::vector<Mask> next;
    next.reserve(s.residual.size() + family.size());
    for (Mask m : s.residual) next.push_back(compress(m, dead, s.free_count));
    for (std::size_t i = 0; i < family.size(); ++i)
        if (pattern >> i & 1U) next.push_back(compress(family[i], dead, s.free_count));
    SolverState out;
    out.free_count = s.free_count - std::popcount(dead);
    out.residual = antichain(std::move(next));
    out.rounds_left = s.rounds_left - 1;
    out.d = s.d;
    return out;
}

KnowledgeState as_knowledge(const SolverState& s) {
    if (s.free_count == 0) return KnowledgeState(1, {1}, {});  // everything dead
    std::vector<ElementSet> residual;
    residual.reserve(s.residual.size());
    for (Mask m : s.residual) {
        ElementSet set;
        for (int i = 0; i < s.free_count; ++i)
            if (m >> i & 1U) set.push_back(i + 1);
        residual.push_back(std::move(set));
    }
    return KnowledgeState(s.free_count, {}, std::move(residual));
}

// Terminal test goes through the core-model verdict check.
bool has_valid_verdict(const SolverState& s) {
    const KnowledgeState k = as_knowledge(s);
    return verdict_valid(k, best_verdict(k, s.d), s.d);
}

// Candidate queries: nonempty, and not a superset of a residual member
// (those are answered yes in every consistent world and change nothing).
std::vector<Mask> candidate_queries(const SolverState& s) {
    std::vector<Mask> out;
    const Mask end = Mask{1} << s.free_count;
    for (Mask q = 1; q < end; ++q) {
        const bool implied = std::any_of(s.residual.begin(), s.residual.end(),
                                         [&](Mask m) { return (m & q) == m; });
        if (!implied) out.push_back(q);
    }
    return out;
}

// Calls fn(indices) for each k-subset of [0, m) in lexicographic order until
// fn returns true.
template <class Fn>
bool for_each_combination(int m, int k, Fn&& fn) {
    if (k > m) return false;
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (fn(idx)) return true;
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) return false;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

ElementSet to_elements(Mask m, const ElementSet& labels) {
    ElementSet out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (m >> i & 1U) out.push_back(labels[i]);
    return out;
}

}  // namespace

SolverConfig solver_config_from_env() {
    SolverConfig config;
    if (const char* env = std::getenv("ROUNDSEARCH_NODE_BUDGET")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end == env || *end != '\0' || v <= 0)
            throw std::invalid_argument(std::string("ROUNDSEARCH_NODE_BUDGET must be a positive integer, got '") +
                                        env + "'");
        config.node_budget = v;
    }
    return config;
}

std::vector<std::uint32_t> antichain(std::vector<std::uint32_t> family) {
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    std::vector<std::uint32_t> out;
    for (Mask m : family) {
        const bool dominated = std::any_of(family.begin(), family.end(),
                                           [&](Mask o) { return o != m && (o & m) == o; });
        if (!dominated) out.push_back(m);
    }
    return out;
}

CanonicalKey canonicalize(const SolverState& state) {
    const int f = state.free_count;
    if (f > kMaxCanonicalFree)
        throw std::invalid_argument("canonicalize: free_count " + std::to_string(f) + " exceeds " +
                                    std::to_string(kMaxCanonicalFree));
    std::vector<int> perm(static_cast<std::size_t>(f));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Mask> best;
    std::vector<Mask> image(state.residual.size());
    bool first = true;
    do {
        for (std::size_t j = 0; j < state.residual.size(); ++j) {
            Mask out = 0;
            for (int i = 0; i < f; ++i)
                if (state.residual[j] >> i & 1U) out |= Mask{1} << perm[static_cast<std::size_t>(i)];
            image[j] = out;
        }
        std::sort(image.begin(), image.end());
        if (first || image < best) {
            best = image;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    CanonicalKey key;
    key.reserve(best.size() + 3);
    key.push_back(static_cast<std::uint32_t>(f));
    key.push_back(static_cast<std::uint32_t>(state.rounds_left));
    key.push_back(static_cast<std::uint32_t>(state.d));
    key.insert(key.end(), best.begin(), best.end());
    return key;
}

SolverState solver_state_from(const KnowledgeState& state, int rounds_left, int d) {
    const ElementSet free = free_elements(state);
    if (static_cast<int>(free.size()) > 31) throw std::invalid_argument("solver_state_from: too many free elements");
    SolverState s;
    s.free_count = static_cast<int>(free.size());
    s.rounds_left = rounds_left;
    s.d = d;
    std::vector<Mask> residual;
    for (const auto& set : state.residual_yes()) {
        Mask m = 0;
        for (Element x : set) {
            const auto it = std::lower_bound(free.begin(), free.end(), x);
            m |= Mask{1} << (it - free.begin());
        }
        residual.push_back(m);
    }
    s.residual = antichain(std::move(residual));
    return s;
}

// --- search ------------------------------------------------------------------

namespace {

struct Choice {
    int value = 0;
    bool terminal = false;
    bool skip = false;  // best move is an empty round
    std::vector<Mask> family;
};

}  // namespace

ExactSolver::ExactSolver(SolverConfig config) : config_(config) {}

void ExactSolver::check_limits(int n, int d, int r) const {
    GameConfig{n, d, r}.validate();
    if (n > config_.max_n || r > config_.max_r)
        throw std::invalid_argument("solver limits are n <= " + std::to_string(config_.max_n) + ", r <= " +
                                    std::to_string(config_.max_r) + "; got n=" + std::to_string(n) +
                                    ", r=" + std::to_string(r));
    if (n > kMaxCanonicalFree)
        throw std::invalid_argument("solver supports at most " + std::to_string(kMaxCanonicalFree) + " elements");
}

namespace {

// Shared by ExactSolver::value (family discarded) and the tree builder.
template <class ValueFn, class TickFn>
Choice search(const SolverState& s, ValueFn&& value, TickFn&& tick) {
    Choice c;
    if (s.residual.end() != std::find(s.residual.begin(), s.residual.end(), Mask{0}))
        throw std::logic_error("solver reached an inconsistent state");
    if (has_valid_verdict(s)) {
        c.terminal = true;
        return c;
    }
    if (s.rounds_left <= 0) {
        c.value = ExactSolver::kInfinity;
        return c;
    }

    SolverState idle = s;
    idle.rounds_left -= 1;
    c.value = value(idle);
    c.skip = true;

    const std::vector<Mask> queries = candidate_queries(s);
    const std::vector<Mask> worlds = consistent_worlds(s.free_count, s.residual);
    const int m = static_cast<int>(queries.size());
    std::vector<Mask> family;
    std::set<std::uint64_t> seen;
    for (int k = 1; k < c.value && k <= m && k <= 63; ++k) {
        for_each_combination(m, k, [&](const std::vector<int>& idx) {
            family.clear();
            for (int i : idx) family.push_back(queries[static_cast<std::size_t>(i)]);
            seen.clear();
            int worst = 0;
            for (Mask w : worlds) {
                const std::uint64_t p = pattern_of(family, w);
                if (!seen.insert(p).second) continue;
                tick();
                worst = std::max(worst, value(successor(s, family, p)));
                if (k + worst >= c.value) return false;
            }
            c.value = k + worst;
            c.skip = false;
            c.family = family;
            return false;
        });
    }
    return c;
}

}  // namespace

int ExactSolver::value(const SolverState& state) {
    CanonicalKey key = canonicalize(state);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto tick = [this] {
        if (++nodes_ > config_.node_budget)
            throw BudgetExceeded("exact solver: node budget " + std::to_string(config_.node_budget) +
                                 " exhausted (" + std::to_string(memo_.size()) + " states memoized)");
    };
    tick();
    const Choice c = search(state, [this](const SolverState& s) { return value(s); }, tick);
    const int v = c.terminal ? 0 : c.value;
    if (memo_.size() < config_.memo_limit) memo_.emplace(std::move(key), v);
    return v;
}

int ExactSolver::value(const KnowledgeState& state, int rounds_left, int d) {
    return value(solver_state_from(state, rounds_left, d));
}

int ExactSolver::solve(int n, int d, int r) {
    check_limits(n, d, r);
    SolverState s;
    s.free_count = n;
    s.rounds_left = r;
    s.d = d;
    return value(s);
}

std::size_t ExactSolver::build(StrategyTree& tree, const KnowledgeState& state, int round, int rounds_left) {
    const std::size_t id = tree.nodes.size();
    tree.nodes.emplace_back();
    tree.nodes[id].round = round;

    const SolverState s = solver_state_from(state, rounds_left, tree.config.d);
    const Choice c = search(s, [this](const SolverState& x) { return value(x); }, [] {});
    if (c.terminal) {
        tree.nodes[id].verdict = best_verdict(state, tree.config.d);
        return id;
    }
    if (c.value >= kInfinity) throw std::logic_error("strategy tree reached a lost position");

    if (c.skip) {
        const std::size_t child = build(tree, state, round + 1, rounds_left - 1);
        tree.nodes[id].branches.push_back({{}, child});
        return id;
    }

    const ElementSet labels = free_elements(state);
    std::vector<Query> queries;
    for (Mask q : c.family) queries.push_back(to_elements(q, labels));
    tree.nodes[id].queries = queries;

    std::set<std::uint64_t> seen;
    for (Mask w : consistent_worlds(s.free_count, s.residual)) {
        const std::uint64_t p = pattern_of(c.family, w);
        if (!seen.insert(p).second) continue;
        RoundRecord record;
        record.index = round;
        record.queries = queries;
        for (std::size_t i = 0; i < queries.size(); ++i)
            record.answers.push_back(p >> i & 1U ? Answer::yes : Answer::no);
        const std::size_t child = build(tree, update_knowledge(state, record), round + 1, rounds_left - 1);
        tree.nodes[id].branches.push_back({record.answers, child});
    }
    return id;
}

StrategyTree ExactSolver::strategy_tree(int n, int d, int r) {
    StrategyTree tree;
    tree.config = GameConfig{n, d, r};
    tree.value = solve(n, d, r);
    build(tree, KnowledgeState(n), 1, r);
    return tree;
}

nlohmann::json to_json(const StrategyTree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& node = tree.nodes[i];
        nlohmann::json j;
        j["id"] = i;
        j["index"] = node.round;
        j["queries"] = node.queries;
        nlohmann::json branches = nlohmann::json::array();
        for (const auto& b : node.branches) {
            nlohmann::json answers = nlohmann::json::array();
            for (Answer a : b.answers) answers.push_back(to_string(a));
            branches.push_back({{"answers", answers}, {"child", b.child}});
        }
        j["branches"] = branches;
        if (node.verdict) j["verdict"] = *node.verdict;
        nodes.push_back(std::move(j));
    }
    return {{"config", tree.config}, {"value", tree.value}, {"root", 0}, {"nodes", nodes}};
}

// --- players -------------------------------------------------------------------

SolverAdversary::SolverAdversary(const GameConfig& config, ExactSolver& solver) : config_(config), solver_(solver) {
    config_.validate();
}

std::vector<Answer> SolverAdversary::answer(const KnowledgeState& state, const std::vector<Query>& queries,
                                            int round) {
    const ElementSet free = free_elements(state);
    if (free.size() > 20) throw std::invalid_argument("solver adversary: too many free elements");
    const int rounds_after = config_.r - round;

    std::vector<Answer> best;
    int best_value = -1;
    std::set<std::vector<Answer>> seen;
    const Mask end = Mask{1} << free.size();
    for (Mask w = 0; w < end; ++w) {
        const ElementSet world = to_elements(w, free);
        const bool consistent = std::all_of(state.residual_yes().begin(), state.residual_yes().end(),
                                            [&](const ElementSet& s) { return intersects(s, world); });
        if (!consistent) continue;
        std::vector<Answer> answers = fixed_set_answer(world, queries);
        if (!seen.insert(answers).second) continue;
        RoundRecord record{round, queries, answers};
        const int v = solver_.value(update_knowledge(state, record), std::max(rounds_after, 0), config_.d);
        if (v > best_value) {
            best_value = v;
            best = std::move(answers);
        }
    }
    return best;
}

TreeQuestioner::TreeQuestioner(StrategyTree tree) : tree_(std::move(tree)) {
    if (tree_.nodes.empty()) throw std::invalid_argument("empty strategy tree");
}

std::vector<Query> TreeQuestioner::next_round(const KnowledgeState&, int round) {
    const auto& node = tree_.nodes[current_];
    if (node.verdict || node.round != round) return {};
    return node.queries;
}

void TreeQuestioner::observe(const RoundRecord& record, const KnowledgeState&) {
    const auto& node = tree_.nodes[current_];
    if (node.verdict || node.round != record.index) return;
    for (const auto& b : node.branches) {
        if (b.answers == record.answers) {
            current_ = b.child;
            return;
        }
    }
    throw std::logic_error("strategy tree has no branch for the answers in round " + std::to_string(record.index));
}

std::optional<Verdict> TreeQuestioner::verdict(const KnowledgeState& state) {
    const auto& node = tree_.nodes[current_];
    if (node.verdict) return node.verdict;
    return best_verdict(state, tree_.config.d);
}

// --- sandwich ------------------------------------------------------------------

SandwichReport verify_sandwich(const std::vector<GameConfig>& grid, ExactSolver& solver) {
    SandwichReport report;
    for (const auto& config : grid) {
        const BoundsReport b = bounds_for(config);
        SandwichRow row;
        row.config = config;
        row.value = solver.solve(config.n, config.d, config.r);
        row.lower = b.lower;
        row.upper = config.d == 1 ? b.upper : static_cast<double>(b.upper_algorithmic);
        const bool lower_ok = b.lower_exceeds_upper || row.value >= row.lower - kBoundTolerance;
        const bool upper_ok = row.value <= row.upper + kBoundTolerance;
        row.passed = lower_ok && upper_ok;
        report.rows.push_back(row);
        if (!row.passed) {
            report.first_failure = config;
            break;
        }
    }
    return report;
}

}  // namespace roundsearch
