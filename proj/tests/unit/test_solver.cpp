#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "roundsearch/bounds.hpp"
#include "roundsearch/game.hpp"
#include "roundsearch/harness.hpp"
#include "roundsearch/solver.hpp"

using namespace roundsearch;

namespace {

ExactSolver& shared_solver() {
    static ExactSolver solver;
    return solver;
}

// Independent oracle for r = 1, d = 1: the least k such that some family of
// k subsets of [n] always allows a valid verdict, by brute force.
int brute_one_round_d1(int n) {
    const int subsets = (1 << n) - 1;
    for (int k = 0; k <= subsets; ++k) {
        for (int fam = 0; fam < (1 << subsets); ++fam) {
            if (__builtin_popcount(static_cast<unsigned>(fam)) != k) continue;
            std::vector<Query> qs;
            for (int s = 1; s <= subsets; ++s) {
                if (!(fam >> (s - 1) & 1)) continue;
                Query q;
                for (int x = 1; x <= n; ++x)
                    if (s >> (x - 1) & 1) q.push_back(x);
                qs.push_back(q);
            }
            bool works = true;
            for (int hidden = 0; hidden < (1 << n) && works; ++hidden) {
                ElementSet h;
                for (int x = 1; x <= n; ++x)
                    if (hidden >> (x - 1) & 1) h.push_back(x);
                const auto after = update_knowledge(KnowledgeState(n), {1, qs, fixed_set_answer(h, qs)});
                works = verdict_valid(after, best_verdict(after, 1), 1);
            }
            if (works) return k;
        }
    }
    return -1;
}

}  // namespace

TEST_CASE("tiny exact values") {
    auto& s = shared_solver();
    CHECK(s.solve(1, 1, 1) == 1);
    CHECK(s.solve(2, 1, 1) == 2);
    for (int n = 1; n <= 3; ++n) CHECK(s.solve(n, 1, 1) == brute_one_round_d1(n));
}

TEST_CASE("values lie between the single-element bounds") {
    auto& s = shared_solver();
    for (int n = 1; n <= 4; ++n)
        for (int r = 1; r <= 3; ++r) {
            const double root = std::pow(n, 1.0 / r);
            const int v = s.solve(n, 1, r);
            CHECK(v <= r * root + kBoundTolerance);
            CHECK(v >= r * root - 2 * r + 1 - kBoundTolerance);
        }
}

TEST_CASE("monotone in rounds and in d") {
    auto& s = shared_solver();
    for (int n = 1; n <= 4; ++n)
        for (int d = 1; d <= std::min(n, 2); ++d)
            for (int r = 1; r <= 2; ++r) {
                CHECK(s.solve(n, d, r) >= s.solve(n, d, r + 1));
                CHECK(s.solve(n, 1, r) <= s.solve(n, d, r));
            }
}

TEST_CASE("canonicalize identifies relabelled states only") {
    const SolverState a{3, {0b011}, 2, 1};
    const SolverState b{3, {0b110}, 2, 1};
    CHECK(canonicalize(a) == canonicalize(b));
    CHECK(canonicalize(SolverState{3, {}, 1, 1}) != canonicalize(SolverState{2, {}, 1, 1}));
    // {{1},{2,3}} vs {{3},{1,2}}
    CHECK(canonicalize(SolverState{3, antichain({0b001, 0b110}), 1, 1}) ==
          canonicalize(SolverState{3, antichain({0b100, 0b011}), 1, 1}));
    CHECK(canonicalize(SolverState{3, {0b001}, 1, 1}) != canonicalize(SolverState{3, {0b011}, 1, 1}));
    CHECK(canonicalize(SolverState{3, {0b001}, 1, 1}) != canonicalize(SolverState{3, {0b001}, 2, 1}));
}

TEST_CASE("antichain drops duplicates and supersets") {
    CHECK(antichain({0b011, 0b001, 0b011, 0b110}) == std::vector<std::uint32_t>{0b001, 0b110});
    CHECK(antichain({}).empty());
}

TEST_CASE("limits and budget") {
    ExactSolver small(SolverConfig{4, 3, 1000, 50});
    CHECK_THROWS_AS(small.solve(5, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(small.solve(3, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(small.solve(3, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(small.solve(4, 1, 2), BudgetExceeded);
}

TEST_CASE("strategy tree is an upper-bound witness") {
    auto& s = shared_solver();
    for (int n = 1; n <= 4; ++n)
        for (int d = 1; d <= std::min(n, 2); ++d)
            for (int r = 1; r <= 2; ++r) {
                const GameConfig c{n, d, r};
                const StrategyTree tree = s.strategy_tree(n, d, r);
                CHECK(tree.value == s.solve(n, d, r));
                for (std::uint32_t hidden = 0; hidden < (1U << n); ++hidden) {
                    ElementSet h;
                    for (int x = 1; x <= n; ++x)
                        if (hidden >> (x - 1) & 1U) h.push_back(x);
                    TreeQuestioner q(tree);
                    FixedSetAdversary adv(c, h);
                    const GameResult g = play(c, q, adv);
                    CHECK(g.verdict_valid);
                    CHECK(g.total_queries <= tree.value);
                }
                TreeQuestioner q(tree);
                SolverAdversary adv(c, s);
                const GameResult g = play(c, q, adv);
                CHECK(g.verdict_valid);
                CHECK(g.total_queries == tree.value);
            }
}

TEST_CASE("solver adversary is a lower-bound witness") {
    auto& s = shared_solver();
    for (int n = 1; n <= 4; ++n)
        for (int r = 1; r <= 3; ++r) {
            const GameConfig c{n, 1, r};
            const int value = s.solve(n, 1, r);
            for (const std::string qname : {"katona", "singletons", "random"}) {
                for (std::uint64_t seed = 0; seed < 10; ++seed) {
                    auto q = make_questioner(qname, c, seed);
                    SolverAdversary adv(c, s);
                    const GameResult g = play(c, *q, adv);
                    if (g.verdict_valid) CHECK(g.total_queries >= value);
                }
            }
        }
}

TEST_CASE("strategy tree JSON carries rounds in transcript shape") {
    const auto j = to_json(shared_solver().strategy_tree(2, 1, 1));
    CHECK(j["value"] == 2);
    CHECK(j["config"]["n"] == 2);
    REQUIRE(j["nodes"].is_array());
    CHECK(j["nodes"][0]["index"] == 1);
    CHECK(j["nodes"][0]["queries"].size() == 2);
}

TEST_CASE("verify_sandwich") {
    auto& s = shared_solver();
    std::vector<GameConfig> grid;
    for (int n = 1; n <= 4; ++n)
        for (int r = 1; r <= 2; ++r) grid.push_back({n, 1, r});
    auto report = verify_sandwich(grid, s);
    CHECK(report.passed());
    CHECK(report.rows.size() == grid.size());

    report = verify_sandwich({{2, 2, 1}, {3, 2, 1}, {4, 2, 1}}, s);
    CHECK(report.passed());
    for (const auto& row : report.rows) CHECK(row.upper == doctest::Approx(row.config.n));

    CHECK(verify_sandwich({}, s).rows.empty());
}

TEST_CASE("node budget comes from the environment") {
    setenv("ROUNDSEARCH_NODE_BUDGET", "1234", 1);
    CHECK(solver_config_from_env().node_budget == 1234);
    setenv("ROUNDSEARCH_NODE_BUDGET", "lots", 1);
    CHECK_THROWS_AS(solver_config_from_env(), std::invalid_argument);
    unsetenv("ROUNDSEARCH_NODE_BUDGET");
    CHECK(solver_config_from_env().node_budget == SolverConfig{}.node_budget);
}
