#include <doctest.h>

#include <functional>

#include "roundsearch/game.hpp"
#include "roundsearch/questioner.hpp"

using namespace roundsearch;

namespace {

// Answers via a callback; used to script hand traces.
class Scripted final : public Adversary {
public:
    using Fn = std::function<std::vector<Answer>(const std::vector<Query>&, int)>;
    explicit Scripted(Fn fn) : fn_(std::move(fn)) {}
    std::string name() const override { return "scripted"; }
    std::vector<Answer> answer(const KnowledgeState&, const std::vector<Query>& qs, int round) override {
        return fn_(qs, round);
    }

private:
    Fn fn_;
};

std::vector<Answer> all(std::size_t k, Answer a) { return std::vector<Answer>(k, a); }

}  // namespace

TEST_CASE("balanced_partition") {
    CHECK(balanced_partition(iota_set(1, 9), 3) == Partition{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
    CHECK(balanced_partition(iota_set(1, 7), 3) == Partition{{1, 2, 3}, {4, 5}, {6, 7}});
    CHECK(balanced_partition({1, 2}, 4) == Partition{{1}, {2}});
    CHECK(balanced_partition({}, 3).empty());
}

TEST_CASE("katona split: n=9, r=2 hand traces") {
    const GameConfig c{9, 1, 2};

    SUBCASE("round 1 leaves out the last smallest part") {
        KatonaSplit q(c);
        CHECK(q.next_round(KnowledgeState(9), 1) == std::vector<Query>{{1, 2, 3}, {4, 5, 6}});
    }
    SUBCASE("no, no: every part of C is asked") {
        KatonaSplit q(c);
        std::vector<std::vector<Query>> seen;
        Scripted adv([&](const std::vector<Query>& qs, int) {
            seen.push_back(qs);
            return all(qs.size(), Answer::no);
        });
        const GameResult g = play(c, q, adv);
        REQUIRE(seen.size() == 2);
        CHECK(seen[1] == std::vector<Query>{{7}, {8}, {9}});
        CHECK(g.total_queries == 5);
        CHECK(g.verdict == Verdict::fewer_than_d());
        CHECK(g.verdict_valid);
    }
    SUBCASE("yes, no then no, no: the held-back element is found") {
        KatonaSplit q(c);
        std::vector<std::vector<Query>> seen;
        Scripted adv([&](const std::vector<Query>& qs, int round) {
            seen.push_back(qs);
            if (round == 1) return std::vector<Answer>{Answer::yes, Answer::no};
            return all(qs.size(), Answer::no);
        });
        const GameResult g = play(c, q, adv);
        CHECK(q.picked() == ElementSet{3});
        CHECK(seen[1] == std::vector<Query>{{1}, {2}});
        CHECK(g.verdict == Verdict::found({3}));
        CHECK(g.verdict_valid);
    }
    CHECK_THROWS_AS(KatonaSplit(GameConfig{9, 2, 2}), std::invalid_argument);
}

TEST_CASE("katona parallel: n=100, d=2, r=2") {
    const GameConfig c{100, 2, 2};
    KatonaParallel q(c);
    CHECK(q.first_round_parts() == 15);
    CHECK(q.next_round(KnowledgeState(100), 1).size() == 15);
    for (const std::string adv : {"good-family", "fixed:", "fixed:1", "fixed:3,50", "fixed:all", "random:0.5"}) {
        const GameResult g = play(c, "katona-parallel", adv, 5);
        CHECK(g.verdict_valid);
        CHECK(g.total_queries <= 30);
    }
    CHECK_THROWS_AS(KatonaParallel(GameConfig{10, 1, 2}), std::invalid_argument);
}

TEST_CASE("katona parallel: n = d splits into singletons") {
    for (int d = 2; d <= 4; ++d)
        for (int r = 1; r <= 3; ++r) {
            const GameConfig c{d, d, r};
            KatonaParallel q(c);
            const auto first = q.next_round(KnowledgeState(d), 1);
            CHECK(first.size() == static_cast<std::size_t>(d));
            for (const auto& part : first) CHECK(part.size() == 1);
            CHECK(play(c, "katona-parallel", "fixed:all", 0).verdict_valid);
        }
}

TEST_CASE("katona parallel: all-no gives a valid FewerThanD") {
    const GameConfig c{50, 3, 3};
    KatonaParallel q(c);
    Scripted adv([](const std::vector<Query>& qs, int) { return all(qs.size(), Answer::no); });
    const GameResult g = play(c, q, adv);
    CHECK(g.verdict == Verdict::fewer_than_d());
    CHECK(g.verdict_valid);
    CHECK(g.final_state.dead_count() == 50);
}

TEST_CASE("exhaustive_singletons") {
    CHECK(exhaustive_singletons(KnowledgeState(3)) == std::vector<Query>{{1}, {2}, {3}});
    CHECK(exhaustive_singletons(KnowledgeState(3, {2}, {})) == std::vector<Query>{{1}, {3}});
    CHECK(exhaustive_singletons(KnowledgeState(1)) == std::vector<Query>{{1}});
}

TEST_CASE("splitting strategies find true excellent elements of a hidden set") {
    for (int n = 1; n <= 40; ++n)
        for (int d = 1; d <= std::min(n, 3); ++d)
            for (int r = 1; r <= 4; ++r) {
                const GameConfig c{n, d, r};
                const std::string q = d == 1 ? "katona" : "katona-parallel";
                ElementSet hidden;
                for (int x = 2; x <= n && static_cast<int>(hidden.size()) < d + 1; x += 3) hidden.push_back(x);
                std::string spec = "fixed:";
                for (Element x : hidden) spec += std::to_string(x) + ",";
                const GameResult g = play(c, q, spec, 0);
                CHECK(g.verdict_valid);
                if (static_cast<int>(hidden.size()) >= d) {
                    REQUIRE(g.verdict.kind == Verdict::Kind::found);
                    CHECK(is_subset(g.verdict.elements, hidden));
                    CHECK(static_cast<int>(g.verdict.elements.size()) == d);
                } else {
                    CHECK(g.verdict == Verdict::fewer_than_d());
                }
                CHECK(g.total_queries <= g.bounds.upper_algorithmic);
            }
}

TEST_CASE("questioners only ask about [n] and always give a verdict") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const GameConfig c{1 + static_cast<int>(seed % 30), 1, 1 + static_cast<int>(seed % 4)};
        const GameResult g = play(c, "random", "random:0.4", seed);
        for (const auto& round : g.transcript.rounds)
            for (const auto& q : round.queries)
                for (Element x : q) CHECK((x >= 1 && x <= c.n));
    }
    CHECK_THROWS_AS(make_questioner("nope", GameConfig{3, 1, 1}), std::invalid_argument);
}
