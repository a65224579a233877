#include "roundsearch/game.hpp"

#include <algorithm>

namespace roundsearch {

bool GameResult::ledger_ok() const {
    return std::all_of(ledger_checks.begin(), ledger_checks.end(), [](const LedgerCheck& c) { return c.passed; });
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

GameResult play(const GameConfig& config, Questioner& questioner, Adversary& adversary) {
    config.validate();
    GameResult result;
    result.config = config;
    result.questioner = questioner.name();
    result.adversary = adversary.name();
    result.bounds = bounds_for(config);
    result.lower_bound_adversary = adversary.forces_lower_bound();
    result.hidden = adversary.hidden_set();
    result.transcript.config = config;

    KnowledgeState state(config.n);
    for (int t = 1; t <= config.r; ++t) {
        RoundRecord record;
        record.index = t;
        record.queries = questioner.next_round(state, t);
        for (auto& q : record.queries) {
            q = make_set(std::move(q));
            if (!q.empty() && (q.front() < 1 || q.back() > config.n))
                throw GameFailure(GameFailure::Kind::protocol_violation,
                                  "round " + std::to_string(t) + ": query " + format_set(q) + " leaves [n]");
        }
        record.answers = adversary.answer(state, record.queries, t);
        if (record.answers.size() != record.queries.size())
            throw GameFailure(GameFailure::Kind::adversary_inconsistent,
                              "round " + std::to_string(t) + ": adversary returned the wrong number of answers");

        state = update_knowledge(state, record);
        if (!is_consistent(state))
            throw GameFailure(GameFailure::Kind::adversary_inconsistent,
                              "round " + std::to_string(t) + ": " + adversary.name() +
                                  " produced answers no excellent set satisfies");
        questioner.observe(record, state);
        adversary.observe(record, state);
        result.per_round.push_back(record.size());
        result.total_queries += record.size();
        result.transcript.rounds.push_back(std::move(record));
    }

    std::optional<Verdict> verdict = questioner.verdict(state);
    if (!verdict)
        throw GameFailure(GameFailure::Kind::protocol_violation, questioner.name() + " gave no verdict");
    result.verdict = *verdict;
    result.transcript.verdict = *verdict;
    result.verdict_valid = verdict_valid(state, *verdict, config.d);
    result.ledger_checks = adversary.ledger_checks();

    if (result.verdict_valid) {
        if (auto floor = adversary.accounting_floor()) {
            LedgerCheck check;
            check.name = "endgame_accounting";
            check.round = config.r;
            check.passed = result.total_queries >= *floor;
            check.detail = "total=" + std::to_string(result.total_queries) + " >= " + std::to_string(*floor);
            result.ledger_checks.push_back(std::move(check));
        }
    }
    result.final_state = std::move(state);
    return result;
}

GameResult play(const GameConfig& config, const std::string& questioner, const std::string& adversary,
                std::uint64_t seed) {
    config.validate();
    auto q = make_questioner(questioner, config, derive_seed(seed, 1));
    auto a = make_adversary(adversary, config, derive_seed(seed, 2));
    GameResult result = play(config, *q, *a);
    result.adversary = adversary;
    return result;
}

BoundCheck check_bounds(const GameResult& result) {
    BoundCheck check;
    const bool splitting = result.questioner == "katona" || result.questioner == "katona-parallel";
    if (splitting) {
        check.upper_applies = true;
        check.upper_ok = result.verdict_valid && result.total_queries <= result.bounds.upper_algorithmic;
    }
    if (result.lower_bound_adversary && result.verdict_valid && !result.bounds.lower_exceeds_upper) {
        check.lower_applies = true;
        check.lower_ok = result.total_queries >= result.bounds.lower_ceil();
    }
    return check;
}

}  // namespace roundsearch
