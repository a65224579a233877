#include "roundsearch/adversary.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "roundsearch/bounds.hpp"

namespace roundsearch {

// --- RoundWorkspace ----------------------------------------------------------

RoundWorkspace::RoundWorkspace(const KnowledgeState& state)
    : dead_(static_cast<std::size_t>(state.n()) + 1, 0), holders_(static_cast<std::size_t>(state.n()) + 1) {
    for (Element x = 1; x <= state.n(); ++x)
        if (state.is_dead(x)) dead_[static_cast<std::size_t>(x)] = 1;
    for (const auto& s : state.residual_yes()) affirm(s);
}

int RoundWorkspace::live_size(const Query& q) const {
    int count = 0;
    for (Element x : q)
        if (!is_dead(x)) ++count;
    return count;
}

ElementSet RoundWorkspace::live_part(const Query& q) const {
    ElementSet out;
    for (Element x : q)
        if (!is_dead(x)) out.push_back(x);
    return out;
}

bool RoundWorkspace::can_deny(const Query& q) {
    std::vector<int> touched;
    for (Element x : q) {
        if (is_dead(x)) continue;
        for (int id : holders_[static_cast<std::size_t>(x)]) {
            if (scratch_[static_cast<std::size_t>(id)]++ == 0) touched.push_back(id);
        }
    }
    bool ok = true;
    for (int id : touched) {
        if (scratch_[static_cast<std::size_t>(id)] >= live_[static_cast<std::size_t>(id)]) ok = false;
        scratch_[static_cast<std::size_t>(id)] = 0;
    }
    return ok;
}

void RoundWorkspace::deny(const Query& q) {
    for (Element x : q) {
        if (is_dead(x)) continue;
        dead_[static_cast<std::size_t>(x)] = 1;
        for (int id : holders_[static_cast<std::size_t>(x)]) --live_[static_cast<std::size_t>(id)];
    }
}

void RoundWorkspace::affirm(const Query& q) {
    const auto id = static_cast<int>(live_.size());
    int size = 0;
    for (Element x : q) {
        if (is_dead(x)) continue;
        holders_[static_cast<std::size_t>(x)].push_back(id);
        ++size;
    }
    if (size == 0) throw std::logic_error("RoundWorkspace: yes on a query with no live element");
    live_.push_back(size);
    scratch_.push_back(0);
}

// --- answering rules ---------------------------------------------------------

namespace {

void ensure_seeded(AdversaryLedger& ledger, const GameConfig& config) {
    if (ledger.n_seq.empty()) ledger.n_seq.push_back(config.n);
}

void note_mode(AdversaryLedger& ledger, const std::vector<Answer>& answers) {
    if (std::find(answers.begin(), answers.end(), Answer::yes) != answers.end())
        ledger.mode = AdversaryLedger::Mode::had_yes;
}

}  // namespace

std::vector<Answer> greedy_lemma_answer(const KnowledgeState& state, const std::vector<Query>& queries,
                                        AdversaryLedger& ledger, int round, const GameConfig& config) {
    if (round >= config.r) throw std::logic_error("greedy_lemma_answer: the last round belongs to the endgame rule");
    if (config.d != 1) throw std::invalid_argument("greedy_lemma_answer: rule is defined for d = 1");
    ensure_seeded(ledger, config);

    const auto k = static_cast<std::int64_t>(queries.size());
    const std::int64_t n_t = ledger.n_seq.back() / (k + 1);
    ledger.n_seq.push_back(n_t);
    ledger.round_sizes.push_back(k);

    const GreedyOrdering order = greedy_ordering(queries, free_elements(state));
    std::size_t first_yes = order.marginals.size();
    for (std::size_t i = 0; i < order.marginals.size(); ++i) {
        if (static_cast<std::int64_t>(order.marginals[i].size()) >= n_t + 1) {
            first_yes = i;
            break;
        }
    }
    std::map<ElementSet, Answer> verdicts;
    for (std::size_t i = 0; i < order.ordered_queries.size(); ++i)
        verdicts[order.ordered_queries[i]] = i < first_yes ? Answer::no : Answer::yes;

    std::vector<Answer> answers;
    answers.reserve(queries.size());
    for (const auto& q : queries) answers.push_back(verdicts.at(state.restrict_to_free(make_set(q))));
    note_mode(ledger, answers);
    return answers;
}

GoodFamilyAnswer good_family_answer(const KnowledgeState& state, const std::vector<Query>& queries,
                                    AdversaryLedger& ledger, int round, const GameConfig& config,
                                    std::int64_t tuple_budget) {
    if (round >= config.r) throw std::logic_error("good_family_answer: the last round belongs to the endgame rule");
    ensure_seeded(ledger, config);

    const auto k = static_cast<std::int64_t>(queries.size());
    const std::int64_t n_prev = ledger.n_seq.back();
    const std::int64_t n_t = n_prev / (k + 1);
    ledger.n_seq.push_back(n_t);
    ledger.round_sizes.push_back(k);
    std::int64_t threshold = n_t;
    if (round == config.r - 1) {
        threshold = n_prime(n_prev, k, config.d);
        ledger.n_prime = threshold;
    }

    std::vector<ElementSet> normalized;
    normalized.reserve(queries.size());
    std::vector<ElementSet> live;
    for (const auto& q : queries) {
        normalized.push_back(state.restrict_to_free(make_set(q)));
        if (!normalized.back().empty()) live.push_back(normalized.back());
    }

    GoodFamilyAnswer out;
    out.family = find_good_family(live, threshold, config.d, tuple_budget);
    if (out.family.heuristic) ledger.exact = false;
    auto members = out.family.members;
    std::sort(members.begin(), members.end());
    out.answers.reserve(queries.size());
    for (const auto& q : normalized) {
        const bool deny = q.empty() || std::binary_search(members.begin(), members.end(), q);
        out.answers.push_back(deny ? Answer::no : Answer::yes);
    }
    note_mode(ledger, out.answers);
    return out;
}

std::vector<Answer> endgame_answer(const KnowledgeState& state, const std::vector<Query>& queries, int d,
                                   std::int64_t node_budget) {
    if (!is_consistent(state)) throw std::logic_error("endgame_answer: inconsistent state");
    // Only |A| < d matters, and then A itself.
    const std::optional<ElementSet> small_hitting_set = hitting_set_up_to(state.residual_yes(), d - 1, node_budget);

    RoundWorkspace ws(state);
    std::vector<Answer> answers(queries.size(), Answer::yes);
    std::vector<std::uint8_t> done(queries.size(), 0);

    while (true) {
        // Unanswered queries with at most one live element, smallest first.
        std::vector<std::pair<ElementSet, std::size_t>> pending;
        for (std::size_t i = 0; i < queries.size(); ++i) {
            if (done[i] || ws.live_size(queries[i]) > 1) continue;
            pending.emplace_back(ws.live_part(queries[i]), i);
        }
        if (pending.empty()) break;
        std::sort(pending.begin(), pending.end());
        for (const auto& [ignored, i] : pending) {
            const ElementSet live = ws.live_part(queries[i]);
            done[i] = 1;
            if (live.empty()) {
                answers[i] = Answer::no;
                continue;
            }
            const Element x = live.front();
            bool deny = ws.can_deny(live);
            if (deny && small_hitting_set && contains(*small_hitting_set, x)) deny = false;
            if (deny) {
                answers[i] = Answer::no;
                ws.deny(live);
            } else {
                answers[i] = Answer::yes;
                ws.affirm(live);
            }
        }
    }
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (done[i]) continue;
        answers[i] = Answer::yes;
        ws.affirm(queries[i]);
    }
    return answers;
}

std::vector<Answer> fixed_set_answer(const ElementSet& hidden, const std::vector<Query>& queries) {
    std::vector<Answer> answers;
    answers.reserve(queries.size());
    for (const auto& q : queries) answers.push_back(intersects(make_set(q), hidden) ? Answer::yes : Answer::no);
    return answers;
}

void refresh_ledger(AdversaryLedger& ledger, const KnowledgeState& after, int d, std::int64_t node_budget) {
    const int m = after.min_residual_size();
    ledger.m_current = m < 0 ? std::nullopt : std::optional<std::int64_t>(m);
    ledger.m_d.assign(static_cast<std::size_t>(d), std::nullopt);
    try {
        for (int i = 1; i <= d; ++i)
            ledger.m_d[static_cast<std::size_t>(i - 1)] = min_union(after.residual_yes(), i, node_budget);
    } catch (const BudgetExceeded&) {
        ledger.exact = false;
    }
}

// --- LowerBoundAdversary -----------------------------------------------------

LowerBoundAdversary::LowerBoundAdversary(const GameConfig& config, EarlyRule rule, std::int64_t tuple_budget)
    : config_(config), rule_(rule), tuple_budget_(tuple_budget) {
    config.validate();
    if (rule == EarlyRule::greedy && config.d != 1)
        throw std::invalid_argument("lemma adversary requires d = 1 (use good-family)");
    ledger_.n_seq.push_back(config.n);
}

std::vector<Answer> LowerBoundAdversary::answer(const KnowledgeState& state, const std::vector<Query>& queries,
                                                int round) {
    if (round < config_.r) {
        if (rule_ == EarlyRule::greedy) return greedy_lemma_answer(state, queries, ledger_, round, config_);
        return good_family_answer(state, queries, ledger_, round, config_, tuple_budget_).answers;
    }
    ledger_.round_sizes.push_back(static_cast<std::int64_t>(queries.size()));
    try {
        return endgame_answer(state, queries, config_.d);
    } catch (const BudgetExceeded&) {
        // The whole free set is a consistent excellent set.
        fell_back_ = true;
        return fixed_set_answer(free_elements(state), queries);
    }
}

void LowerBoundAdversary::observe(const RoundRecord& record, const KnowledgeState& after) {
    const int t = record.index;
    if (t >= config_.r) return;
    refresh_ledger(ledger_, after, config_.d);

    const std::int64_t n = config_.n;
    const std::int64_t n_t = ledger_.n_seq.at(static_cast<std::size_t>(t));
    const bool all_no = ledger_.mode == AdversaryLedger::Mode::all_no_so_far;
    LedgerCheck check;
    check.round = t;
    check.exact = ledger_.exact;
    std::ostringstream detail;

    if (rule_ == EarlyRule::greedy) {
        check.name = "greedy_round_invariant";
        if (all_no) {
            check.passed = after.dead_count() <= n - n_t;
            detail << "all no: |G|=" << after.dead_count() << " <= n-n_t=" << n - n_t;
        } else {
            check.passed = ledger_.m_current && *ledger_.m_current >= n_t + 1;
            detail << "m_t=" << ledger_.m_current.value_or(-1) << " >= n_t+1=" << n_t + 1;
        }
    } else {
        const bool penultimate = t == config_.r - 1;
        const std::int64_t theta = penultimate ? ledger_.n_prime.value_or(0) : n_t;
        check.name = penultimate ? "penultimate_round_invariant" : "good_family_round_invariant";
        if (all_no) {
            const std::int64_t cap = penultimate ? n - config_.d * theta : n - theta;
            check.passed = after.dead_count() <= cap;
            detail << "all no: |G|=" << after.dead_count() << " <= " << cap;
        } else {
            check.passed = true;
            detail << "theta=" << theta;
            for (int i = 1; i <= config_.d; ++i) {
                const auto& m = ledger_.m_d[static_cast<std::size_t>(i - 1)];
                detail << " m(" << i << ")=" << (m ? std::to_string(*m) : std::string("inf"));
                if (m && *m < i * theta) check.passed = false;
            }
        }
    }
    check.detail = detail.str();
    checks_.push_back(std::move(check));
}

std::optional<std::int64_t> LowerBoundAdversary::accounting_floor() const {
    if (static_cast<int>(ledger_.round_sizes.size()) < config_.r) return std::nullopt;
    std::int64_t asked = 0;
    for (int t = 0; t + 1 < config_.r; ++t) asked += ledger_.round_sizes[static_cast<std::size_t>(t)];
    if (rule_ == EarlyRule::greedy) return asked + ledger_.n_seq.at(static_cast<std::size_t>(config_.r - 1));
    if (config_.r == 1) return static_cast<std::int64_t>(config_.n) - config_.d + 1;
    return asked + config_.d * ledger_.n_prime.value_or(0) - config_.d;
}

bool LowerBoundAdversary::forces_lower_bound() const {
    return rule_ == EarlyRule::greedy || config_.d >= 2;
}

// --- baselines ---------------------------------------------------------------

FixedSetAdversary::FixedSetAdversary(const GameConfig& config, ElementSet hidden) : hidden_(make_set(std::move(hidden))) {
    for (Element x : hidden_)
        if (x < 1 || x > config.n) throw std::invalid_argument("fixed adversary: element out of range");
}

std::string FixedSetAdversary::name() const {
    std::string out = "fixed:";
    for (std::size_t i = 0; i < hidden_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(hidden_[i]);
    }
    return out;
}

std::vector<Answer> FixedSetAdversary::answer(const KnowledgeState&, const std::vector<Query>& queries, int) {
    return fixed_set_answer(hidden_, queries);
}

RandomAdversary::RandomAdversary(double p, std::uint64_t seed) : p_(p), rng_(seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("random adversary: p must lie in [0, 1]");
}

std::string RandomAdversary::name() const {
    std::ostringstream os;
    os << "random:" << p_;
    return os.str();
}

std::vector<Answer> RandomAdversary::answer(const KnowledgeState& state, const std::vector<Query>& queries, int) {
    RoundWorkspace ws(state);
    std::bernoulli_distribution coin(p_);
    std::vector<Answer> answers;
    answers.reserve(queries.size());
    for (const auto& q : queries) {
        if (ws.live_size(q) == 0) {
            answers.push_back(Answer::no);
        } else if (!coin(rng_) && ws.can_deny(q)) {
            answers.push_back(Answer::no);
            ws.deny(q);
        } else {
            answers.push_back(Answer::yes);
            ws.affirm(q);
        }
    }
    return answers;
}

MutantAdversary::MutantAdversary(const GameConfig& config)
    : config_(config),
      inner_(config, config.d == 1 ? LowerBoundAdversary::EarlyRule::greedy : LowerBoundAdversary::EarlyRule::good_family) {}

std::vector<Answer> MutantAdversary::answer(const KnowledgeState& state, const std::vector<Query>& queries, int round) {
    if (round < config_.r) return inner_.answer(state, queries, round);
    std::vector<Answer> answers;
    for (const auto& q : queries) answers.push_back(state.restrict_to_free(make_set(q)).empty() ? Answer::no : Answer::yes);
    return answers;
}

// --- factory -----------------------------------------------------------------

namespace {

ElementSet parse_ids(const std::string& text) {
    ElementSet ids;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const int x = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad element id: " + item);
        ids.push_back(x);
    }
    return make_set(std::move(ids));
}

}  // namespace

std::unique_ptr<Adversary> make_adversary(const std::string& spec, const GameConfig& config, std::uint64_t seed,
                                          std::int64_t tuple_budget) {
    using Rule = LowerBoundAdversary::EarlyRule;
    if (spec == "lemma") return std::make_unique<LowerBoundAdversary>(config, Rule::greedy, tuple_budget);
    if (spec == "good-family") return std::make_unique<LowerBoundAdversary>(config, Rule::good_family, tuple_budget);
    if (spec == "endgame-auto")
        return std::make_unique<LowerBoundAdversary>(config, config.d == 1 ? Rule::greedy : Rule::good_family,
                                                     tuple_budget);
    if (spec == "mutant") return std::make_unique<MutantAdversary>(config);
    if (spec == "fixed:all") return std::make_unique<FixedSetAdversary>(config, iota_set(1, config.n));
    if (spec.rfind("fixed:", 0) == 0) return std::make_unique<FixedSetAdversary>(config, parse_ids(spec.substr(6)));
    if (spec.rfind("random:", 0) == 0) {
        std::size_t used = 0;
        const std::string arg = spec.substr(7);
        const double p = std::stod(arg, &used);
        if (used != arg.size()) throw std::invalid_argument("bad probability in " + spec);
        return std::make_unique<RandomAdversary>(p, seed);
    }
    throw std::invalid_argument("unknown adversary: " + spec);
}

}  // namespace roundsearch
