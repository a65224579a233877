#include "roundsearch/knowledge.hpp"

#include <algorithm>

namespace roundsearch {

namespace {

void normalize_family(std::vector<ElementSet>& family) {
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
}

}  // namespace

KnowledgeState::KnowledgeState(int n) : n_(n), dead_mask_(static_cast<std::size_t>(n) + 1, 0) {
    if (n < 1) throw std::invalid_argument("KnowledgeState: n must be >= 1");
}

KnowledgeState::KnowledgeState(int n, const ElementSet& dead, std::vector<ElementSet> residual_yes)
    : KnowledgeState(n) {
    for (Element x : dead) {
        if (x < 1 || x > n) throw std::out_of_range("KnowledgeState: dead element out of range");
        if (!dead_mask_[x]) {
            dead_mask_[x] = 1;
            ++dead_count_;
        }
    }
    residual_.reserve(residual_yes.size());
    for (auto& s : residual_yes) residual_.push_back(restrict_to_free(make_set(std::move(s))));
    normalize_family(residual_);
}

ElementSet KnowledgeState::dead() const {
    ElementSet out;
    out.reserve(static_cast<std::size_t>(dead_count_));
    for (int x = 1; x <= n_; ++x)
        if (dead_mask_[x]) out.push_back(x);
    return out;
}

int KnowledgeState::min_residual_size() const {
    int best = -1;
    for (const auto& s : residual_) {
        const int sz = static_cast<int>(s.size());
        if (best < 0 || sz < best) best = sz;
    }
    return best;
}

ElementSet KnowledgeState::restrict_to_free(const Query& q) const {
    ElementSet out;
    out.reserve(q.size());
    for (Element x : q)
        if (x >= 1 && x <= n_ && !dead_mask_[x]) out.push_back(x);
    return out;
}

KnowledgeState update_knowledge(const KnowledgeState& state, const RoundRecord& round) {
    if (round.answers.size() != round.queries.size())
        throw std::invalid_argument("update_knowledge: answers and queries differ in length");

    KnowledgeState next = state;
    for (std::size_t i = 0; i < round.queries.size(); ++i) {
        if (round.answers[i] != Answer::no) continue;
        for (Element x : round.queries[i]) {
            if (x < 1 || x > state.n_) throw std::out_of_range("update_knowledge: query element out of range");
            if (!next.dead_mask_[x]) {
                next.dead_mask_[x] = 1;
                ++next.dead_count_;
            }
        }
    }

    std::vector<ElementSet> residual;
    residual.reserve(state.residual_.size() + round.queries.size());
    for (const auto& s : state.residual_) residual.push_back(next.restrict_to_free(s));
    for (std::size_t i = 0; i < round.queries.size(); ++i)
        if (round.answers[i] == Answer::yes) residual.push_back(next.restrict_to_free(round.queries[i]));
    normalize_family(residual);
    next.residual_ = std::move(residual);
    return next;
}

std::vector<KnowledgeState> replay(const Transcript& t) {
    std::vector<KnowledgeState> states;
    states.reserve(t.rounds.size() + 1);
    states.emplace_back(t.config.n);
    for (const auto& round : t.rounds) states.push_back(update_knowledge(states.back(), round));
    return states;
}

bool is_consistent(const KnowledgeState& state) {
    return std::none_of(state.residual_yes().begin(), state.residual_yes().end(),
                        [](const ElementSet& s) { return s.empty(); });
}

ElementSet forced_excellent(const KnowledgeState& state) {
    if (!is_consistent(state)) throw std::logic_error("forced_excellent: inconsistent knowledge state");
    ElementSet out;
    for (const auto& s : state.residual_yes())
        if (s.size() == 1) out.push_back(s.front());
    return make_set(std::move(out));
}

bool verdict_valid(const KnowledgeState& state, const Verdict& verdict, int d) {
    if (!is_consistent(state)) return false;
    if (verdict.kind == Verdict::Kind::fewer_than_d) return state.free_count() <= d - 1;

    const ElementSet& xs = verdict.elements;
    if (static_cast<int>(xs.size()) != d) return false;
    if (make_set(xs).size() != xs.size()) return false;
    const ElementSet forced = forced_excellent(state);
    return std::all_of(xs.begin(), xs.end(), [&](Element x) { return contains(forced, x); });
}

ElementSet free_elements(const KnowledgeState& state) {
    ElementSet out;
    out.reserve(static_cast<std::size_t>(state.free_count()));
    for (int x = 1; x <= state.n(); ++x)
        if (!state.is_dead(x)) out.push_back(x);
    return out;
}

}  // namespace roundsearch
