#include "roundsearch/questioner.hpp"

#include <algorithm>

#include "roundsearch/bounds.hpp"

namespace roundsearch {

Partition balanced_partition(const ElementSet& base, int parts_count) {
    if (parts_count < 1) throw std::invalid_argument("balanced_partition: parts_count must be >= 1");
    const std::size_t total = base.size();
    const std::size_t parts = std::min<std::size_t>(static_cast<std::size_t>(parts_count), total);
    Partition out;
    if (parts == 0) return out;
    out.reserve(parts);
    const std::size_t small = total / parts;
    const std::size_t large_count = total % parts;
    auto it = base.begin();
    for (std::size_t i = 0; i < parts; ++i) {
        const std::size_t len = small + (i < large_count ? 1 : 0);
        out.emplace_back(it, it + static_cast<std::ptrdiff_t>(len));
        it += static_cast<std::ptrdiff_t>(len);
    }
    return out;
}

Verdict best_verdict(const KnowledgeState& state, int d) {
    if (!is_consistent(state)) return Verdict::fewer_than_d();
    ElementSet forced = forced_excellent(state);
    if (static_cast<int>(forced.size()) >= d) {
        forced.resize(static_cast<std::size_t>(d));
        return Verdict::found(std::move(forced));
    }
    return Verdict::fewer_than_d();
}

// ---------------------------------------------------------------------------

KatonaSplit::KatonaSplit(const GameConfig& config)
    : config_(config), branching_(static_cast<int>(ceil_root(config.n, config.r))) {
    config.validate();
    if (config.d != 1) throw std::invalid_argument("katona: single-element strategy requires d = 1");
}

std::vector<Query> KatonaSplit::next_round(const KnowledgeState& state, int round) {
    if (round == 1) {
        picked_ = iota_set(1, config_.n);
        had_yes_ = false;
    }
    Partition parts = balanced_partition(state.restrict_to_free(picked_), branching_);
    held_back_.clear();
    const bool ask_everything = round == config_.r && !had_yes_;
    if (!ask_everything && !parts.empty()) {
        // Larger blocks come first, so the last part is a smallest one.
        held_back_ = std::move(parts.back());
        parts.pop_back();
    }
    asked_ = parts;
    return parts;
}

void KatonaSplit::observe(const RoundRecord& record, const KnowledgeState&) {
    const auto yes = std::find(record.answers.begin(), record.answers.end(), Answer::yes);
    if (yes != record.answers.end()) {
        had_yes_ = true;
        picked_ = asked_[static_cast<std::size_t>(yes - record.answers.begin())];
    } else {
        picked_ = held_back_;
    }
}

std::optional<Verdict> KatonaSplit::verdict(const KnowledgeState& state) { return best_verdict(state, 1); }

// ---------------------------------------------------------------------------

namespace {

std::int64_t pow_int(std::int64_t base, int e) {
    std::int64_t acc = 1;
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
}

Partition singletons_of(const ElementSet& s) {
    Partition out;
    out.reserve(s.size());
    for (Element x : s) out.push_back({x});
    return out;
}

}  // namespace

KatonaParallel::KatonaParallel(const GameConfig& config) : config_(config) {
    config.validate();
    if (config.d < 2) throw std::invalid_argument("katona-parallel: requires d >= 2");
    first_parts_ = ceil_root(pow_int(config.d, config.r - 1) * config.n, config.r);
    if (config.r > 1) {
        const std::int64_t per_part = (config.n + first_parts_ - 1) / first_parts_;
        later_parts_ = ceil_root(per_part, config.r - 1);
    } else {
        later_parts_ = 1;
    }
}

std::vector<Query> KatonaParallel::next_round(const KnowledgeState& state, int round) {
    splits_.clear();
    if (round == 1) {
        picked_.clear();
        closed_ = true;
        Split all{iota_set(1, config_.n),
                  balanced_partition(iota_set(1, config_.n), static_cast<int>(first_parts_)), std::nullopt};
        splits_.push_back(std::move(all));
        return splits_.front().asked;
    }

    std::vector<Query> out;
    for (const auto& part : picked_) {
        ElementSet live = state.restrict_to_free(part);
        Split split{live, {}, std::nullopt};
        if (live.size() > 1) {
            split.asked = round == config_.r ? singletons_of(live)
                                             : balanced_partition(live, static_cast<int>(later_parts_));
            if (!closed_) {
                split.held_back = std::move(split.asked.back());
                split.asked.pop_back();
            }
            out.insert(out.end(), split.asked.begin(), split.asked.end());
        }
        splits_.push_back(std::move(split));
    }
    return out;
}

void KatonaParallel::observe(const RoundRecord& record, const KnowledgeState&) {
    std::vector<ElementSet> children;
    std::size_t cursor = 0;
    for (const auto& split : splits_) {
        if (split.parent.size() <= 1 && split.asked.empty()) {
            // Banked singleton certificate (or an emptied part, which is dropped).
            if (!split.parent.empty()) children.push_back(split.parent);
            continue;
        }
        bool any_yes = false;
        for (const auto& part : split.asked) {
            if (record.answers.at(cursor++) == Answer::yes) {
                children.push_back(part);
                any_yes = true;
            }
        }
        if (split.held_back && !any_yes) children.push_back(*split.held_back);
    }

    if (static_cast<int>(children.size()) >= config_.d) {
        children.resize(static_cast<std::size_t>(config_.d));
        closed_ = false;
    }
    picked_ = std::move(children);
}

std::optional<Verdict> KatonaParallel::verdict(const KnowledgeState& state) {
    return best_verdict(state, config_.d);
}

// ---------------------------------------------------------------------------

std::vector<Query> exhaustive_singletons(const KnowledgeState& state) {
    return singletons_of(free_elements(state));
}

std::vector<Query> ExhaustiveSingletons::next_round(const KnowledgeState& state, int round) {
    if (round != 1) return {};
    return exhaustive_singletons(state);
}

std::optional<Verdict> ExhaustiveSingletons::verdict(const KnowledgeState& state) {
    return best_verdict(state, config_.d);
}

// ---------------------------------------------------------------------------

RandomQuestioner::RandomQuestioner(const GameConfig& config, std::uint64_t seed)
    : config_(config), rng_(seed) {
    config.validate();
}

std::vector<Query> RandomQuestioner::next_round(const KnowledgeState& state, int round) {
    if (round == config_.r) return final_round(state);

    ElementSet free = free_elements(state);
    if (free.empty()) return {};
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int span = static_cast<int>(free.size());
    const int cap = std::min(span, 2 * static_cast<int>(ceil_root(span, 2)) + 2);
    std::uniform_int_distribution<int> count_dist(0, cap);
    const int k = count_dist(rng_);

    std::vector<Query> out;
    if (unit(rng_) < 0.5) {
        // Random subsets with a per-round density.
        const double density = 0.05 + 0.55 * unit(rng_);
        for (int i = 0; i < k; ++i) {
            Query q;
            for (Element x : free)
                if (unit(rng_) < density) q.push_back(x);
            out.push_back(std::move(q));
        }
    } else {
        // Partition of a shuffled free set, possibly holding one part back.
        std::shuffle(free.begin(), free.end(), rng_);
        const int parts = std::max(1, k);
        for (int i = 0; i < parts; ++i) out.emplace_back();
        for (std::size_t i = 0; i < free.size(); ++i) out[i % static_cast<std::size_t>(parts)].push_back(free[i]);
        for (auto& q : out) std::sort(q.begin(), q.end());
        if (unit(rng_) < 0.5) out.pop_back();
    }
    return out;
}

std::vector<Query> RandomQuestioner::final_round(const KnowledgeState& state) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double style = unit(rng_);
    const ElementSet free = free_elements(state);

    if (style < 0.35) return singletons_of(free);

    if (style < 0.8 && !state.residual_yes().empty()) {
        // Sweep the d smallest residual sets, skipping one element of each:
        // the skipped element is forced whenever the others are denied.
        auto residual = state.residual_yes();
        std::stable_sort(residual.begin(), residual.end(),
                         [](const ElementSet& a, const ElementSet& b) { return a.size() < b.size(); });
        std::vector<Query> out;
        ElementSet used;
        for (std::size_t i = 0; i < residual.size() && static_cast<int>(i) < config_.d; ++i) {
            ElementSet elems = set_difference(residual[i], used);
            if (elems.empty()) continue;
            std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
            const std::size_t skip = pick(rng_);
            for (std::size_t j = 0; j < elems.size(); ++j)
                if (j != skip) out.push_back({elems[j]});
            used = set_union(used, elems);
        }
        return out;
    }

    // Random subset of singletons; usually not enough to certify anything.
    std::vector<Query> out;
    const double keep = unit(rng_);
    for (Element x : free)
        if (unit(rng_) < keep) out.push_back({x});
    return out;
}

std::optional<Verdict> RandomQuestioner::verdict(const KnowledgeState& state) {
    return best_verdict(state, config_.d);
}

// ---------------------------------------------------------------------------

std::unique_ptr<Questioner> make_questioner(const std::string& name, const GameConfig& config, std::uint64_t seed) {
    if (name == "katona") return std::make_unique<KatonaSplit>(config);
    if (name == "katona-parallel") return std::make_unique<KatonaParallel>(config);
    if (name == "singletons") return std::make_unique<ExhaustiveSingletons>(config);
    if (name == "random") return std::make_unique<RandomQuestioner>(config, seed);
    throw std::invalid_argument("unknown questioner: " + name);
}

}  // namespace roundsearch
