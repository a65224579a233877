#include "roundsearch/set_family.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>

#include <boost/dynamic_bitset.hpp>

namespace roundsearch {

namespace {

using Bits = boost::dynamic_bitset<std::uint64_t>;

std::vector<ElementSet> distinct_sets(std::vector<ElementSet> family) {
    for (auto& s : family) s = make_set(std::move(s));
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    return family;
}

/// Relabels the elements used by a family onto 0..m−1 so set operations run
/// on short bitsets.
class CompactFamily {
public:
    explicit CompactFamily(const std::vector<ElementSet>& family) {
        for (const auto& s : family) universe_.insert(universe_.end(), s.begin(), s.end());
        universe_ = make_set(std::move(universe_));
        bits_.reserve(family.size());
        for (const auto& s : family) bits_.push_back(to_bits(s));
    }

    Bits to_bits(const ElementSet& s) const {
        Bits b(universe_.size());
        for (Element x : s) {
            auto it = std::lower_bound(universe_.begin(), universe_.end(), x);
            if (it != universe_.end() && *it == x) b.set(static_cast<std::size_t>(it - universe_.begin()));
        }
        return b;
    }

    Bits empty() const { return Bits(universe_.size()); }
    const ElementSet& universe() const { return universe_; }
    const Bits& operator[](std::size_t i) const { return bits_[i]; }
    std::size_t size() const { return bits_.size(); }

private:
    ElementSet universe_;
    std::vector<Bits> bits_;
};

// Members as rows of 64-bit words over their compacted universe.
struct FlatFamily {
    std::size_t words = 0;
    std::vector<std::uint64_t> bits;

    explicit FlatFamily(const std::vector<ElementSet>& family) {
        ElementSet universe;
        for (const auto& s : family) universe.insert(universe.end(), s.begin(), s.end());
        universe = make_set(std::move(universe));
        words = std::max<std::size_t>(1, (universe.size() + 63) / 64);
        bits.assign(family.size() * words, 0);
        for (std::size_t j = 0; j < family.size(); ++j)
            for (Element x : family[j]) {
                const auto b = static_cast<std::size_t>(std::lower_bound(universe.begin(), universe.end(), x) - universe.begin());
                bits[j * words + b / 64] |= std::uint64_t{1} << (b % 64);
            }
    }
    const std::uint64_t* row(std::size_t j) const { return bits.data() + j * words; }
};

// |a ∪ b|
#if defined(__GNUC__) && defined(__x86_64__) && defined(__linux__)
__attribute__((target_clones("popcnt", "default")))
#endif
std::size_t union_count(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words; ++w) c += static_cast<std::size_t>(std::popcount(a[w] | b[w]));
    return c;
}

enum class SearchStatus { found, none, exceeded };

struct ViolationSearch {
    const CompactFamily& family;
    std::int64_t threshold;
    int d;
    std::int64_t& budget;

    std::vector<std::size_t> order;
    std::vector<Bits> marginal;
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> found;
    // Union of a tuple >= (sum of marginal sizes) / mult, where mult is the
    // largest number of marginals sharing one element.
    std::vector<std::size_t> prefix;
    std::size_t mult = 1;

    SearchStatus run(const std::vector<std::size_t>& remaining, const Bits& covered) {
        marginal.assign(family.size(), family.empty());
        for (std::size_t id : remaining) marginal[id] = family[id] - covered;
        order = remaining;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return marginal[a].count() < marginal[b].count();
        });
        std::vector<std::size_t> hits(covered.size(), 0);
        mult = 1;
        prefix.assign(order.size() + 1, 0);
        for (std::size_t j = 0; j < order.size(); ++j) {
            const Bits& m = marginal[order[j]];
            prefix[j + 1] = prefix[j] + m.count();
            for (auto b = m.find_first(); b != Bits::npos; b = m.find_next(b)) mult = std::max(mult, ++hits[b]);
        }
        for (int i = 1; i <= d; ++i) {
            if (order.size() < static_cast<std::size_t>(i)) break;
            chosen.clear();
            const SearchStatus s = dfs(0, i, family.empty(), 0);
            if (s != SearchStatus::none) return s;
        }
        return SearchStatus::none;
    }

    SearchStatus dfs(std::size_t start, int width, const Bits& acc, std::size_t chosen_sum) {
        if (--budget < 0) return SearchStatus::exceeded;
        const auto limit = static_cast<std::size_t>(width) * static_cast<std::size_t>(std::max<std::int64_t>(threshold, 0));
        if (acc.count() >= limit) return SearchStatus::none;
        if (chosen.size() == static_cast<std::size_t>(width)) {
            found = chosen;
            return SearchStatus::found;
        }
        const std::size_t need = static_cast<std::size_t>(width) - chosen.size();
        for (std::size_t j = start; j + need <= order.size(); ++j) {
            const std::size_t id = order[j];
            if (marginal[id].count() >= limit) break;
            if (chosen_sum + prefix[j + need] - prefix[j] >= limit * mult) break;
            chosen.push_back(id);
            const SearchStatus s = dfs(j + 1, width, acc | marginal[id], chosen_sum + marginal[id].count());
            chosen.pop_back();
            if (s != SearchStatus::none) return s;
        }
        return SearchStatus::none;
    }
};

// Greedy marginal ordering over the remaining ids; checks each prefix length.
std::optional<std::vector<std::size_t>> heuristic_violation(const CompactFamily& family,
                                                            const std::vector<std::size_t>& remaining,
                                                            const Bits& covered, std::int64_t threshold, int d) {
    std::vector<std::size_t> pool = remaining;
    std::vector<std::size_t> prefix;
    Bits acc = covered;
    for (int i = 1; i <= d && !pool.empty(); ++i) {
        auto best = pool.begin();
        std::size_t best_size = std::numeric_limits<std::size_t>::max();
        for (auto it = pool.begin(); it != pool.end(); ++it) {
            const std::size_t sz = (family[*it] - acc).count();
            if (sz < best_size) {
                best_size = sz;
                best = it;
            }
        }
        prefix.push_back(*best);
        acc |= family[*best];
        pool.erase(best);
        if (static_cast<std::int64_t>((acc - covered).count()) < i * threshold) return prefix;
    }
    return std::nullopt;
}

}  // namespace

GreedyOrdering greedy_ordering(const std::vector<Query>& queries, const ElementSet& base) {
    std::vector<ElementSet> normalized;
    normalized.reserve(queries.size());
    for (const auto& q : queries) normalized.push_back(set_intersection(make_set(q), base));
    const std::vector<ElementSet> family = distinct_sets(std::move(normalized));

    Element max_elem = 0;
    for (const auto& s : family)
        if (!s.empty()) max_elem = std::max(max_elem, s.back());
    std::vector<std::vector<std::size_t>> holders(static_cast<std::size_t>(max_elem) + 1);
    std::vector<std::size_t> marginal_size(family.size());
    for (std::size_t j = 0; j < family.size(); ++j) {
        marginal_size[j] = family[j].size();
        for (Element x : family[j]) holders[static_cast<std::size_t>(x)].push_back(j);
    }

    std::vector<std::uint8_t> covered(holders.size(), 0);
    std::vector<std::uint8_t> used(family.size(), 0);
    GreedyOrdering out;
    out.ordered_queries.reserve(family.size());
    out.marginals.reserve(family.size());
    for (std::size_t step = 0; step < family.size(); ++step) {
        std::size_t pick = family.size();
        for (std::size_t j = 0; j < family.size(); ++j) {
            if (used[j]) continue;
            if (pick == family.size() || marginal_size[j] < marginal_size[pick]) pick = j;
        }
        used[pick] = 1;
        ElementSet h;
        for (Element x : family[pick]) {
            if (covered[static_cast<std::size_t>(x)]) continue;
            covered[static_cast<std::size_t>(x)] = 1;
            h.push_back(x);
            for (std::size_t holder : holders[static_cast<std::size_t>(x)]) --marginal_size[holder];
        }
        out.ordered_queries.push_back(family[pick]);
        out.marginals.push_back(std::move(h));
    }
    return out;
}

GoodFamily find_good_family(const std::vector<Query>& queries, std::int64_t threshold, int d,
                            std::int64_t tuple_budget) {
    if (d < 1) throw std::invalid_argument("find_good_family: d must be >= 1");
    if (threshold < 0) throw std::invalid_argument("find_good_family: threshold must be >= 0");

    const std::vector<ElementSet> family = distinct_sets(queries);
    const CompactFamily compact(family);

    GoodFamily out;
    out.threshold = threshold;
    std::vector<std::size_t> remaining(family.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    Bits covered = compact.empty();
    std::int64_t budget = tuple_budget;
    bool exact = true;

    auto absorb = [&](const std::vector<std::size_t>& tuple) {
        for (std::size_t id : tuple) {
            out.members.push_back(family[id]);
            covered |= compact[id];
            remaining.erase(std::find(remaining.begin(), remaining.end(), id));
        }
    };

    while (true) {
        if (exact) {
            ViolationSearch search{compact, threshold, d, budget, {}, {}, {}, {}, {}, 1};
            const SearchStatus s = search.run(remaining, covered);
            if (s == SearchStatus::found) {
                absorb(search.found);
                continue;
            }
            if (s == SearchStatus::none) break;
            exact = false;
        }
        if (auto tuple = heuristic_violation(compact, remaining, covered, threshold, d)) {
            absorb(*tuple);
            continue;
        }
        // Heuristic found nothing: try one exact verification pass.
        std::int64_t verify_budget = tuple_budget;
        ViolationSearch verify{compact, threshold, d, verify_budget, {}, {}, {}, {}, {}, 1};
        const SearchStatus s = verify.run(remaining, covered);
        if (s == SearchStatus::found) {
            absorb(verify.found);
            continue;
        }
        out.heuristic = s == SearchStatus::exceeded;
        break;
    }
    return out;
}

std::optional<bool> is_good_family(const std::vector<Query>& queries, const std::vector<ElementSet>& members,
                                   std::int64_t threshold, int d, std::int64_t tuple_budget) {
    const std::vector<ElementSet> family = distinct_sets(queries);
    const std::vector<ElementSet> inside = distinct_sets(members);
    const CompactFamily compact(family);
    Bits covered = compact.empty();
    std::vector<std::size_t> remaining;
    for (std::size_t j = 0; j < family.size(); ++j) {
        if (std::binary_search(inside.begin(), inside.end(), family[j])) covered |= compact[j];
        else remaining.push_back(j);
    }
    std::int64_t budget = tuple_budget;
    ViolationSearch search{compact, threshold, d, budget, {}, {}, {}, {}, {}, 1};
    switch (search.run(remaining, covered)) {
        case SearchStatus::found: return false;
        case SearchStatus::none: return true;
        case SearchStatus::exceeded: return std::nullopt;
    }
    return std::nullopt;
}

std::optional<std::int64_t> min_union(const std::vector<ElementSet>& family_in, int i, std::int64_t node_budget) {
    if (i < 1) throw std::invalid_argument("min_union: i must be >= 1");
    std::vector<ElementSet> family = distinct_sets(family_in);
    if (family.size() < static_cast<std::size_t>(i)) return std::nullopt;
    std::stable_sort(family.begin(), family.end(),
                     [](const ElementSet& a, const ElementSet& b) { return a.size() < b.size(); });
    const FlatFamily flat(family);

    // Greedy upper bound from a few of the smallest starting members.
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::vector<std::uint64_t> acc(flat.words);
    for (std::size_t start = 0; start < std::min<std::size_t>(family.size(), 4); ++start) {
        std::copy_n(flat.row(start), flat.words, acc.begin());
        std::vector<std::uint8_t> used(family.size(), 0);
        used[start] = 1;
        for (int step = 1; step < i; ++step) {
            std::size_t pick = 0, pick_size = std::numeric_limits<std::size_t>::max();
            for (std::size_t j = 0; j < family.size(); ++j) {
                if (used[j]) continue;
                const std::size_t size = union_count(acc.data(), flat.row(j), flat.words);
                if (size < pick_size) {
                    pick = j;
                    pick_size = size;
                }
            }
            used[pick] = 1;
            for (std::size_t w = 0; w < flat.words; ++w) acc[w] |= flat.row(pick)[w];
        }
        best = std::min(best, union_count(acc.data(), acc.data(), flat.words));
    }
    std::int64_t budget = node_budget;

    // union >= (sum of member sizes) / mult
    std::vector<std::size_t> prefix(family.size() + 1, 0);
    std::map<Element, std::size_t> hits;
    std::size_t mult = 1;
    for (std::size_t j = 0; j < family.size(); ++j) {
        prefix[j + 1] = prefix[j] + family[j].size();
        for (Element x : family[j]) mult = std::max(mult, ++hits[x]);
    }

    // level[depth] holds the union of the members chosen so far
    std::vector<std::uint64_t> level((static_cast<std::size_t>(i) + 1) * flat.words, 0);
    auto dfs = [&](auto&& self, std::size_t start, int depth, std::size_t sum) -> void {
        if (--budget < 0) throw BudgetExceeded("min_union: node budget exceeded");
        const std::uint64_t* cur = level.data() + static_cast<std::size_t>(depth) * flat.words;
        std::uint64_t* next = level.data() + (static_cast<std::size_t>(depth) + 1) * flat.words;
        const auto need = static_cast<std::size_t>(i - depth);
        for (std::size_t j = start; j + need <= family.size(); ++j) {
            if (family[j].size() >= best) break;
            if (sum + prefix[j + need] - prefix[j] >= best * mult) break;
            const std::size_t size = union_count(cur, flat.row(j), flat.words);
            if (size >= best) continue;
            if (need == 1) {
                best = size;
                continue;
            }
            for (std::size_t w = 0; w < flat.words; ++w) next[w] = cur[w] | flat.row(j)[w];
            self(self, j + 1, depth + 1, sum + family[j].size());
        }
    };
    dfs(dfs, 0, 0, 0);
    return static_cast<std::int64_t>(best);
}

std::optional<ElementSet> hitting_set_up_to(const std::vector<ElementSet>& family_in, int limit,
                                            std::int64_t node_budget) {
    const std::vector<ElementSet> family = distinct_sets(family_in);
    for (const auto& s : family)
        if (s.empty()) throw std::invalid_argument("hitting set: family has an empty member");
    if (family.empty()) return ElementSet{};

    // Sort by size and drop supersets: a hit subset hits them too.
    std::vector<ElementSet> sorted = family;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ElementSet& x, const ElementSet& y) { return x.size() < y.size(); });
    const CompactFamily all(sorted);
    std::vector<ElementSet> kept;
    std::vector<Bits> kept_bits;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        const bool redundant = std::any_of(kept_bits.begin(), kept_bits.end(),
                                           [&](const Bits& k) { return k.is_subset_of(all[j]); });
        if (!redundant) {
            kept.push_back(sorted[j]);
            kept_bits.push_back(all[j]);
        }
    }

    // holders[x] = members containing element x, by compact element index
    const CompactFamily compact(kept);
    const ElementSet& universe = compact.universe();
    std::vector<Bits> holders(universe.size(), Bits(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j)
        for (auto b = compact[j].find_first(); b != Bits::npos; b = compact[j].find_next(b)) holders[b].set(j);
    auto index_of = [&](Element x) {
        return static_cast<std::size_t>(std::lower_bound(universe.begin(), universe.end(), x) - universe.begin());
    };

    // Greedy count of pairwise disjoint unhit members; each needs its own element.
    auto packing = [&](const Bits& unhit, int stop) {
        int count = 0;
        Bits used = compact.empty();
        for (auto j = unhit.find_first(); j != Bits::npos && count <= stop; j = unhit.find_next(j)) {
            if (compact[j].intersects(used)) continue;
            used |= compact[j];
            ++count;
        }
        return count;
    };

    std::int64_t budget = node_budget;
    ElementSet chosen;
    auto dfs = [&](auto&& self, int room, const Bits& unhit) -> bool {
        if (--budget < 0) throw BudgetExceeded("min_hitting_set: node budget exceeded");
        const auto first = unhit.find_first();
        if (first == Bits::npos) return true;
        if (room == 0 || packing(unhit, room) > room) return false;
        if (room == 1) {
            // one element must lie in every unhit member
            Bits meet = compact[first];
            for (auto j = unhit.find_next(first); j != Bits::npos && meet.any(); j = unhit.find_next(j)) meet &= compact[j];
            if (meet.none()) return false;
            chosen.push_back(universe[meet.find_first()]);
            return true;
        }
        for (Element x : kept[first]) {
            chosen.push_back(x);
            if (self(self, room - 1, unhit - holders[index_of(x)])) return true;
            chosen.pop_back();
        }
        return false;
    };
    Bits everything(kept.size());
    everything.set();
    for (int size = 1; size <= limit; ++size) {
        chosen.clear();
        if (dfs(dfs, size, everything)) return make_set(chosen);
    }
    return std::nullopt;
}

ElementSet min_hitting_set(const std::vector<ElementSet>& family, std::int64_t node_budget) {
    auto result = hitting_set_up_to(family, static_cast<int>(family.size()), node_budget);
    // A set picking one element per member always exists, so this is reached.
    return result.value();
}

}  // namespace roundsearch
