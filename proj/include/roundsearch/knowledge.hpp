#pragma once

#include <span>
#include <vector>

#include "roundsearch/types.hpp"

namespace roundsearch {

/// Public knowledge after some rounds: the dead set G (elements known not to
/// be excellent) and the residual yes-family (each yes-answered query minus G).
///
/// The residual family is kept sorted and deduplicated. Empty members are
/// retained so that an inconsistent answer sequence stays detectable.
class KnowledgeState {
public:
    explicit KnowledgeState(int n);
    KnowledgeState(int n, const ElementSet& dead, std::vector<ElementSet> residual_yes);

    int n() const { return n_; }
    bool is_dead(Element x) const { return dead_mask_[static_cast<std::size_t>(x)] != 0; }
    int dead_count() const { return dead_count_; }
    int free_count() const { return n_ - dead_count_; }
    ElementSet dead() const;
    const std::vector<ElementSet>& residual_yes() const { return residual_; }

    /// Smallest residual set size, or -1 when the family is empty.
    int min_residual_size() const;

    /// Query restricted to elements not yet known dead.
    ElementSet restrict_to_free(const Query& q) const;

    friend bool operator==(const KnowledgeState&, const KnowledgeState&) = default;

private:
    friend KnowledgeState update_knowledge(const KnowledgeState&, const RoundRecord&);

    int n_;
    std::vector<std::uint8_t> dead_mask_;  // indexed by element id, slot 0 unused
    int dead_count_ = 0;
    std::vector<ElementSet> residual_;
};

/// dead' = dead ∪ (no-answered queries); residual' = {S \ dead'} over old
/// residual plus yes-answered queries, deduplicated.
KnowledgeState update_knowledge(const KnowledgeState& state, const RoundRecord& round);

/// Knowledge after each prefix of the transcript; element 0 is the fresh state.
std::vector<KnowledgeState> replay(const Transcript& t);

/// True iff no residual member is empty. The witness excellent-set is then
/// the whole free set.
bool is_consistent(const KnowledgeState& state);

/// Elements lying in every consistent excellent-set: exactly those x with {x}
/// in the residual family. If every residual set containing x has another
/// member, free \ {x} is consistent and avoids x.
///
/// Throws std::logic_error on an inconsistent state.
ElementSet forced_excellent(const KnowledgeState& state);

/// Worst-case correctness: Found(xs) needs |xs| = d distinct forced elements;
/// FewerThanD needs |free| <= d - 1 since the free set itself is a consistent
/// excellent-set.
bool verdict_valid(const KnowledgeState& state, const Verdict& verdict, int d);

ElementSet free_elements(const KnowledgeState& state);

}  // namespace roundsearch
