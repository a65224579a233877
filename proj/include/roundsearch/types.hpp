#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace roundsearch {

/// Element ids are 1-based, matching [n] = {1, ..., n}.
using Element = int;

/// A finite set of element ids, kept sorted ascending without duplicates.
using ElementSet = std::vector<Element>;

/// A question "is there an excellent element in A?" is identified with A.
using Query = ElementSet;

enum class Answer : std::uint8_t { no, yes };

inline const char* to_string(Answer a) { return a == Answer::yes ? "yes" : "no"; }

struct GameConfig {
    int n = 1;  ///< ground-set size
    int d = 1;  ///< number of excellent elements to find
    int r = 1;  ///< number of rounds

    /// Throws std::invalid_argument unless 1 <= d <= n and r >= 1.
    void validate() const;

    friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

/// One round: the query family asked simultaneously and the answers received.
struct RoundRecord {
    int index = 1;
    std::vector<Query> queries;
    std::vector<Answer> answers;

    int size() const { return static_cast<int>(queries.size()); }
    friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// Either d named excellent elements, or the claim that fewer than d exist.
struct Verdict {
    enum class Kind : std::uint8_t { found, fewer_than_d };

    Kind kind = Kind::fewer_than_d;
    ElementSet elements;  ///< only meaningful for Kind::found

    static Verdict found(ElementSet xs);
    static Verdict fewer_than_d() { return {}; }

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string to_string(const Verdict& v);

struct Transcript {
    GameConfig config;
    std::vector<RoundRecord> rounds;
    std::optional<Verdict> verdict;

    int total_queries() const;
    friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// Raised when a search exceeds its node budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sorted-set helpers. All inputs must be sorted and duplicate free.

ElementSet make_set(std::vector<Element> xs);
ElementSet set_union(const ElementSet& a, const ElementSet& b);
ElementSet set_difference(const ElementSet& a, const ElementSet& b);
ElementSet set_intersection(const ElementSet& a, const ElementSet& b);
bool intersects(const ElementSet& a, const ElementSet& b);
bool contains(const ElementSet& s, Element x);
bool is_subset(const ElementSet& a, const ElementSet& b);
ElementSet iota_set(int first, int last);  ///< {first, ..., last}

std::string format_set(const ElementSet& s);

}  // namespace roundsearch
