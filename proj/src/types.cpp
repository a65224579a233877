#include "roundsearch/types.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace roundsearch {

void GameConfig::validate() const {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (d < 1 || d > n) throw std::invalid_argument("d must satisfy 1 <= d <= n");
    if (r < 1) throw std::invalid_argument("r must be >= 1");
}

Verdict Verdict::found(ElementSet xs) {
    Verdict v;
    v.kind = Kind::found;
    v.elements = std::move(xs);
    return v;
}

std::string to_string(const Verdict& v) {
    if (v.kind == Verdict::Kind::fewer_than_d) return "fewer_than_d";
    return "found" + format_set(v.elements);
}

int Transcript::total_queries() const {
    int total = 0;
    for (const auto& round : rounds) total += round.size();
    return total;
}

ElementSet make_set(std::vector<Element> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

ElementSet set_union(const ElementSet& a, const ElementSet& b) {
    ElementSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ElementSet set_difference(const ElementSet& a, const ElementSet& b) {
    ElementSet out;
    out.reserve(a.size());
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ElementSet set_intersection(const ElementSet& a, const ElementSet& b) {
    ElementSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool intersects(const ElementSet& a, const ElementSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else return true;
    }
    return false;
}

bool contains(const ElementSet& s, Element x) { return std::binary_search(s.begin(), s.end(), x); }

bool is_subset(const ElementSet& a, const ElementSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

ElementSet iota_set(int first, int last) {
    ElementSet out;
    if (last < first) return out;
    out.resize(static_cast<std::size_t>(last - first + 1));
    std::iota(out.begin(), out.end(), first);
    return out;
}

std::string format_set(const ElementSet& s) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << ',';
        os << s[i];
    }
    os << '}';
    return os.str();
}

}  // namespace roundsearch
