#include "roundsearch/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace roundsearch {

namespace {

// k^r compared against x without overflow.
bool pow_at_least(std::int64_t k, int r, std::int64_t x) {
    __int128 acc = 1;
    for (int i = 0; i < r; ++i) {
        acc *= k;
        if (acc >= x) return true;
    }
    return acc >= x;
}

std::int64_t checked_pow(std::int64_t base, int e) {
    __int128 acc = 1;
    for (int i = 0; i < e; ++i) {
        acc *= base;
        if (acc > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error("bounds: d^(r-1)·n overflows 64 bits");
    }
    return static_cast<std::int64_t>(acc);
}

void flag_if_crossed(BoundsReport& b) {
    if (b.lower > static_cast<double>(b.upper_algorithmic) + kBoundTolerance) {
        b.lower_exceeds_upper = true;
        std::ostringstream os;
        os << "lower bound " << b.lower << " exceeds algorithmic upper bound " << b.upper_algorithmic
           << "; the lower formula does not hold at this configuration";
        b.notes = os.str();
    }
}

}  // namespace

std::int64_t BoundsReport::lower_ceil() const {
    return static_cast<std::int64_t>(std::ceil(best_lower() - kBoundTolerance));
}

double BoundsReport::best_lower() const {
    if (two_round) return std::max(lower, static_cast<double>(two_round->second));
    return lower;
}

std::int64_t ceil_root(std::int64_t x, int r) {
    if (r < 1) throw std::invalid_argument("ceil_root: r must be >= 1");
    if (x <= 0) return 0;
    if (r == 1) return x;
    auto guess = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(x), 1.0 / r)));
    if (guess < 1) guess = 1;
    while (guess > 1 && pow_at_least(guess - 1, r, x)) --guess;
    while (!pow_at_least(guess, r, x)) ++guess;
    return guess;
}

BoundsReport bounds_d1(int n, int r) {
    if (n < 1 || r < 1) throw std::invalid_argument("bounds_d1: need n >= 1, r >= 1");
    BoundsReport b;
    b.config = {n, 1, r};
    const double root = std::pow(static_cast<double>(n), 1.0 / r);
    b.upper = r * root;
    b.lower = r * root - 2.0 * r + 1.0;
    b.upper_algorithmic = static_cast<std::int64_t>(r) * ceil_root(n, r);
    flag_if_crossed(b);
    return b;
}

BoundsReport bounds_dd(int n, int d, int r) {
    if (d < 2) throw std::invalid_argument("bounds_dd: d must be >= 2 (use bounds_d1)");
    if (d > n) throw std::invalid_argument("bounds_dd: d must be <= n");
    if (r < 1) throw std::invalid_argument("bounds_dd: r must be >= 1");
    BoundsReport b;
    b.config = {n, d, r};
    const std::int64_t k = ceil_root(checked_pow(d, r - 1) * n, r);
    b.upper_algorithmic = static_cast<std::int64_t>(r) * k;
    b.upper = static_cast<double>(b.upper_algorithmic);
    b.lower = r * std::pow(static_cast<double>(d) * n, 1.0 / r) - 2.0 * d - r * (d + 1.0) + 2.0;
    if (r == 2) {
        const std::int64_t c = 2 * ceil_root(static_cast<std::int64_t>(d) * n, 2);
        b.two_round = std::pair{c, c - 4 * d - 2};
    }
    flag_if_crossed(b);
    return b;
}

BoundsReport bounds_for(const GameConfig& c) {
    return c.d == 1 ? bounds_d1(c.n, c.r) : bounds_dd(c.n, c.d, c.r);
}

std::vector<std::int64_t> n_sequence(std::int64_t n, const std::vector<std::int64_t>& ks) {
    std::vector<std::int64_t> out;
    out.reserve(ks.size());
    std::int64_t cur = n;
    for (std::int64_t k : ks) {
        if (k < 0) throw std::invalid_argument("n_sequence: round sizes must be >= 0");
        cur = cur / (k + 1);
        out.push_back(cur);
    }
    return out;
}

bool n_sequence_bound_holds(std::int64_t n, const std::vector<std::int64_t>& ks) {
    const auto seq = n_sequence(n, ks);
    long double product = 1;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        product *= static_cast<long double>(ks[i] + 1);
        const long double bound = static_cast<long double>(n) / product - static_cast<long double>(i + 1);
        if (static_cast<long double>(seq[i]) < bound - kBoundTolerance) return false;
    }
    return true;
}

std::int64_t n_prime(std::int64_t n_prev, std::int64_t k_last, int d) {
    if (k_last < 0 || d < 1) throw std::invalid_argument("n_prime: need k >= 0, d >= 1");
    return n_prev / (k_last + d);
}

}  // namespace roundsearch
