#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roundsearch/types.hpp"

namespace roundsearch {

/// Slack applied on the formula side when comparing real bounds to integer
/// query counts.
inline constexpr double kBoundTolerance = 1e-9;

struct BoundsReport {
    GameConfig config;
    double lower = 0;
    double upper = 0;
    std::int64_t upper_algorithmic = 0;  ///< what the round-splitting algorithms guarantee
    /// Two-round pair (2⌈√(dn)⌉, 2⌈√(dn)⌉ − 4d − 2), present for d >= 2, r = 2.
    std::optional<std::pair<std::int64_t, std::int64_t>> two_round;
    bool lower_exceeds_upper = false;
    std::string notes;

    /// ⌈lower − tolerance⌉: the least integer count the lower bound allows.
    std::int64_t lower_ceil() const;
    /// Tightest lower bound available (uses the two-round pair when present).
    double best_lower() const;
};

/// Smallest integer k >= 0 with k^r >= x (an exact integer r-th root ceiling).
std::int64_t ceil_root(std::int64_t x, int r);

/// Single-element bounds: r·n^{1/r} − 2r + 1 <= |P| <= r·n^{1/r}, and the
/// algorithmic r·⌈n^{1/r}⌉.
BoundsReport bounds_d1(int n, int r);

/// d-element bounds: r(dn)^{1/r} − 2d − r(d+1) + 2 <= |P| <= r⌈(d^{r−1}n)^{1/r}⌉.
/// Throws std::invalid_argument if d < 2 or d > n.
BoundsReport bounds_dd(int n, int d, int r);

/// Dispatches to bounds_d1 / bounds_dd.
BoundsReport bounds_for(const GameConfig& c);

/// n_i = ⌊n_{i−1}/(k_i+1)⌋ with n_0 = n; returns n_1..n_t.
std::vector<std::int64_t> n_sequence(std::int64_t n, const std::vector<std::int64_t>& ks);

/// Checks n_i >= n / Π_{j<=i}(k_j+1) − i for every prefix.
bool n_sequence_bound_holds(std::int64_t n, const std::vector<std::int64_t>& ks);

/// n'_{r−1} = ⌊n_{r−2}/(k_{r−1}+d)⌋.
std::int64_t n_prime(std::int64_t n_prev, std::int64_t k_last, int d);

}  // namespace roundsearch
