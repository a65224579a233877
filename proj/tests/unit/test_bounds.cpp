#include <doctest.h>

#include <cmath>
#include <random>

#include "roundsearch/bounds.hpp"

using namespace roundsearch;

TEST_CASE("ceil_root is exact at perfect powers and around them") {
    CHECK(ceil_root(0, 3) == 0);
    CHECK(ceil_root(1, 5) == 1);
    CHECK(ceil_root(1000, 3) == 10);
    CHECK(ceil_root(1001, 3) == 11);
    CHECK(ceil_root(999, 3) == 10);
    CHECK(ceil_root(200, 2) == 15);
    CHECK(ceil_root(225, 2) == 15);
    CHECK(ceil_root(226, 2) == 16);
    CHECK(ceil_root(7, 1) == 7);
    CHECK(ceil_root(1'000'000'000'000'000'000LL, 2) == 1'000'000'000LL);
    CHECK(ceil_root(1'000'000'000'000'000'001LL, 2) == 1'000'000'001LL);
}

TEST_CASE("bounds_d1") {
    auto b = bounds_d1(16, 2);
    CHECK(b.lower == doctest::Approx(5));
    CHECK(b.upper == doctest::Approx(8));
    CHECK(b.upper_algorithmic == 8);

    b = bounds_d1(37, 1);
    CHECK(b.lower == doctest::Approx(36));
    CHECK(b.upper == doctest::Approx(37));

    b = bounds_d1(1000, 3);
    CHECK(b.lower == doctest::Approx(25));
    CHECK(b.upper == doctest::Approx(30));
    CHECK(b.upper_algorithmic == 30);
    CHECK(b.lower_ceil() == 25);
}

TEST_CASE("bounds_d1 gap is exactly 2r - 1") {
    for (int n = 1; n <= 500; n += 7)
        for (int r = 1; r <= 6; ++r) {
            const auto b = bounds_d1(n, r);
            CHECK(b.upper - b.lower == doctest::Approx(2 * r - 1));
            CHECK(b.lower <= static_cast<double>(b.upper_algorithmic));
        }
}

TEST_CASE("bounds_dd") {
    auto b = bounds_dd(100, 2, 2);
    CHECK(b.upper_algorithmic == 30);
    CHECK(b.upper == doctest::Approx(30));
    CHECK(b.lower == doctest::Approx(2 * std::sqrt(200.0) - 8));
    REQUIRE(b.two_round);
    CHECK(b.two_round->first == 30);
    CHECK(b.two_round->second == 20);

    // r = 1: upper ⌈n⌉ = 8, lower 2·8 − 4 − 2 + 2 = 11 > 8, flagged
    b = bounds_dd(8, 2, 1);
    CHECK(b.upper_algorithmic == 8);
    CHECK(b.lower == doctest::Approx(11));
    CHECK(b.lower_exceeds_upper);

    b = bounds_dd(27, 3, 3);
    CHECK(b.upper_algorithmic == 21);
    CHECK(b.lower == doctest::Approx(3 * std::cbrt(81.0) - 16));
    CHECK(b.lower < 0);
    CHECK_FALSE(b.lower_exceeds_upper);

    CHECK_THROWS_AS(bounds_dd(10, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(bounds_dd(3, 4, 2), std::invalid_argument);
}

TEST_CASE("bounds_for dispatches on d") {
    CHECK(bounds_for({16, 1, 2}).upper_algorithmic == 8);
    CHECK(bounds_for({100, 2, 2}).upper_algorithmic == 30);
}

TEST_CASE("n_sequence and n_prime") {
    CHECK(n_sequence(100, {9}) == std::vector<std::int64_t>{10});
    CHECK(n_sequence(9, {2, 2}) == std::vector<std::int64_t>{3, 1});
    CHECK(n_sequence(7, {0, 0}) == std::vector<std::int64_t>{7, 7});
    CHECK(n_prime(10, 3, 2) == 2);
    CHECK(n_prime(10, 3, 1) == 2);
    CHECK(n_prime(5, 0, 5) == 1);
}

TEST_CASE("n_sequence lower estimate and monotonicity") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 5000);
        std::vector<std::int64_t> ks(1 + rng() % 4);
        for (auto& k : ks) k = static_cast<std::int64_t>(rng() % 20);
        CHECK(n_sequence_bound_holds(n, ks));

        // independent oracle: n_i >= n / Π(k_j+1) − i
        const auto seq = n_sequence(n, ks);
        double prod = 1;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            prod *= static_cast<double>(ks[i] + 1);
            CHECK(static_cast<double>(seq[i]) >= static_cast<double>(n) / prod - static_cast<double>(i + 1) - 1e-9);
        }

        auto bigger = ks;
        const std::size_t j = rng() % ks.size();
        bigger[j] += 1;
        const auto seq2 = n_sequence(n, bigger);
        for (std::size_t i = 0; i < seq.size(); ++i) CHECK(seq2[i] <= seq[i]);
    }
}
