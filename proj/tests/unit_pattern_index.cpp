#include "doctest.h"

#include "ergo/pattern_index.hpp"
#include "ergo/rng.hpp"
#include "naive.hpp"

using namespace ergo;

TEST_CASE("recurrence time examples") {
    const std::vector<Symbol> alt{0, 1, 0, 1, 0, 1};
    CHECK(recurrence_time(alt, 5, 2) == std::optional<std::size_t>{2});
    const std::vector<Symbol> ones(5, 1);
    CHECK(recurrence_time(ones, 4, 3) == std::optional<std::size_t>{1});
    const std::vector<Symbol> lone{0, 0, 0, 1};
    CHECK_FALSE(recurrence_time(lone, 3, 1).has_value());
    CHECK_THROWS_AS(recurrence_time(lone, 3, 0), InputError);
    CHECK_THROWS_AS(recurrence_time(lone, 4, 1), InputError);
    CHECK_THROWS_AS(recurrence_time(lone, 2, 4), InputError);
}

TEST_CASE("occurrence chain examples") {
    const std::vector<Symbol> ones(6, 1);
    CHECK(occurrence_chain(ones, 5, 1, 3) == std::vector<std::size_t>{1, 2, 3});
    const std::vector<Symbol> alt{0, 1, 0, 1, 0, 1};
    CHECK(occurrence_chain(alt, 5, 2, 5) == std::vector<std::size_t>{2, 4});
    CHECK(occurrence_chain(alt, 1, 3, 5).empty());
}

TEST_CASE("window counts") {
    const std::vector<Symbol> path{0, 1, 0, 1, 0};
    const std::vector<Symbol> w{0, 1};
    const auto occ = count_in_window(path, Window{0, 4}, w);
    CHECK(occ.positions == std::vector<std::size_t>{1, 3});
    CHECK(occ.count() == 2);
    const std::vector<Symbol> longw{0, 1, 0};
    CHECK(count_in_window(path, Window{3, 4}, longw).count() == 0);
    const std::vector<Symbol> c(9, 2);
    const std::vector<Symbol> single{2};
    CHECK(count_in_window(c, Window{0, 8}, single).count() == 9);
}

TEST_CASE("backward recurrence examples") {
    // Past stored oldest first; X_{-i} = i mod 2 gives ..., 1, 0, 1 with X_{-1} = 1.
    std::vector<Symbol> alt(9);
    for (std::size_t i = 1; i <= alt.size(); ++i) alt[alt.size() - i] = static_cast<Symbol>(i % 2);
    CHECK(last_occurrence_before(alt, 1) == std::optional<std::size_t>{2});
    const std::vector<Symbol> ones(7, 1);
    for (std::size_t len = 1; len < 6; ++len) CHECK(last_occurrence_before(ones, len) == std::optional<std::size_t>{1});
    const std::vector<Symbol> short_past{1, 0, 0, 0};
    CHECK_FALSE(last_occurrence_before(short_past, 3).has_value());
}

TEST_CASE("forward recurrence") {
    const std::vector<Symbol> p{1, 0, 1, 1, 0, 1};
    CHECK(next_occurrence(p, 0, 2) == std::optional<std::size_t>{3});
    CHECK_FALSE(next_occurrence(p, 3, 3).has_value());
}

TEST_CASE("randomized agreement with rescans") {
    Rng rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t len = 1 + rng.next_u64() % 200;
        const int alphabet = 1 + static_cast<int>(rng.next_u64() % 3);
        std::vector<double> row(static_cast<std::size_t>(alphabet), 1.0 / alphabet);
        std::vector<Symbol> path(len);
        for (auto& s : path) s = static_cast<Symbol>(rng.categorical(row));
        const std::size_t n = rng.next_u64() % len;
        const std::size_t k = 1 + rng.next_u64() % 6;
        if (k <= n + 1) {
            CHECK(recurrence_time(path, n, k) == naive::recurrence(path, n, k));
            CHECK(occurrence_chain(path, n, k, 1000) == naive::all_recurrences(path, n, k));
        }
        const std::size_t lo = rng.next_u64() % len;
        const std::size_t hi = lo + rng.next_u64() % (len - lo);
        std::vector<Symbol> word(k);
        for (auto& s : word) s = static_cast<Symbol>(rng.categorical(row));
        const auto occ = count_in_window(path, Window{lo, hi}, word);
        std::vector<std::size_t> expect;
        for (std::size_t t = lo + k - 1; t <= hi; ++t)
            if (naive::match_at(path, t + 1 - k, word)) expect.push_back(t);
        CHECK(occ.positions == expect);
        if (k < len) CHECK(last_occurrence_before(path, k) == naive::recurrence(path, len - 1, k));
        const std::size_t start = rng.next_u64() % len;
        if (start + k <= len) CHECK(next_occurrence(path, start, k) == naive::forward_recurrence(path, start, k));
    }
}
