#include "doctest.h"

#include <cmath>
#include <deque>

#include "ergo/context_tree.hpp"
#include "ergo/process_models.hpp"
#include "ergo/rng.hpp"
#include "naive.hpp"

using namespace ergo;

namespace {

std::vector<Symbol> random_path(std::size_t len, int alphabet, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Symbol> out(len);
    std::vector<double> row(static_cast<std::size_t>(alphabet), 1.0 / alphabet);
    for (auto& s : out) s = static_cast<Symbol>(rng.categorical(row));
    return out;
}

// Successor count of `w` in window [lo, end).
std::size_t window_count(const std::vector<Symbol>& path, std::size_t lo, std::size_t end,
                         const naive::Word& w) {
    std::size_t c = 0;
    for (std::size_t u = lo + w.size(); u < end; ++u)
        if (naive::match_at(path, u - w.size(), w)) ++c;
    return c;
}

void all_words(int alphabet, std::size_t max_len, std::vector<naive::Word>& out) {
    out = naive::word_list(alphabet, 1);
    std::vector<naive::Word> layer{{}};
    for (std::size_t m = 1; m <= max_len; ++m) {
        std::vector<naive::Word> next;
        for (const auto& w : layer)
            for (int s = 0; s < alphabet; ++s) {
                auto e = w;
                e.insert(e.begin(), static_cast<Symbol>(s));
                next.push_back(e);
            }
        for (const auto& w : next) out.push_back(w);
        layer = next;
    }
}

void check_counts(const ContextTree& tree, const std::vector<Symbol>& path, int alphabet) {
    std::vector<naive::Word> words;
    all_words(alphabet, 5, words);
    for (const auto& w : words) {
        const std::size_t expect = window_count(path, tree.lo(), tree.end(), w);
        const auto v = tree.find(w);
        if (v == ContextTree::kNone) {
            CHECK(expect < tree.min_count());
            continue;
        }
        REQUIRE(tree.total(v) == expect);
        for (int x = 0; x < alphabet; ++x) {
            auto wx = w;
            wx.push_back(static_cast<Symbol>(x));
            std::size_t cx = 0;
            for (std::size_t u = tree.lo() + w.size(); u < tree.end(); ++u)
                if (naive::match_at(path, u - w.size(), w) && path[u] == x) ++cx;
            CHECK(tree.count(v, static_cast<Symbol>(x)) == cx);
        }
    }
}

}  // namespace

TEST_CASE("empty tree has a bare root") {
    std::vector<Symbol> path{0, 1, 0};
    ContextTree tree(path, 2, 0, 3);
    CHECK(tree.node_count() == 1);
    CHECK(tree.total(tree.root()) == 0);
    CHECK(tree.delta(tree.root()) == 0.0);
    CHECK_THROWS_AS(tree.pop_front(), InputError);
}

TEST_CASE("growing window keeps exact counts") {
    for (int alphabet : {2, 3}) {
        const auto path = random_path(300, alphabet, 11 + alphabet);
        ContextTree tree(path, alphabet, 0, 6);
        for (std::size_t i = 0; i < path.size(); ++i) {
            tree.push_back();
            if (i % 37 == 0) check_counts(tree, path, alphabet);
        }
        check_counts(tree, path, alphabet);
        CHECK_THROWS_AS(tree.push_back(), InputError);
    }
}

TEST_CASE("sliding window keeps exact counts") {
    const auto path = random_path(400, 2, 5);
    ContextTree tree(path, 2, 0, 4);
    for (std::size_t t = 0; t < path.size(); ++t) {
        tree.push_back();
        while (tree.lo() < (t + 1) / 2) tree.pop_front();
        if (t % 29 == 0) check_counts(tree, path, 2);
    }
    check_counts(tree, path, 2);
}

TEST_CASE("window starting mid-path ignores earlier symbols") {
    const auto path = random_path(200, 3, 9);
    ContextTree tree(path, 3, 120, 3);
    while (tree.end() < path.size()) tree.push_back();
    check_counts(tree, path, 3);
}

TEST_CASE("delta agrees with direct enumeration") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const int alphabet = seed % 2 == 0 ? 3 : 2;
        const auto path = sample_path(make_example1(), 160, seed).symbols();
        const std::size_t lo = 20;
        const std::size_t last = path.size() - 1;
        const std::size_t n = last - lo;
        const double gamma = 0.5;
        const auto need =
            static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 1.0 - gamma))) + 1;
        ContextTree tree(path, alphabet, lo, need);
        while (tree.end() < path.size()) tree.push_back();
        std::vector<naive::Word> words;
        all_words(2, 4, words);
        for (const auto& w : words)
            CHECK(tree.delta(tree.find(w)) == doctest::Approx(naive::delta_hat(path, lo, last, w, gamma)).epsilon(1e-12));
    }
}

TEST_CASE("raising the threshold refreshes every aggregate") {
    const auto path = sample_path(make_binary_flip_chain(0.3), 500, 3).symbols();
    ContextTree tree(path, 2, 0, 3);
    while (tree.end() < path.size()) tree.push_back();
    const double before = tree.delta(tree.root());
    tree.raise_min_count(40);
    const double after = tree.delta(tree.root());
    CHECK(after <= before);
    ContextTree fresh(path, 2, 0, 40);
    while (fresh.end() < path.size()) fresh.push_back();
    CHECK(after == fresh.delta(fresh.root()));
}

TEST_CASE("filter excludes pairs and invalidation brings them back") {
    const auto path = sample_path(make_example1(), 400, 4).symbols();
    ContextTree tree(path, 2, 0, 5);
    while (tree.end() < path.size()) tree.push_back();
    const double open = tree.delta(tree.root());
    CHECK(open > 0.0);
    bool allow = false;
    tree.set_filter([&](const ContextTree&, ContextTree::NodeId, Symbol) { return allow; });
    CHECK(tree.delta(tree.root()) == 0.0);
    allow = true;
    for (std::size_t u = 0; u < path.size(); ++u) tree.invalidate_contexts_of(u);
    CHECK(tree.delta(tree.root()) == open);
}
