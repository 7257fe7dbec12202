// Exact properties checked over many generated paths.

#include "doctest.h"

#include <cmath>
#include <numeric>

#include "ergo/backward_predictor.hpp"
#include "ergo/forward_predictor.hpp"
#include "ergo/memory_inference.hpp"
#include "ergo/pattern_index.hpp"
#include "ergo/process_models.hpp"
#include "ergo/rng.hpp"
#include "ergo/stoptime.hpp"
#include "naive.hpp"

using namespace ergo;

namespace {

ProcessModel order2_chain() {
    return ProcessModel(MarkovSpec{2, 2, {{0.9, 0.1}, {0.4, 0.6}, {0.3, 0.7}, {0.2, 0.8}}});
}

ProcessModel ternary_chain() {
    return ProcessModel(MarkovSpec{1, 3, {{0.5, 0.3, 0.2}, {0.1, 0.1, 0.8}, {0.3, 0.4, 0.3}}});
}

std::vector<ProcessModel> binary_models() {
    return {make_bernoulli(0.5), make_bernoulli(0.3), make_binary_flip_chain(0.2), order2_chain(), make_example1(),
            make_truncated_geometric_renewal(0.4, 6)};
}

// Replace everything after index `keep` with fresh symbols.
std::vector<Symbol> rewrite_tail(std::vector<Symbol> path, std::size_t keep, int alphabet, Rng& rng) {
    for (std::size_t i = keep + 1; i < path.size(); ++i) path[i] = static_cast<Symbol>(rng.next_u64() % alphabet);
    return path;
}

}  // namespace

TEST_CASE("conditional rows sum to one for every model and past") {
    auto models = binary_models();
    models.push_back(ternary_chain());
    for (const auto& m : models) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto path = sample_path(m, 200, seed);
            for (std::size_t len = 0; len <= path.size(); len += 13) {
                const auto row = true_conditional_row(m, path.view().first(len));
                CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("occurrence chains are increasing and maximal under the limit") {
    Rng rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t len = 2 + rng.next_u64() % 150;
        std::vector<Symbol> path(len);
        for (auto& s : path) s = static_cast<Symbol>(rng.next_u64() % 2);
        const std::size_t n = rng.next_u64() % len;
        const std::size_t k = 1 + rng.next_u64() % std::min<std::size_t>(6, n + 1);
        const std::size_t limit = rng.next_u64() % 20;
        const auto chain = occurrence_chain(path, n, k, limit);
        const auto all = naive::all_recurrences(path, n, k);
        CHECK(chain.size() == std::min(limit, all.size()));
        CHECK(std::equal(chain.begin(), chain.end(), all.begin()));
        for (std::size_t i = 1; i < chain.size(); ++i) CHECK(chain[i] > chain[i - 1]);
    }
}

TEST_CASE("backward estimates") {
    for (const auto& m : binary_models()) {
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            const auto past = sample_path(m, 4000, seed).symbols();
            const BackwardState full = backward_state(past);
            for (std::size_t i = 1; i < full.lambdas.size(); ++i) CHECK(full.lambdas[i] > full.lambdas[i - 1]);
            // Growing the state one step at a time reaches the same place.
            BackwardState s = backward_state(past, 0);
            while (!s.frozen && s.depth() < full.depth()) s = extend(s, past);
            CHECK(s.lambdas == full.lambdas);
            CHECK(s.picks == full.picks);
            std::size_t prev = 0;
            for (std::size_t t = 1; t <= past.size(); t = t * 3 / 2 + 1) {
                const BackwardEstimate e = p_hat(past, t);
                CHECK(e.kappa >= prev);
                CHECK(e.p_hat >= 0.0);
                CHECK(e.p_hat <= 1.0);
                prev = e.kappa;
            }
        }
    }
}

TEST_CASE("forward rows partition the occurrences") {
    auto models = binary_models();
    models.push_back(ternary_chain());
    for (const auto& m : models) {
        const Alphabet a = m.alphabet();
        const DepthSchedule sched = default_schedule(a);
        const auto path = sample_path(m, 20000, 5).symbols();
        ForwardPredictor predictor(a, sched);
        for (std::size_t n = 0; n < path.size(); ++n) {
            const ForwardEstimate e = predictor.push(path[n]);
            if (e.kappa == 0) continue;
            CHECK(e.lambda >= sched.min_occurrences(n));
            CHECK(std::abs(std::accumulate(e.row.begin(), e.row.end(), 0.0) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("stopping times do not look past themselves") {
    Rng rng(11);
    for (const auto& m : binary_models()) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto path = sample_path(m, 3000, seed).symbols();
            for (auto scheme : {&morvai2000, &mw03}) {
                const StopTimeTrace full = scheme(path, 1);
                std::size_t sum = 0;
                for (std::size_t k = 0; k < full.size(); ++k) {
                    sum += full.increments[k];
                    CHECK(full.times[k] == sum);
                }
                for (std::size_t k = 0; k < full.size(); ++k) {
                    if (full.times[k] + 1 >= path.size()) break;
                    const auto other = rewrite_tail(path, full.times[k], 2, rng);
                    const StopTimeTrace t = scheme(other, 1);
                    REQUIRE(t.size() > k);
                    for (std::size_t i = 0; i <= k; ++i) {
                        CHECK(t.times[i] == full.times[i]);
                        CHECK(t.estimates[i] == full.estimates[i]);
                    }
                }
            }
        }
    }
}

TEST_CASE("forward memory verdicts do not look past n") {
    Rng rng(5);
    for (const auto& m : binary_models()) {
        const auto path = sample_path(m, 600, 2).symbols();
        for (std::size_t n : {1u, 7u, 50u, 199u, 400u}) {
            const MemoryVerdict a = forward_scheme(path, 2, n);
            const MemoryVerdict b = forward_scheme(rewrite_tail(path, n, 2, rng), 2, n);
            CHECK(a.in_n == b.in_n);
            CHECK(a.theta == b.theta);
            CHECK(a.kappa == b.kappa);
            CHECK(a.rho == b.rho);
            CHECK(a.qhat == b.qhat);
        }
    }
}

TEST_CASE("fm stops do not look past themselves") {
    Rng rng(8);
    const std::vector<double> f{0.0, 1.0};
    for (const auto& m : binary_models()) {
        const auto path = sample_path(m, 2000, 4).symbols();
        const FmTrace full = fm_scheme(path, 2, f);
        for (std::size_t i = 1; i < full.lambdas.size(); i += 1 + full.lambdas.size() / 8) {
            const std::size_t stop = full.lambdas[i];
            if (stop + 1 >= path.size()) break;
            const FmTrace t = fm_scheme(rewrite_tail(path, stop, 2, rng), 2, f);
            REQUIRE(t.lambdas.size() > i);
            for (std::size_t j = 0; j <= i; ++j) {
                CHECK(t.lambdas[j] == full.lambdas[j]);
                CHECK(t.kappas[j] == full.kappas[j]);
            }
            CHECK(t.chi[stop] == full.chi[stop]);
        }
    }
}

TEST_CASE("chi respects the settled-block bound") {
    const std::vector<double> f{0.0, 1.0};
    for (const auto& m : binary_models()) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const FmTrace t = fm_scheme(sample_path(m, 3000, seed).symbols(), 2, f);
            for (std::size_t n = 1; n < t.chi.size(); ++n) {
                const std::size_t half = (n + 1) / 2 - 1;  // ceil(n/2) - 1
                std::size_t j = 0;
                while (j + 1 < t.zetas.size() && t.zetas[j + 1] <= half) ++j;
                CHECK(t.chi[n] <= default_l(j + 1));
            }
        }
    }
}

TEST_CASE("empty candidate set gives a zero statistic") {
    // Every length-2 block occurs at most a handful of times in 12 symbols,
    // well under n^(1-gamma) for a small gamma.
    const std::vector<Symbol> past{0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 1};
    MemoryParams p;
    p.gamma = 0.05;
    p.beta = 0.1;
    for (const Word& w : {Word{}, Word{0}, Word{1}, Word{1, 0}}) CHECK(delta_hat(past, 2, 11, w, p) == 0.0);
}

TEST_CASE("forward test equals the backward test on the same window") {
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t len = 5 + rng.next_u64() % 120;
        std::vector<Symbol> path(len + 10);
        for (auto& s : path) s = static_cast<Symbol>(rng.next_u64() % 2);
        const std::size_t n = 1 + rng.next_u64() % (len - 1);
        Word w(rng.next_u64() % 4);
        for (auto& s : w) s = static_cast<Symbol>(rng.next_u64() % 2);
        CHECK(ptest(path, 2, n, w) == ntest(SymbolView(path).first(n + 1), 2, n, w));
    }
}
