#include "doctest.h"

#include "ergo/backward_predictor.hpp"
#include "ergo/process_models.hpp"
#include "naive.hpp"

using namespace ergo;

namespace {

// Past stored oldest first with X_{-i} = i mod 2.
std::vector<Symbol> alternating_past(std::size_t len) {
    std::vector<Symbol> past(len);
    for (std::size_t i = 1; i <= len; ++i) past[len - i] = static_cast<Symbol>(i % 2);
    return past;
}

}  // namespace

TEST_CASE("all-ones past") {
    const std::vector<Symbol> ones(12, 1);
    const auto s = backward_state(ones, 4);
    CHECK(s.lambdas == std::vector<std::size_t>{1, 2, 3, 4, 5});
    CHECK(s.taus == std::vector<std::size_t>{1, 1, 1, 1});
    CHECK(p_k(backward_state(ones), 10, 1) == 1.0);
    const auto est = p_hat(ones, 4);
    CHECK(est.kappa == 3);
    CHECK(est.p_hat == 1.0);
}

TEST_CASE("alternating past") {
    const auto past = alternating_past(20);
    const auto s = backward_state(past, 2);
    CHECK(s.taus == std::vector<std::size_t>{2, 2});
    CHECK(s.lambdas == std::vector<std::size_t>{1, 3, 5});
    CHECK(s.picks == std::vector<Symbol>{0, 0});
    CHECK(p_k(s, 2) == 0.0);
    const auto est = p_hat(past, 5);
    CHECK(est.kappa == 2);
    CHECK(est.p_hat == 0.0);
    CHECK(p_hat(past, 1).kappa == 0);
    CHECK(p_hat(past, 1).p_hat == 0.0);
}

TEST_CASE("short past freezes") {
    const std::vector<Symbol> past{1, 0, 0, 0};
    const auto s = backward_state(past);
    CHECK(s.frozen);
    CHECK_THROWS_AS(p_k(s, s.depth() + 1), InputError);
    CHECK_THROWS_AS(p_hat(past, 0), InputError);
}

TEST_CASE("recursion identities on sampled pasts") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto past = sample_path(make_binary_flip_chain(0.3), 3000, seed).symbols();
        const auto s = backward_state(past);
        for (std::size_t k = 1; k < s.lambdas.size(); ++k) {
            CHECK(s.lambdas[k] == s.lambdas[k - 1] + s.taus[k - 1]);
            CHECK(s.lambdas[k] > s.lambdas[k - 1]);
            CHECK(s.picks[k - 1] == past[past.size() - s.taus[k - 1]]);
            CHECK(naive::recurrence(past, past.size() - 1, s.lambdas[k - 1]) == std::optional{s.taus[k - 1]});
        }
        std::size_t prev = 0;
        for (std::size_t t = 1; t <= past.size(); t += 97) {
            const auto est = p_hat(past, t);
            CHECK(est.kappa >= prev);
            CHECK(est.p_hat >= 0.0);
            CHECK(est.p_hat <= 1.0);
            prev = est.kappa;
        }
    }
}
