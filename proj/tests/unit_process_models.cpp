#include "doctest.h"

#include <cmath>
#include <numeric>

#include "ergo/process_models.hpp"
#include "ergo/rng.hpp"

using namespace ergo;

namespace {

double row_sum(const ProbabilityRow& r) { return std::accumulate(r.begin(), r.end(), 0.0); }

// Probability of a binary block under a renewal law, by explicit enumeration
// of gap sequences started from the stationary age distribution.
double renewal_hazard(const ProbabilityRow& pmf, std::size_t zeros_since_one) {
    double tail = 0.0;
    for (std::size_t j = zeros_since_one; j < pmf.size(); ++j) tail += pmf[j];
    return pmf[zeros_since_one] / tail;
}

}  // namespace

TEST_CASE("Example-1 stationary law and pinned conditional") {
    const ProcessModel m = make_example1();
    const auto& pi = m.stationary();
    REQUIRE(pi.size() == 3);
    CHECK(std::abs(pi[0] - 0.2) < 1e-10);
    CHECK(std::abs(pi[1] - 0.4) < 1e-10);
    CHECK(std::abs(pi[2] - 0.4) < 1e-10);
    const std::vector<Symbol> past{0, 0, 1, 0, 0, 1};
    CHECK(true_conditional(m, past, 1) == 0.0);
    CHECK(true_conditional(m, past, 0) == 1.0);
    // After 1,0,0 the hidden state is 2, which moves to state 0 half the time.
    const std::vector<Symbol> two_zeros{1, 0, 0};
    CHECK(true_conditional(m, two_zeros, 1) == doctest::Approx(0.5));
    const std::vector<Symbol> empty;
    CHECK(true_conditional(m, empty, 1) == doctest::Approx(0.2));
}

TEST_CASE("stationary distribution of simple chains") {
    MarkovSpec iid{0, 2, {{0.3, 0.7}}};
    const auto r = stationary_distribution(iid);
    CHECK(r == ProbabilityRow{0.3, 0.7});
    MarkovSpec flip{1, 2, {{0.9, 0.1}, {0.1, 0.9}}};
    const auto f = stationary_distribution(flip);
    CHECK(f[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f[1] == doctest::Approx(0.5).epsilon(1e-12));
    MarkovSpec bad{1, 2, {{0.9, 0.2}, {0.1, 0.9}}};
    CHECK_THROWS_AS(ProcessModel(ModelSpec{bad}), ConfigError);
}

TEST_CASE("sampling is deterministic and prefix-consistent") {
    const auto a = sample_path(make_example1(), 1000, 42);
    const auto b = sample_path(make_example1(), 1000, 42);
    const auto c = sample_path(make_example1(), 400, 42);
    CHECK(a.symbols() == b.symbols());
    CHECK(std::equal(c.symbols().begin(), c.symbols().end(), a.symbols().begin()));
    const auto ones = sample_path(make_bernoulli(1.0), 5, 99);
    CHECK(ones.symbols() == std::vector<Symbol>{1, 1, 1, 1, 1});
}

TEST_CASE("Example-1 empirical frequency of ones") {
    const auto p = sample_path(make_example1(), 100000, 7);
    const auto ones = std::count(p.symbols().begin(), p.symbols().end(), Symbol{1});
    CHECK(std::abs(static_cast<double>(ones) / 1e5 - 0.2) < 0.01);
}

TEST_CASE("conditionals sum to one") {
    const std::vector<ProcessModel> models{make_bernoulli(0.3), make_binary_flip_chain(0.2), make_example1(),
                                           make_truncated_geometric_renewal(0.4, 6)};
    for (const auto& m : models) {
        const auto p = sample_path(m, 300, 3);
        ConditionalOracle oracle(m);
        for (std::size_t i = 0; i < p.size(); ++i) {
            oracle.observe(p[i]);
            CHECK(std::abs(row_sum(oracle.predict()) - 1.0) < 1e-12);
            if (i % 50 == 0) {
                const auto direct = true_conditional_row(m, p.view().first(i + 1));
                CHECK(std::abs(direct[1] - oracle.predict(1)) < 1e-12);
            }
        }
    }
}

TEST_CASE("renewal conditional is the hazard of the gap law") {
    const ProcessModel m = make_truncated_geometric_renewal(0.4, 6);
    const auto& pmf = std::get<RenewalSpec>(m.spec()).interarrival;
    for (std::size_t k = 0; k + 1 < pmf.size(); ++k) {
        std::vector<Symbol> past{0, 1};
        past.insert(past.end(), k, 0);
        CHECK(true_conditional(m, past, 1) == doctest::Approx(renewal_hazard(pmf, k)).epsilon(1e-12));
    }
}

TEST_CASE("Example-1 conditional depends only on the suffix back to the last one") {
    const ProcessModel m = make_example1();
    const std::vector<Symbol> a{0, 0, 1, 0, 0, 1, 0, 0, 0};
    const std::vector<Symbol> b{1, 0, 0, 0, 0, 1, 0, 0, 0};
    CHECK(true_conditional(m, a, 1) == true_conditional(m, b, 1));
}

TEST_CASE("memory length oracle") {
    CHECK(memory_length_oracle(make_bernoulli(0.3), std::vector<Symbol>{1, 0}) == MemoryLength{0});
    CHECK(memory_length_oracle(make_example1(), std::vector<Symbol>{0, 1, 0, 0}) == MemoryLength{3});
    CHECK(memory_length_oracle(make_example1(), std::vector<Symbol>{0, 0, 0}) == std::nullopt);
    CHECK(memory_length_oracle(make_binary_flip_chain(0.2), std::vector<Symbol>{1, 1, 0}) == MemoryLength{1});
}

TEST_CASE("entropy rate") {
    CHECK(entropy_rate(make_bernoulli(0.5)) == doctest::Approx(1.0));
    CHECK(entropy_rate(make_bernoulli(0.3)) == doctest::Approx(0.8812908992306927));
    MarkovSpec period2{1, 2, {{0.0, 1.0}, {1.0, 0.0}}};
    CHECK(entropy_rate(ProcessModel(ModelSpec{period2})) == 0.0);
    CHECK_THROWS_AS(entropy_rate(make_example1()), UnsupportedOracle);
}

TEST_CASE("invalid pasts are rejected") {
    const std::vector<Symbol> bad{0, 3};
    CHECK_THROWS_AS(true_conditional(make_example1(), bad, 1), InputError);
}

TEST_CASE("seed derivation") {
    CHECK(replicate_seed(1, 0) != replicate_seed(1, 1));
    CHECK(replicate_seed(1, 0) == replicate_seed(1, 0));
    Rng a(5), b(5);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
}
