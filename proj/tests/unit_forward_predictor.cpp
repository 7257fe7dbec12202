#include "doctest.h"

#include <cmath>

#include "ergo/forward_predictor.hpp"
#include "ergo/process_models.hpp"
#include "naive.hpp"

using namespace ergo;

TEST_CASE("default schedule") {
    const auto s = default_schedule(Alphabet{2});
    CHECK(s.max_depth(100) == 1);
    CHECK(s.max_depth(1023) == 1);
    CHECK(s.max_depth(1048576) == 2);
    CHECK(s.max_depth(1048575) == 1);
    CHECK(s.min_occurrences(100) == 10);
    CHECK(s.min_occurrences(101) == 11);
    CHECK(s.min_occurrences(0) == 1);
    CHECK_THROWS_AS(default_schedule(Alphabet{1}), InputError);
}

TEST_CASE("depth choice examples") {
    const Alphabet bin{2};
    const auto sched = default_schedule(bin);
    const std::vector<Symbol> ones(101, 1);
    const auto c = choose_depth(ones, 100, sched);
    CHECK(c.kappa == 1);
    CHECK(c.lambda == 100);
    CHECK(g(ones, bin, 100, sched) == 1.0);

    std::vector<Symbol> alt(101);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<Symbol>(i % 2);
    const auto a = choose_depth(alt, 100, sched);
    CHECK(a.kappa == 1);
    CHECK(a.lambda == 50);
    CHECK(g(alt, bin, 100, sched) == 1.0);

    std::vector<Symbol> lone(30, 0);
    lone.back() = 1;
    CHECK(choose_depth(lone, 29, sched).kappa == 0);
    CHECK(g(lone, bin, 29, sched) == 0.0);
    CHECK(g(lone, bin, 0, sched) == 0.0);
}

TEST_CASE("streaming predictor equals direct evaluation") {
    const Alphabet bin{2};
    // A fast-growing depth schedule exercises several table depths.
    DepthSchedule sched{[](std::size_t n) { return std::max<std::size_t>(1, n / 40); },
                        [](std::size_t n) { return std::max<std::size_t>(1, n / 60); }};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto path = sample_path(make_example1(), 400, seed).symbols();
        ForwardPredictor fp(bin, sched);
        for (std::size_t n = 0; n < path.size(); ++n) {
            const auto streamed = fp.push(path[n]);
            const auto direct = forward_estimate(path, bin, n, sched);
            CHECK(streamed.kappa == direct.kappa);
            CHECK(streamed.lambda == direct.lambda);
            CHECK(streamed.row == direct.row);
            // Definition by rescans.
            std::size_t kappa = 0, lambda = 0;
            for (std::size_t k = std::min(sched.max_depth(n), n + 1); k >= 1; --k) {
                const auto chain = naive::all_recurrences(path, n, k);
                if (chain.size() >= sched.min_occurrences(n)) {
                    kappa = k;
                    lambda = chain.size();
                    break;
                }
            }
            CHECK(direct.kappa == kappa);
            CHECK(direct.lambda == lambda);
            if (direct.kappa > 0) {
                CHECK(direct.lambda >= sched.min_occurrences(n));
                CHECK(direct.row[0] + direct.row[1] == doctest::Approx(1.0));
            }
        }
    }
}

TEST_CASE("cesaro error") {
    const ProcessModel ones = make_bernoulli(1.0);
    const auto path = sample_path(ones, 500, 1).symbols();
    const auto sched = default_schedule(Alphabet{2});
    CHECK(cesaro_error(path, ones, sched, 1) == 1.0);
    CHECK(cesaro_error(path, ones, sched, 500) == doctest::Approx(1.0 / 500.0));
    const ProcessModel fair = make_bernoulli(0.5);
    const auto iid = sample_path(fair, 100000, 3).symbols();
    CHECK(cesaro_error(iid, fair, sched, 100000) <= 0.05);
    CHECK_THROWS_AS(cesaro_error(path, ones, sched, 0), InputError);
}
