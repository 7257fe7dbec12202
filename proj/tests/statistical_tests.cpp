// Seeded statistical properties.  Each case fixes its seeds, so a failure
// is reproducible; thresholds are the ones the estimators are meant to meet.

#include "doctest.h"

#include <cmath>

#include "ergo/backward_predictor.hpp"
#include "ergo/memory_inference.hpp"
#include "ergo/process_models.hpp"
#include "ergo/stoptime.hpp"

using namespace ergo;

namespace {

ProcessModel order2_chain() {
    return ProcessModel(MarkovSpec{2, 2, {{0.9, 0.1}, {0.4, 0.6}, {0.3, 0.7}, {0.2, 0.8}}});
}

double marginal_one(const ProcessModel& m) {
    return true_conditional(m, SymbolView{}, 1);
}

}  // namespace

TEST_CASE("paths are stationary from the first symbol") {
    const std::vector<ProcessModel> models{make_example1(), make_binary_flip_chain(0.1), order2_chain(),
                                           make_truncated_geometric_renewal(0.3, 7)};
    const std::size_t paths = 10000;
    for (const auto& m : models) {
        std::size_t first = 0, middle = 0;
        for (std::uint64_t seed = 0; seed < paths; ++seed) {
            const auto p = sample_path(m, 100, 1000003 * seed + 17);
            first += p[0];
            middle += p[50];
        }
        const double pi = marginal_one(m);
        const double se = std::sqrt(pi * (1.0 - pi) / static_cast<double>(paths));
        INFO(m.kind(), " pi(1) = ", pi);
        CHECK(std::abs(static_cast<double>(first) / paths - pi) <= 3.0 * se);
        CHECK(std::abs(static_cast<double>(middle) / paths - pi) <= 3.0 * se);
    }
}

TEST_CASE("backward picks are unbiased for the conditional given the matched block") {
    // pick_j = X_{-tau_j} should average P(X_0 = 1 | X_{-lambda_{j-1}}^{-1}).
    const ProcessModel m = order2_chain();
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
        const auto past = sample_path(m, 20000, seed).symbols();
        const BackwardState s = backward_state(past);
        for (std::size_t j = 1; j <= s.depth(); ++j) {
            const SymbolView context = SymbolView(past).last(s.lambdas[j - 1]);
            const double d = s.picks[j - 1] - true_conditional(m, context, 1);
            sum += d;
            sum_sq += d * d;
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    const double se = std::sqrt((sum_sq / static_cast<double>(count) - mean * mean) / static_cast<double>(count));
    INFO("mean difference ", mean, " over ", count, " picks, standard error ", se);
    CHECK(std::abs(mean) <= 3.0 * se);
}

TEST_CASE("pattern-doubling estimate tracks the oracle at the last stop") {
    const ProcessModel m = order2_chain();
    std::size_t good = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto path = sample_path(m, 1000000, seed).symbols();
        StopTimeTrace t = morvai2000(path);
        attach_truths(t, m, path);
        if (t.size() < 2) continue;
        good += std::abs(t.estimates.back() - t.truths.back()) <= 0.05;
    }
    INFO(good, "/50 replicates within 0.05");
    CHECK(good >= 45);
}

TEST_CASE("growing-window estimate tracks the oracle at the last stop") {
    const ProcessModel m = make_example1();
    std::size_t good = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto path = sample_path(m, 1000000, seed).symbols();
        StopTimeTrace t = mw03(path);
        attach_truths(t, m, path);
        if (t.size() == 0) continue;
        good += std::abs(t.estimates.back() - t.truths.back()) <= 0.05;
    }
    INFO(good, "/50 replicates within 0.05");
    CHECK(good >= 45);
}

TEST_CASE("tower probe on a fair coin") {
    const ProcessModel m = make_bernoulli(0.5);
    const double h = entropy_rate(m);
    std::size_t good = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const StopTimeTrace t = morvai2000(sample_path(m, 1000000, seed).symbols());
        const auto ratios = tower_probe(t, h, 0.3);
        bool ok = true;
        for (std::size_t k = 0; k < ratios.size(); ++k)
            if (t.times[k] >= 100) ok = ok && ratios[k] >= h - 0.3;
        good += ok;
    }
    INFO(good, "/50 replicates");
    CHECK(good >= 40);
}

TEST_CASE("empirical failure statistic stays above the true one") {
    // For Example-1, P(1 | 0) = 0.25 while the context (1, 0) forces 0, and
    // no context pushes P(1 | ..., 0) above 0.5, so the word (0) has
    // failure statistic exactly 0.25.
    const double truth = 0.25;
    const ProcessModel m = make_example1();
    const Word zero{0};
    std::size_t good = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto path = sample_path(m, 100001, seed).symbols();
        double lowest = 1.0;
        for (std::size_t n = 20000; n <= 100000; n += 20000)
            lowest = std::min(lowest, delta_hat(SymbolView(path).first(n + 1), 2, n, zero));
        good += lowest >= truth - 0.02;
    }
    INFO(good, "/20 replicates");
    CHECK(good >= 18);
}
