#include "ergo/backward_predictor.hpp"

#include <algorithm>

#include "ergo/pattern_index.hpp"

namespace ergo {

BackwardState extend(BackwardState state, SymbolView past) {
    if (state.frozen) return state;
    const std::size_t pattern = state.lambdas.back();
    auto tau = last_occurrence_before(past, pattern);
    if (!tau) {
        state.frozen = true;
        return state;
    }
    state.taus.push_back(*tau);
    state.lambdas.push_back(pattern + *tau);
    state.picks.push_back(past[past.size() - *tau]);
    return state;
}

BackwardState backward_state(SymbolView past, std::size_t max_depth) {
    BackwardState state;
    while (!state.frozen && state.depth() < max_depth) state = extend(std::move(state), past);
    return state;
}

double p_k(const BackwardState& state, std::size_t k, Symbol target) {
    if (k == 0) throw InputError("p_k: k must be positive");
    if (k > state.picks.size())
        throw InputError("p_k: only " + std::to_string(state.picks.size()) + " picks available");
    const auto hits = std::count(state.picks.begin(), state.picks.begin() + static_cast<std::ptrdiff_t>(k), target);
    return static_cast<double>(hits) / static_cast<double>(k);
}

BackwardEstimate p_hat(SymbolView past, std::size_t t, Symbol target) {
    if (t == 0) throw InputError("p_hat: t must be at least 1");
    // A recurrence with lambda_k <= t only ever reads lags up to t.
    const std::size_t usable = std::min(t, past.size());
    const BackwardState state = backward_state(past.subspan(past.size() - usable));
    BackwardEstimate out;
    out.t = t;
    out.kappa = state.depth();
    out.p_hat = out.kappa == 0 ? 0.0 : p_k(state, out.kappa, target);
    return out;
}

}  // namespace ergo
