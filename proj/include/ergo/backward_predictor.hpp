#pragma once

// Backward estimation of P(X_0 = x | X_{-1}, X_{-2}, ...) from a finite past
// by growing recurrence patterns.
//
// The past is stored oldest first, X_{-i} = past[past.size() - i].  Starting
// from lambda_0 = 1, each step looks up the last earlier copy of the most
// recent lambda_{k-1} symbols; its shift is tau_k, lambda_k = lambda_{k-1} +
// tau_k, and the symbol just after the copy, X_{-tau_k}, is recorded as a
// pick.  P_k is the average of the first k picks.

#include <limits>
#include <vector>

#include "ergo/types.hpp"

namespace ergo {

struct BackwardState {
    std::vector<std::size_t> lambdas{1};  // lambda_0 = 1, lambda_1, ...
    std::vector<std::size_t> taus;        // tau_1, tau_2, ...
    std::vector<Symbol> picks;            // X_{-tau_1}, X_{-tau_2}, ...
    /// Set once the finite past cannot supply the next recurrence.
    bool frozen = false;

    std::size_t depth() const { return taus.size(); }
};

/// One recursion step; freezes instead of failing when the past runs out.
BackwardState extend(BackwardState state, SymbolView past);

/// Extends until frozen or `max_depth` picks are collected.
BackwardState backward_state(SymbolView past,
                             std::size_t max_depth = std::numeric_limits<std::size_t>::max());

/// Fraction of the first k picks equal to `target` (the mean of the picks in
/// the binary case).  Throws InputError if fewer than k picks exist.
double p_k(const BackwardState& state, std::size_t k, Symbol target = 1);

struct BackwardEstimate {
    std::size_t t = 0;
    std::size_t kappa = 0;  // max{k : lambda_k <= t}
    double p_hat = 0.0;     // P_kappa, and 0 when kappa = 0
};

/// Fixed-sample-size estimate using only the most recent t symbols.
BackwardEstimate p_hat(SymbolView past, std::size_t t, Symbol target = 1);

}  // namespace ergo
