#pragma once

// Prediction along self-selected stopping times.
//
// morvai2000: the whole prefix X_0^{lambda_{k-1}} must recur; lambda_k is
// the start shift of its next copy added to lambda_{k-1}.  The estimate at
// lambda_k averages the symbols following lambda_1..lambda_{k-1}.
//
// mw03: only the length-k block ending at zeta_{k-1} must recur, so the
// stopping times grow like the recurrence times of k-blocks.

#include <optional>
#include <vector>

#include "ergo/process_models.hpp"
#include "ergo/types.hpp"

namespace ergo {

struct StopTimeTrace {
    /// times[k-1] is lambda_k (or zeta_k), k = 1, 2, ...
    std::vector<std::size_t> times;
    /// increments[k-1] is tau_k (or eta_k).
    std::vector<std::size_t> increments;
    /// estimates[k-1] estimates P(X_{time+1} = target | X_0^{time}).
    std::vector<double> estimates;
    /// Optional oracle values aligned with `times`.
    std::vector<double> truths;
    /// Set when the trace stopped because the next pattern did not recur
    /// inside the path.
    bool truncated = false;

    std::size_t size() const { return times.size(); }
};

StopTimeTrace morvai2000(SymbolView path, Symbol target = 1);
StopTimeTrace mw03(SymbolView path, Symbol target = 1);

/// Fills trace.truths with P(X_{time+1} = target | X_0^{time}).
void attach_truths(StopTimeTrace& trace, const ProcessModel& model, SymbolView path,
                   Symbol target = 1);

struct GrowthReport {
    /// holds[k-1] is zeta_k < 2^{k (H + eps)}.
    std::vector<bool> holds;
    /// Smallest k such that the bound holds for every observed k' >= k;
    /// std::nullopt when it fails at the last observed k.
    std::optional<std::size_t> settled_from;
};

GrowthReport growth_report(const StopTimeTrace& trace, double entropy_bits, double eps);

/// log2(lambda_{k+1}) / lambda_k for consecutive stopping times; requires
/// H > eps > 0 (InputError otherwise).
std::vector<double> tower_probe(const StopTimeTrace& trace, double entropy_bits, double eps);

}  // namespace ergo
