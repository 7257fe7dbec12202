#pragma once

// Forward estimation of P(X_{n+1} = x | X_0^n) with a data-driven context
// depth.  kappa_n is the deepest k <= K_n whose block X_{n-k+1}^n occurred at
// least J_n times before; g_n is the successor frequency over all lambda_n
// earlier occurrences of that block.

#include <functional>
#include <unordered_map>
#include <vector>

#include "ergo/process_models.hpp"
#include "ergo/types.hpp"

namespace ergo {

struct DepthSchedule {
    std::function<std::size_t(std::size_t)> max_depth;        // K_n >= 1
    std::function<std::size_t(std::size_t)> min_occurrences;  // J_n >= 1
};

/// K_n = max(1, floor(0.1 log_|X| n)), J_n = max(1, ceil(sqrt(n))), both
/// evaluated in exact integer arithmetic.
DepthSchedule default_schedule(Alphabet alphabet);

struct ForwardEstimate {
    std::size_t n = 0;
    std::size_t kappa = 0;
    std::size_t lambda = 0;
    /// Successor frequencies per symbol; all zero when kappa == 0.
    std::vector<double> row;

    double g(Symbol target = 1) const { return row[target]; }
};

struct DepthChoice {
    std::size_t kappa = 0;
    std::size_t lambda = 0;
};

/// Direct evaluation from the recurrence chains.  O(n K_n) per call.
DepthChoice choose_depth(SymbolView path, std::size_t n, const DepthSchedule& schedule);
ForwardEstimate forward_estimate(SymbolView path, Alphabet alphabet, std::size_t n,
                                 const DepthSchedule& schedule);
double g(SymbolView path, Alphabet alphabet, std::size_t n, const DepthSchedule& schedule,
         Symbol target = 1);

/// Streaming evaluation of the same estimator for n = 0, 1, 2, ...; keeps
/// per-depth block tables so each step costs O(K_n^2).
class ForwardPredictor {
public:
    ForwardPredictor(Alphabet alphabet, DepthSchedule schedule);

    /// Appends X_n and returns the estimate g_n computed from X_0^n.
    ForwardEstimate push(Symbol x);
    std::size_t size() const { return path_.size(); }

private:
    struct BlockStats {
        std::size_t count = 0;
        std::vector<std::size_t> successors;
    };
    using Table = std::unordered_map<std::uint64_t, BlockStats>;

    std::uint64_t block_code(std::size_t end, std::size_t k) const;
    void record(Table& table, std::size_t end, std::size_t k);
    void grow_depth(std::size_t k);

    Alphabet alphabet_;
    DepthSchedule schedule_;
    std::vector<Symbol> path_;
    std::vector<Table> tables_;  // tables_[k-1]: blocks of length k ending before n
};

/// (1/N) sum_{i<N} |g_i - P(X_{i+1} = target | X_0^i)|.
double cesaro_error(SymbolView path, const ProcessModel& model, const DepthSchedule& schedule,
                    std::size_t N, Symbol target = 1);

}  // namespace ergo
