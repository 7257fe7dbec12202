#pragma once

// Recurrence and occurrence search over a single path.
//
// All searches are direct scans with early mismatch exit.  A missing
// recurrence is reported as std::nullopt (never a sentinel value); malformed
// indices throw InputError.

#include <optional>
#include <vector>

#include "ergo/types.hpp"

namespace ergo {

/// Inclusive index range [lo, hi].
struct Window {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

struct OccurrenceSet {
    std::vector<Symbol> word;
    /// End indices t, strictly increasing, with path[t-|word|+1 .. t] == word.
    std::vector<std::size_t> positions;

    std::size_t count() const { return positions.size(); }
};

/// True when path[a .. a+len-1] == path[b .. b+len-1].
bool blocks_equal(SymbolView path, std::size_t a, std::size_t b, std::size_t len);

/// Smallest t > 0 with path[n-k+1-t .. n-t] == path[n-k+1 .. n].
std::optional<std::size_t> recurrence_time(SymbolView path, std::size_t n, std::size_t k);

/// tau_1 < tau_2 < ... : successive backward recurrence shifts of the k-block
/// ending at n, at most `limit` of them.  Empty when the block does not fit.
std::vector<std::size_t> occurrence_chain(SymbolView path, std::size_t n, std::size_t k,
                                          std::size_t limit);

OccurrenceSet count_in_window(SymbolView path, Window window, SymbolView word);

/// Backward recurrence on a past stored oldest first (X_{-i} = past[size-i]):
/// smallest t > 0 with X_{-L-t}^{-1-t} == X_{-L}^{-1}, L = pattern_len.
std::optional<std::size_t> last_occurrence_before(SymbolView past, std::size_t pattern_len);

/// Forward recurrence: smallest t > 0 with
/// path[start+t .. start+len-1+t] == path[start .. start+len-1].
std::optional<std::size_t> next_occurrence(SymbolView path, std::size_t start, std::size_t len);

}  // namespace ergo
