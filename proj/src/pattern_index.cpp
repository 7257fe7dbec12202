#include "ergo/pattern_index.hpp"

#include <algorithm>
#include <cstring>

namespace ergo {

bool blocks_equal(SymbolView path, std::size_t a, std::size_t b, std::size_t len) {
    return std::memcmp(path.data() + a, path.data() + b, len) == 0;
}

namespace {

// Smallest shift t >= first_shift at which the k-block ending at `end`
// reappears ending at end - t (and starting at or after index 0).
std::optional<std::size_t> backward_shift(SymbolView path, std::size_t end, std::size_t k,
                                          std::size_t first_shift) {
    const std::size_t start = end + 1 - k;
    const Symbol last = path[end];
    for (std::size_t t = first_shift; t <= start; ++t) {
        if (path[end - t] != last) continue;
        if (blocks_equal(path, start - t, start, k)) return t;
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::size_t> recurrence_time(SymbolView path, std::size_t n, std::size_t k) {
    if (k == 0) throw InputError("recurrence_time: block length must be positive");
    if (n >= path.size()) throw InputError("recurrence_time: end index beyond path");
    if (k > n + 1) throw InputError("recurrence_time: block does not fit before the end index");
    return backward_shift(path, n, k, 1);
}

std::vector<std::size_t> occurrence_chain(SymbolView path, std::size_t n, std::size_t k,
                                          std::size_t limit) {
    std::vector<std::size_t> taus;
    if (k == 0 || n >= path.size() || k > n + 1) return taus;
    std::size_t from = 1;
    while (taus.size() < limit) {
        auto t = backward_shift(path, n, k, from);
        if (!t) break;
        taus.push_back(*t);
        from = *t + 1;
    }
    return taus;
}

OccurrenceSet count_in_window(SymbolView path, Window window, SymbolView word) {
    if (word.empty()) throw InputError("count_in_window: word must be nonempty");
    if (window.lo > window.hi || window.hi >= path.size())
        throw InputError("count_in_window: window outside path");
    OccurrenceSet out;
    out.word.assign(word.begin(), word.end());
    const std::size_t len = word.size();
    const std::size_t first = std::max(window.lo + len - 1, len - 1);
    for (std::size_t t = first; t <= window.hi; ++t) {
        if (path[t] != word.back()) continue;
        if (std::memcmp(path.data() + t + 1 - len, word.data(), len) == 0) out.positions.push_back(t);
    }
    return out;
}

std::optional<std::size_t> last_occurrence_before(SymbolView past, std::size_t pattern_len) {
    if (pattern_len == 0) throw InputError("last_occurrence_before: pattern must be nonempty");
    if (pattern_len > past.size()) return std::nullopt;
    return backward_shift(past, past.size() - 1, pattern_len, 1);
}

std::optional<std::size_t> next_occurrence(SymbolView path, std::size_t start, std::size_t len) {
    if (len == 0) throw InputError("next_occurrence: pattern must be nonempty");
    if (start + len > path.size()) throw InputError("next_occurrence: pattern beyond path");
    const Symbol first = path[start];
    for (std::size_t s = start + 1; s + len <= path.size(); ++s) {
        if (path[s] != first) continue;
        if (blocks_equal(path, s, start, len)) return s - start;
    }
    return std::nullopt;
}

}  // namespace ergo
