#include "ergo/forward_predictor.hpp"

#include <algorithm>
#include <cmath>

#include "ergo/pattern_index.hpp"

namespace ergo {

namespace {

// Largest m with base^(10 m) <= n, i.e. floor(0.1 log_base n) for n >= 1.
std::size_t tenth_log_floor(std::size_t n, std::size_t base) {
    std::size_t m = 0;
    std::size_t power = 1;  // base^(10 m) <= n
    while (true) {
        std::size_t next = power;
        for (int i = 0; i < 10; ++i) {
            if (next > n / base) return m;  // next * base > n
            next *= base;
        }
        power = next;
        ++m;
    }
}

std::size_t ceil_sqrt(std::size_t n) {
    auto j = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (j * j < n) ++j;
    while (j > 0 && (j - 1) * (j - 1) >= n) --j;
    return j;
}

}  // namespace

DepthSchedule default_schedule(Alphabet alphabet) {
    if (alphabet.size < 2) throw InputError("default_schedule: alphabet must have at least 2 symbols");
    const auto base = static_cast<std::size_t>(alphabet.size);
    return DepthSchedule{
        [base](std::size_t n) { return std::max<std::size_t>(1, tenth_log_floor(n, base)); },
        [](std::size_t n) { return std::max<std::size_t>(1, ceil_sqrt(n)); },
    };
}

DepthChoice choose_depth(SymbolView path, std::size_t n, const DepthSchedule& schedule) {
    if (n >= path.size()) throw InputError("choose_depth: n beyond path");
    const std::size_t K = schedule.max_depth(n);
    const std::size_t J = schedule.min_occurrences(n);
    DepthChoice out;
    for (std::size_t k = std::min(K, n + 1); k >= 1; --k) {
        // occurrence_chain only returns shifts whose copy starts at index >= 0.
        if (occurrence_chain(path, n, k, J).size() >= J) {
            out.kappa = k;
            out.lambda = occurrence_chain(path, n, k, path.size()).size();
            break;
        }
    }
    return out;
}

ForwardEstimate forward_estimate(SymbolView path, Alphabet alphabet, std::size_t n,
                                 const DepthSchedule& schedule) {
    ForwardEstimate est;
    est.n = n;
    est.row.assign(static_cast<std::size_t>(alphabet.size), 0.0);
    const DepthChoice choice = choose_depth(path, n, schedule);
    est.kappa = choice.kappa;
    est.lambda = choice.lambda;
    if (choice.kappa == 0) return est;
    for (std::size_t tau : occurrence_chain(path, n, choice.kappa, choice.lambda))
        est.row[path[n - tau + 1]] += 1.0;
    for (double& v : est.row) v /= static_cast<double>(choice.lambda);
    return est;
}

double g(SymbolView path, Alphabet alphabet, std::size_t n, const DepthSchedule& schedule,
         Symbol target) {
    return forward_estimate(path, alphabet, n, schedule).g(target);
}

ForwardPredictor::ForwardPredictor(Alphabet alphabet, DepthSchedule schedule)
    : alphabet_(alphabet), schedule_(std::move(schedule)) {}

std::uint64_t ForwardPredictor::block_code(std::size_t end, std::size_t k) const {
    std::uint64_t code = 0;
    for (std::size_t i = end + 1 - k; i <= end; ++i)
        code = code * static_cast<std::uint64_t>(alphabet_.size) + path_[i];
    return code;
}

void ForwardPredictor::record(Table& table, std::size_t end, std::size_t k) {
    auto& stats = table[block_code(end, k)];
    if (stats.successors.empty()) stats.successors.assign(static_cast<std::size_t>(alphabet_.size), 0);
    ++stats.count;
    ++stats.successors[path_[end + 1]];
}

void ForwardPredictor::grow_depth(std::size_t k) {
    long double span = 1.0L;
    for (std::size_t i = 0; i < k; ++i) span *= static_cast<long double>(alphabet_.size);
    if (span > 1.8e19L) throw InputError("ForwardPredictor: block depth too large for 64-bit codes");
    Table table;
    for (std::size_t end = k - 1; end + 1 < path_.size(); ++end) record(table, end, k);
    tables_.push_back(std::move(table));
}

ForwardEstimate ForwardPredictor::push(Symbol x) {
    if (!alphabet_.contains(x)) throw InputError("ForwardPredictor: symbol outside alphabet");
    const std::size_t n = path_.size();
    path_.push_back(x);
    if (n >= 1)
        for (std::size_t k = 1; k <= tables_.size() && k <= n; ++k) record(tables_[k - 1], n - 1, k);

    const std::size_t K = schedule_.max_depth(n);
    const std::size_t J = schedule_.min_occurrences(n);
    while (tables_.size() < std::min(K, n + 1)) grow_depth(tables_.size() + 1);

    ForwardEstimate est;
    est.n = n;
    est.row.assign(static_cast<std::size_t>(alphabet_.size), 0.0);
    for (std::size_t k = std::min(K, n + 1); k >= 1; --k) {
        const auto it = tables_[k - 1].find(block_code(n, k));
        if (it == tables_[k - 1].end() || it->second.count < J) continue;
        est.kappa = k;
        est.lambda = it->second.count;
        for (std::size_t y = 0; y < est.row.size(); ++y)
            est.row[y] = static_cast<double>(it->second.successors[y]) / static_cast<double>(est.lambda);
        break;
    }
    return est;
}

double cesaro_error(SymbolView path, const ProcessModel& model, const DepthSchedule& schedule,
                    std::size_t N, Symbol target) {
    if (N == 0 || N > path.size()) throw InputError("cesaro_error: N must be in 1..path length");
    ForwardPredictor predictor(model.alphabet(), schedule);
    ConditionalOracle oracle(model);
    double total = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const ForwardEstimate est = predictor.push(path[i]);
        oracle.observe(path[i]);
        total += std::abs(est.g(target) - oracle.predict(target));
    }
    return total / static_cast<double>(N);
}

}  // namespace ergo
