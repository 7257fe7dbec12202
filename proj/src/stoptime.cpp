#include "ergo/stoptime.hpp"

#include <cmath>

#include "ergo/pattern_index.hpp"

namespace ergo {

StopTimeTrace morvai2000(SymbolView path, Symbol target) {
    if (path.size() < 2) throw InputError("morvai2000: path must have at least 2 symbols");
    StopTimeTrace trace;
    std::size_t lambda = 0;
    std::size_t hits = 0;  // sum_{j<k} 1{X_{lambda_j + 1} = target}, j >= 1
    for (std::size_t k = 1;; ++k) {
        auto tau = next_occurrence(path, 0, lambda + 1);
        if (!tau) {
            trace.truncated = true;
            break;
        }
        lambda += *tau;
        trace.times.push_back(lambda);
        trace.increments.push_back(*tau);
        trace.estimates.push_back(k == 1 ? 0.0 : static_cast<double>(hits) / static_cast<double>(k - 1));
        // X_{lambda_k + 1} enters the estimate from step k + 1 on.
        if (lambda + 1 < path.size() && path[lambda + 1] == target) ++hits;
        if (lambda + 1 >= path.size()) {
            trace.truncated = true;
            break;
        }
    }
    return trace;
}

StopTimeTrace mw03(SymbolView path, Symbol target) {
    if (path.size() < 2) throw InputError("mw03: path must have at least 2 symbols");
    StopTimeTrace trace;
    std::size_t zeta = 0;
    std::size_t hits = path[1] == target ? 1 : 0;  // X_{zeta_0 + 1}
    for (std::size_t k = 1;; ++k) {
        auto eta = next_occurrence(path, zeta - (k - 1), k);
        if (!eta) {
            trace.truncated = true;
            break;
        }
        zeta += *eta;
        trace.times.push_back(zeta);
        trace.increments.push_back(*eta);
        trace.estimates.push_back(static_cast<double>(hits) / static_cast<double>(k));
        if (zeta + 1 >= path.size()) {
            trace.truncated = true;
            break;
        }
        if (path[zeta + 1] == target) ++hits;
    }
    return trace;
}

void attach_truths(StopTimeTrace& trace, const ProcessModel& model, SymbolView path, Symbol target) {
    trace.truths.clear();
    ConditionalOracle oracle(model);
    std::size_t fed = 0;
    for (std::size_t time : trace.times) {
        while (fed <= time) oracle.observe(path[fed++]);
        trace.truths.push_back(oracle.predict(target));
    }
}

GrowthReport growth_report(const StopTimeTrace& trace, double entropy_bits, double eps) {
    GrowthReport report;
    for (std::size_t k = 1; k <= trace.size(); ++k) {
        const long double exponent = static_cast<long double>(k) * (entropy_bits + eps);
        const long double bound = std::exp2(exponent);
        report.holds.push_back(static_cast<long double>(trace.times[k - 1]) < bound);
    }
    std::size_t from = report.holds.size() + 1;
    for (std::size_t k = report.holds.size(); k >= 1 && report.holds[k - 1]; --k) from = k;
    if (from <= report.holds.size()) report.settled_from = from;
    return report;
}

std::vector<double> tower_probe(const StopTimeTrace& trace, double entropy_bits, double eps) {
    if (!(eps > 0.0 && entropy_bits > eps))
        throw InputError("tower_probe: requires entropy H > eps > 0");
    std::vector<double> ratios;
    for (std::size_t k = 1; k < trace.size(); ++k)
        ratios.push_back(std::log2(static_cast<double>(trace.times[k])) /
                         static_cast<double>(trace.times[k - 1]));
    return ratios;
}

}  // namespace ergo
