#include "ergo/process_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ergo/rng.hpp"

namespace ergo {

SamplePath::SamplePath(std::vector<Symbol> symbols, Alphabet alphabet)
    : symbols_(std::move(symbols)), alphabet_(alphabet) {
    if (alphabet_.size < 1 || alphabet_.size > kMaxAlphabet)
        throw InputError("alphabet size must be in 1..256");
    if (symbols_.empty()) throw InputError("sample path must contain at least one symbol");
    validate_symbols(symbols_, alphabet_);
}

SamplePath SamplePath::prefix(std::size_t n) const {
    if (n >= symbols_.size()) throw InputError("prefix end beyond path");
    return SamplePath({symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(n + 1)},
                      alphabet_);
}

void validate_symbols(SymbolView symbols, Alphabet alphabet) {
    for (Symbol s : symbols)
        if (!alphabet.contains(s))
            throw InputError("symbol " + std::to_string(s) + " outside alphabet of size " +
                             std::to_string(alphabet.size));
}

namespace {

constexpr double kRowTolerance = 1e-12;
constexpr double kInvarianceTolerance = 1e-10;
constexpr double kRowEquality = 1e-12;

void validate_row(const ProbabilityRow& row, std::size_t width, const char* what) {
    if (row.size() != width)
        throw ConfigError(std::string(what) + ": row has " + std::to_string(row.size()) +
                          " entries, expected " + std::to_string(width));
    double total = 0.0;
    for (double p : row) {
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError(std::string(what) + ": probability outside [0,1]");
        total += p;
    }
    if (std::abs(total - 1.0) > kRowTolerance)
        throw ConfigError(std::string(what) + ": row does not sum to 1");
}

void validate_markov(const MarkovSpec& spec) {
    if (spec.order < 0) throw ConfigError("markov: negative order");
    if (spec.alphabet < 1 || spec.alphabet > kMaxAlphabet)
        throw ConfigError("markov: alphabet size must be in 1..256");
    const std::size_t contexts = context_count(spec.alphabet, spec.order);
    if (spec.rows.size() != contexts)
        throw ConfigError("markov: expected " + std::to_string(contexts) + " transition rows, got " +
                          std::to_string(spec.rows.size()));
    for (const auto& row : spec.rows)
        validate_row(row, static_cast<std::size_t>(spec.alphabet), "markov");
}

// Law over contexts, with the single empty context for order 0.
ProbabilityRow context_law(const MarkovSpec& spec) {
    if (spec.order == 0) return {1.0};
    return stationary_distribution(spec);
}

// Hidden age chain of a renewal process: state a = time since the last one;
// state 0 emits the one.  Stationary law is proportional to P(gap > a).
std::pair<MarkovSpec, ProbabilityRow> renewal_age_chain(const RenewalSpec& spec) {
    ProbabilityRow pmf = spec.interarrival;
    while (!pmf.empty() && pmf.back() == 0.0) pmf.pop_back();
    if (pmf.empty()) throw ConfigError("renewal: interarrival pmf is empty");
    const std::size_t gaps = pmf.size();

    std::vector<double> survival(gaps);  // survival[a] = P(gap > a)
    double tail = 0.0;
    for (std::size_t j = gaps; j-- > 0;) {
        tail += pmf[j];
        survival[j] = tail;
    }

    MarkovSpec chain;
    chain.order = 1;
    chain.alphabet = static_cast<int>(gaps);
    chain.rows.assign(gaps, ProbabilityRow(gaps, 0.0));
    for (std::size_t a = 0; a < gaps; ++a) {
        const double hazard = (a + 1 == gaps) ? 1.0 : pmf[a] / survival[a];
        chain.rows[a][0] += hazard;
        if (a + 1 < gaps) chain.rows[a][a + 1] += 1.0 - hazard;
    }
    const double mean = std::accumulate(survival.begin(), survival.end(), 0.0);
    ProbabilityRow law(gaps);
    for (std::size_t a = 0; a < gaps; ++a) law[a] = survival[a] / mean;
    return {std::move(chain), std::move(law)};
}

std::size_t encode(SymbolView word, int alphabet) {
    std::size_t code = 0;
    for (Symbol s : word) code = code * static_cast<std::size_t>(alphabet) + s;
    return code;
}

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

std::size_t context_count(int alphabet, int order) {
    std::size_t count = 1;
    for (int i = 0; i < order; ++i) {
        if (count > (std::size_t{1} << 24) / static_cast<std::size_t>(alphabet))
            throw ConfigError("markov: too many contexts");
        count *= static_cast<std::size_t>(alphabet);
    }
    return count;
}

ProbabilityRow stationary_distribution(const MarkovSpec& spec) {
    validate_markov(spec);
    if (spec.order == 0) return spec.rows.front();

    const std::size_t a = static_cast<std::size_t>(spec.alphabet);
    const std::size_t contexts = spec.rows.size();
    ProbabilityRow pi(contexts, 1.0 / static_cast<double>(contexts));
    ProbabilityRow next(contexts);

    constexpr int kMaxIterations = 2'000'000;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t c = 0; c < contexts; ++c) {
            if (pi[c] == 0.0) continue;
            next[c] += 0.5 * pi[c];
            const std::size_t shifted = (c * a) % contexts;
            for (std::size_t y = 0; y < a; ++y) next[shifted + y] += 0.5 * pi[c] * spec.rows[c][y];
        }
        double change = 0.0;
        for (std::size_t c = 0; c < contexts; ++c) change += std::abs(next[c] - pi[c]);
        pi.swap(next);
        if (change < 1e-15) break;
    }
    const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& p : pi) p /= total;

    // Residual of pi P = pi on the original chain.
    ProbabilityRow image(contexts, 0.0);
    for (std::size_t c = 0; c < contexts; ++c) {
        const std::size_t shifted = (c * a) % contexts;
        for (std::size_t y = 0; y < a; ++y) image[shifted + y] += pi[c] * spec.rows[c][y];
    }
    for (std::size_t c = 0; c < contexts; ++c)
        if (std::abs(image[c] - pi[c]) > kInvarianceTolerance)
            throw ConvergenceError("stationary distribution: not irreducible/aperiodic at tolerance");
    return pi;
}

ProcessModel::ProcessModel(ModelSpec spec) : spec_(std::move(spec)) {
    std::visit(
        [this](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IidSpec>) {
                if (s.pmf.empty() || s.pmf.size() > kMaxAlphabet)
                    throw ConfigError("iid: pmf must have 1..256 entries");
                validate_row(s.pmf, s.pmf.size(), "iid");
                alphabet_ = {static_cast<int>(s.pmf.size())};
                stationary_ = s.pmf;
            } else if constexpr (std::is_same_v<T, MarkovSpec>) {
                validate_markov(s);
                alphabet_ = {s.alphabet};
                stationary_ = context_law(s);
            } else if constexpr (std::is_same_v<T, HiddenFunctionSpec>) {
                validate_markov(s.hidden);
                if (s.hidden.order != 1) throw ConfigError("hidden: hidden chain must be first order");
                if (s.distinguished < 0 || s.distinguished >= s.hidden.alphabet)
                    throw ConfigError("hidden: distinguished state out of range");
                alphabet_ = {2};
                hidden_ = s.hidden;
                distinguished_ = s.distinguished;
                stationary_ = stationary_distribution(hidden_);
                if (stationary_[static_cast<std::size_t>(distinguished_)] <= 0.0)
                    throw ConfigError("hidden: distinguished state has zero stationary probability");
            } else {
                for (double p : s.interarrival)
                    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("renewal: probability outside [0,1]");
                const double total = std::accumulate(s.interarrival.begin(), s.interarrival.end(), 0.0);
                if (std::abs(total - 1.0) > kRowTolerance) throw ConfigError("renewal: pmf does not sum to 1");
                alphabet_ = {2};
                auto [chain, law] = renewal_age_chain(s);
                hidden_ = std::move(chain);
                stationary_ = std::move(law);
                distinguished_ = 0;
            }
        },
        spec_);
}

std::string ProcessModel::kind() const {
    switch (spec_.index()) {
        case 0: return "iid";
        case 1: return "markov";
        case 2: return "hidden";
        default: return "renewal";
    }
}

ProcessModel make_bernoulli(double p_one) { return ProcessModel(IidSpec{{1.0 - p_one, p_one}}); }

ProcessModel make_binary_flip_chain(double flip) {
    return ProcessModel(MarkovSpec{1, 2, {{1.0 - flip, flip}, {flip, 1.0 - flip}}});
}

ProcessModel make_example1() {
    MarkovSpec hidden{1, 3, {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.5, 0.5, 0.0}}};
    return ProcessModel(HiddenFunctionSpec{hidden, 0});
}

ProcessModel make_truncated_geometric_renewal(double q, int max_gap) {
    if (max_gap < 1) throw ConfigError("renewal: max_gap must be positive");
    ProbabilityRow pmf(static_cast<std::size_t>(max_gap));
    double total = 0.0;
    for (int j = 1; j <= max_gap; ++j) {
        pmf[static_cast<std::size_t>(j - 1)] = q * std::pow(1.0 - q, j - 1);
        total += pmf[static_cast<std::size_t>(j - 1)];
    }
    for (double& p : pmf) p /= total;
    // Renormalization can leave the sum a few ulps off 1.
    pmf.back() = 1.0 - std::accumulate(pmf.begin(), pmf.end() - 1, 0.0);
    return ProcessModel(RenewalSpec{pmf});
}

SamplePath sample_path(const ProcessModel& model, std::size_t length, std::uint64_t seed) {
    if (length == 0) throw InputError("sample_path: length must be positive");
    Rng rng(seed);
    std::vector<Symbol> out;
    out.reserve(length);

    if (model.is_iid()) {
        const auto& pmf = std::get<IidSpec>(model.spec()).pmf;
        for (std::size_t i = 0; i < length; ++i) out.push_back(static_cast<Symbol>(rng.categorical(pmf)));
    } else if (model.is_markov()) {
        const auto& spec = std::get<MarkovSpec>(model.spec());
        const std::size_t a = static_cast<std::size_t>(spec.alphabet);
        const std::size_t contexts = spec.rows.size();
        std::size_t code = static_cast<std::size_t>(rng.categorical(model.stationary()));
        // Emit the initial context, oldest symbol first.
        std::vector<Symbol> initial(static_cast<std::size_t>(spec.order));
        std::size_t c = code;
        for (int i = spec.order - 1; i >= 0; --i) {
            initial[static_cast<std::size_t>(i)] = static_cast<Symbol>(c % a);
            c /= a;
        }
        for (std::size_t i = 0; i < initial.size() && out.size() < length; ++i) out.push_back(initial[i]);
        while (out.size() < length) {
            const int y = rng.categorical(spec.rows[code]);
            out.push_back(static_cast<Symbol>(y));
            code = (code * a + static_cast<std::size_t>(y)) % contexts;
        }
    } else {
        const auto& chain = model.hidden_chain();
        const int s = model.distinguished_state();
        int state = rng.categorical(model.stationary());
        out.push_back(static_cast<Symbol>(state == s));
        while (out.size() < length) {
            state = rng.categorical(chain.rows[static_cast<std::size_t>(state)]);
            out.push_back(static_cast<Symbol>(state == s));
        }
    }
    return SamplePath(std::move(out), model.alphabet());
}

ConditionalOracle::ConditionalOracle(const ProcessModel& model) : model_(&model) {
    if (model.is_hidden() || model.is_renewal()) filter_ = model.stationary();
}

void ConditionalOracle::observe(Symbol x) {
    if (!model_->alphabet().contains(x)) throw InputError("oracle: symbol outside alphabet");
    if (model_->is_markov()) {
        const auto& spec = std::get<MarkovSpec>(model_->spec());
        if (spec.order > 0) {
            recent_.push_back(x);
            if (recent_.size() > static_cast<std::size_t>(spec.order)) recent_.erase(recent_.begin());
        }
    } else if (!model_->is_iid()) {
        const auto& chain = model_->hidden_chain();
        const std::size_t states = filter_.size();
        const std::size_t s = static_cast<std::size_t>(model_->distinguished_state());
        ProbabilityRow next(states, 0.0);
        if (observed_ == 0) {
            next = filter_;
        } else {
            for (std::size_t m = 0; m < states; ++m) {
                if (filter_[m] == 0.0) continue;
                for (std::size_t m2 = 0; m2 < states; ++m2) next[m2] += filter_[m] * chain.rows[m][m2];
            }
        }
        double total = 0.0;
        for (std::size_t m = 0; m < states; ++m) {
            if ((m == s) != (x == 1)) next[m] = 0.0;
            total += next[m];
        }
        if (total <= 0.0) throw InputError("oracle: observed past has probability zero");
        for (double& p : next) p /= total;
        filter_.swap(next);
    }
    ++observed_;
}

ProbabilityRow ConditionalOracle::predict() const {
    if (model_->is_iid()) return std::get<IidSpec>(model_->spec()).pmf;
    if (model_->is_markov()) {
        const auto& spec = std::get<MarkovSpec>(model_->spec());
        const std::size_t a = static_cast<std::size_t>(spec.alphabet);
        if (recent_.size() == static_cast<std::size_t>(spec.order))
            return spec.rows[encode(recent_, spec.alphabet)];
        // Past shorter than the order: average rows over consistent contexts.
        const std::size_t modulus = ipow(a, static_cast<int>(recent_.size()));
        const std::size_t suffix = encode(recent_, spec.alphabet);
        const auto& law = model_->stationary();
        ProbabilityRow row(a, 0.0);
        double weight = 0.0;
        for (std::size_t c = 0; c < spec.rows.size(); ++c) {
            if (c % modulus != suffix || law[c] == 0.0) continue;
            weight += law[c];
            for (std::size_t y = 0; y < a; ++y) row[y] += law[c] * spec.rows[c][y];
        }
        if (weight <= 0.0) throw InputError("oracle: observed past has probability zero");
        for (double& p : row) p /= weight;
        return row;
    }
    const auto& chain = model_->hidden_chain();
    const std::size_t s = static_cast<std::size_t>(model_->distinguished_state());
    double one = 0.0;
    if (observed_ == 0) {
        one = filter_[s];
    } else {
        for (std::size_t m = 0; m < filter_.size(); ++m) one += filter_[m] * chain.rows[m][s];
    }
    return {1.0 - one, one};
}

double ConditionalOracle::predict(Symbol x) const {
    if (!model_->alphabet().contains(x)) throw InputError("oracle: symbol outside alphabet");
    return predict()[x];
}

ProbabilityRow true_conditional_row(const ProcessModel& model, SymbolView past) {
    validate_symbols(past, model.alphabet());
    ConditionalOracle oracle(model);
    for (Symbol x : past) oracle.observe(x);
    return oracle.predict();
}

double true_conditional(const ProcessModel& model, SymbolView past, Symbol symbol) {
    if (!model.alphabet().contains(symbol)) throw InputError("true_conditional: symbol outside alphabet");
    return true_conditional_row(model, past)[symbol];
}

double word_probability(const ProcessModel& model, SymbolView word) {
    validate_symbols(word, model.alphabet());
    ConditionalOracle oracle(model);
    double p = 1.0;
    for (Symbol x : word) {
        const double step = oracle.predict(x);
        if (step == 0.0) return 0.0;
        p *= step;
        oracle.observe(x);
    }
    return p;
}

MemoryLength memory_length_oracle(const ProcessModel& model, SymbolView past) {
    validate_symbols(past, model.alphabet());
    if (model.is_iid()) return 0;
    if (model.is_hidden() || model.is_renewal()) {
        for (std::size_t back = 1; back <= past.size(); ++back)
            if (past[past.size() - back] == 1) return back;
        return std::nullopt;
    }
    const auto& spec = std::get<MarkovSpec>(model.spec());
    const std::size_t a = static_cast<std::size_t>(spec.alphabet);
    const auto& law = model.stationary();
    const std::size_t usable = std::min(past.size(), static_cast<std::size_t>(spec.order));
    for (std::size_t j = 0; j <= usable; ++j) {
        const std::size_t modulus = ipow(a, static_cast<int>(j));
        const std::size_t suffix = encode(past.subspan(past.size() - j), spec.alphabet);
        const ProbabilityRow* reference = nullptr;
        if (past.size() >= static_cast<std::size_t>(spec.order))
            reference = &spec.rows[encode(past.subspan(past.size() - static_cast<std::size_t>(spec.order)),
                                          spec.alphabet)];
        bool uniform = true;
        for (std::size_t c = 0; c < spec.rows.size() && uniform; ++c) {
            if (c % modulus != suffix || law[c] == 0.0) continue;
            if (reference == nullptr) {
                reference = &spec.rows[c];
                continue;
            }
            for (std::size_t y = 0; y < a; ++y)
                if (std::abs(spec.rows[c][y] - (*reference)[y]) > kRowEquality) uniform = false;
        }
        if (uniform) return j;
    }
    throw InputError("memory_length_oracle: past shorter than the chain order does not determine the context");
}

double entropy_rate(const ProcessModel& model) {
    auto row_entropy = [](const ProbabilityRow& row) {
        double h = 0.0;
        for (double p : row)
            if (p > 0.0) h -= p * std::log2(p);
        return h;
    };
    if (model.is_iid()) return row_entropy(std::get<IidSpec>(model.spec()).pmf);
    if (model.is_markov()) {
        const auto& spec = std::get<MarkovSpec>(model.spec());
        const auto& law = model.stationary();
        double h = 0.0;
        for (std::size_t c = 0; c < spec.rows.size(); ++c) h += law[c] * row_entropy(spec.rows[c]);
        return std::max(h, 0.0);
    }
    throw UnsupportedOracle("entropy_rate: only iid and Markov models are supported");
}

}  // namespace ergo
