#pragma once

// Generative process classes with exact oracles.
//
// Every model here is stationary: paths start from the exactly solved
// stationary law, never from a burn-in.  The oracles (conditional
// probability, memory length, entropy rate, block probability) are what the
// estimators are scored against.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergo/types.hpp"

namespace ergo {

using ProbabilityRow = std::vector<double>;

struct IidSpec {
    ProbabilityRow pmf;
};

/// Order-k chain.  Contexts are words of length `order`, encoded base
/// `alphabet` with the oldest symbol most significant; `rows[code]` is the
/// next-symbol law given that context.
struct MarkovSpec {
    int order = 1;
    int alphabet = 2;
    std::vector<ProbabilityRow> rows;
};

/// Binary indicator X_n = 1{M_n = distinguished} of a first-order hidden chain.
struct HiddenFunctionSpec {
    MarkovSpec hidden;
    int distinguished = 0;
};

/// Binary renewal process: ones are separated by iid gaps with
/// P(gap = j) = interarrival[j - 1], j = 1..L.
struct RenewalSpec {
    ProbabilityRow interarrival;
};

using ModelSpec = std::variant<IidSpec, MarkovSpec, HiddenFunctionSpec, RenewalSpec>;

/// Validated model with its stationary law precomputed.
class ProcessModel {
public:
    explicit ProcessModel(ModelSpec spec);

    const ModelSpec& spec() const { return spec_; }
    Alphabet alphabet() const { return alphabet_; }
    std::string kind() const;

    bool is_iid() const { return std::holds_alternative<IidSpec>(spec_); }
    bool is_markov() const { return std::holds_alternative<MarkovSpec>(spec_); }
    bool is_hidden() const { return std::holds_alternative<HiddenFunctionSpec>(spec_); }
    bool is_renewal() const { return std::holds_alternative<RenewalSpec>(spec_); }

    /// Markov: law over contexts.  Hidden/renewal: law over hidden states.
    /// Iid: the pmf.
    const ProbabilityRow& stationary() const { return stationary_; }

    /// Hidden chain driving hidden-function and renewal models (renewal is
    /// represented by its age chain, whose state 0 emits the one).
    const MarkovSpec& hidden_chain() const { return hidden_; }
    int distinguished_state() const { return distinguished_; }

private:
    ModelSpec spec_;
    Alphabet alphabet_;
    ProbabilityRow stationary_;
    MarkovSpec hidden_;
    int distinguished_ = 0;
};

// Convenience constructors for the model classes used throughout the tests.
ProcessModel make_bernoulli(double p_one);
ProcessModel make_binary_flip_chain(double flip);
/// Three-state hidden chain 0->1, 1->2 surely, 2->0 or 2->1 with prob 1/2,
/// observed through the indicator of state 0.  Not Markov of any order.
ProcessModel make_example1();
/// Renewal with geometric(q) gaps truncated at `max_gap` and renormalized.
ProcessModel make_truncated_geometric_renewal(double q, int max_gap);

/// Number of contexts alphabet^order; throws if it would not fit.
std::size_t context_count(int alphabet, int order);

/// Stationary law of the context chain.  Solved by power iteration on the
/// lazy chain (P + I)/2, which shares the stationary law and is aperiodic.
/// Throws ConvergenceError when the iteration cap is hit.
ProbabilityRow stationary_distribution(const MarkovSpec& spec);

/// Stationary path of `length` symbols.  Deterministic in (model, length,
/// seed); a shorter path is a prefix of a longer one with the same seed.
SamplePath sample_path(const ProcessModel& model, std::size_t length, std::uint64_t seed);

/// Streaming exact predictor P(X_{n+1} = . | X_0^n).  Markov models are a
/// table lookup (marginalized over the stationary context law while the
/// past is shorter than the order); hidden-function and renewal models run
/// an exact forward filter over hidden states.
class ConditionalOracle {
public:
    explicit ConditionalOracle(const ProcessModel& model);

    void observe(Symbol x);
    /// Law of the next symbol given everything observed so far.
    ProbabilityRow predict() const;
    double predict(Symbol x) const;
    std::size_t observed() const { return observed_; }

private:
    const ProcessModel* model_;
    std::size_t observed_ = 0;
    std::vector<Symbol> recent_;  // last `order` symbols, Markov only
    ProbabilityRow filter_;       // hidden-state posterior, hidden/renewal only
};

/// P(X_{n+1} = symbol | X_0^n = past).  Empty past gives the stationary
/// marginal.  Throws InputError for out-of-alphabet or zero-probability pasts.
double true_conditional(const ProcessModel& model, SymbolView past, Symbol symbol);
ProbabilityRow true_conditional_row(const ProcessModel& model, SymbolView past);

/// Stationary probability of a block.
double word_probability(const ProcessModel& model, SymbolView word);

/// Memory length of the observed past (oldest symbol first).  std::nullopt
/// stands for an infinite memory (no one observed for hidden/renewal).
using MemoryLength = std::optional<std::size_t>;
MemoryLength memory_length_oracle(const ProcessModel& model, SymbolView past);

/// Entropy rate in bits per symbol; iid and Markov only.
double entropy_rate(const ProcessModel& model);

}  // namespace ergo
