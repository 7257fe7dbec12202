#pragma once

// Memory-word testing and memory-length estimation.
//
// Backward statistics look at the window X_{-n}^0, addressed here as the last
// n+1 symbols of `past`.  Forward statistics look at X_0^n, i.e. the first
// n+1 symbols of `path`; ptest is ntest on that window.
//
// A word w is a memory word when the conditional law of the next symbol
// given w does not change under any further left extension z w.  delta_hat
// measures the empirical failure of that property, restricted to extensions
// seen often enough: more than n^(1-gamma) times.

#include <functional>
#include <optional>
#include <vector>

#include "ergo/context_tree.hpp"
#include "ergo/types.hpp"

namespace ergo {

using LSchedule = std::function<std::size_t(std::size_t)>;

/// l_n = min(n, max(1, floor(10 log2 n))), l_0 = 0.
std::size_t default_l(std::size_t n);

struct MemoryParams {
    double gamma = 0.5;
    double beta = 0.2;
    double epsilon = 0.1;
    LSchedule l_schedule = default_l;

    /// Throws InputError unless 0 < gamma < 1, 0 < beta < (1-gamma)/2 and
    /// 0 < epsilon < 1.  The stopping scheme's 2 beta + gamma < 1 is the
    /// same inequality.
    void validate() const;
};

/// Smallest integer count exceeding n^(1-gamma).
std::size_t frequency_floor(std::size_t n, double gamma);
/// n^(-beta).
double pass_threshold(std::size_t n, double beta);

/// Words in length-then-lexicographic order: w(0) is the empty word, then
/// all words of length 1, and so on.  Indices saturate at UINT64_MAX.
class WordList {
public:
    explicit WordList(int alphabet);
    std::uint64_t index(SymbolView word) const;
    std::vector<Symbol> word(std::uint64_t index) const;
    int alphabet() const { return alphabet_; }

private:
    int alphabet_;
};

using Word = std::vector<Symbol>;

/// Ratio of (word, symbol) to word occurrences with the successor inside the
/// backward window; nullopt when the word does not occur.
std::optional<double> empirical_conditional(SymbolView past, std::size_t n, SymbolView word,
                                            Symbol symbol);

/// Words of length k+1 occurring more than n^(1-gamma) times in the backward
/// window, sorted.
std::vector<Word> frequent_words(SymbolView past, std::size_t n, std::size_t k, double gamma);
/// Split-window variant over X_0^t with h = ceil(t/2): more than t^(1-gamma)
/// occurrences ending in [h+k, t] and at least one ending in [k, h-1].
std::vector<Word> frequent_words_split(SymbolView path, std::size_t t, std::size_t k, double gamma);

/// Backward-window statistics sharing one context tree.
class BackwardMemoryView {
public:
    BackwardMemoryView(SymbolView past, int alphabet, std::size_t n, const MemoryParams& params);

    double delta_hat(SymbolView word);
    bool ntest(SymbolView word);
    /// Smallest k < n whose length-k suffix passes; n if none.
    std::size_t chi();
    std::size_t n() const { return n_; }
    ContextTree& tree() { return tree_; }

private:
    SymbolView past_;
    std::size_t n_;
    double threshold_;
    ContextTree tree_;
};

double delta_hat(SymbolView past, int alphabet, std::size_t n, SymbolView word,
                 const MemoryParams& params = {});
bool ntest(SymbolView past, int alphabet, std::size_t n, SymbolView word,
           const MemoryParams& params = {});
bool ptest(SymbolView path, int alphabet, std::size_t n, SymbolView word,
           const MemoryParams& params = {});
std::size_t chi_backward(SymbolView past, int alphabet, std::size_t n,
                         const MemoryParams& params = {});

struct MemoryVerdict {
    std::size_t n = 0;
    bool in_n = false;
    std::uint64_t theta = 0;
    /// Index of the shortest passing suffix of X_0^n.
    std::uint64_t kappa = 0;
    /// Length of that suffix.
    std::size_t rho = 0;
    /// Successor frequencies after the rho-suffix; empty unless in_n and the
    /// suffix occurred before n.
    std::vector<double> qhat;
};

/// Density-(1 - epsilon) forward scheme evaluated at one n.
MemoryVerdict forward_scheme(SymbolView path, int alphabet, std::size_t n,
                             const MemoryParams& params = {});

/// Same verdicts for n = 1, 2, ... over one growing context tree.
class ForwardMemoryScanner {
public:
    ForwardMemoryScanner(SymbolView path, int alphabet, const MemoryParams& params = {});
    /// Verdict for the next n; throws InputError past the end of the path.
    MemoryVerdict step();
    std::size_t next_n() const { return next_; }

private:
    SymbolView path_;
    MemoryParams params_;
    WordList words_;
    ContextTree tree_;
    std::size_t next_ = 1;
};

/// Successor frequencies of the last rho symbols of X_0^n over occurrences
/// ending before n; nullopt when there are none.
std::optional<std::vector<double>> qhat_row(SymbolView path, int alphabet, std::size_t n,
                                            std::size_t rho);
std::optional<double> qhat(SymbolView path, int alphabet, std::size_t n, std::size_t rho,
                           Symbol symbol);

/// Order estimate from X_0^n: smallest k such that every length-k word with a
/// frequent one-symbol continuation passes the memory-word threshold.
std::size_t ordest(SymbolView path, int alphabet, std::size_t n, const MemoryParams& params = {});

struct MarkovVerdict {
    std::size_t n = 0;
    std::size_t order = 0;
    bool in_n = false;
    std::vector<double> qhat;  // empty when the denominator is zero
};

MarkovVerdict markov_qhat(SymbolView path, int alphabet, std::size_t n,
                          const MemoryParams& params = {});

struct FmTrace {
    /// zetas[j] = zeta_j, zetas[0] = 0.
    std::vector<std::size_t> zetas;
    /// Reconstructed past: tilde[i] = X~_{-i} while determined by `zetas`.
    std::vector<Symbol> tilde;
    /// chi[t] for every t examined, chi[0] = 0.
    std::vector<std::size_t> chi;
    /// lambdas[n] = lambda_n, lambdas[0] = 0.
    std::vector<std::size_t> lambdas;
    /// kappas[n] = chi at lambda_n, kappas[0] = 0.
    std::vector<std::size_t> kappas;
    /// estimates[n-1] = f_n.
    std::vector<double> estimates;
    bool truncated = false;
};

/// Stopping-time estimator of E[f(X_1) | X_{-inf}^0] for finitarily
/// Markovian processes.  `f` holds one value per symbol.
FmTrace fm_scheme(SymbolView path, int alphabet, const std::vector<double>& f,
                  const MemoryParams& params = {});

/// J(i) = min{j >= 1 : l_{j+1} > i}.
std::size_t block_index(std::size_t i, const LSchedule& l);

}  // namespace ergo
