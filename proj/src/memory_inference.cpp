#include "ergo/memory_inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ergo/pattern_index.hpp"

namespace ergo {

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > kSat / b ? kSat : a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::size_t exp) {
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < exp && out != kSat; ++i) out = sat_mul(out, base);
    return out;
}

// Number of words shorter than m.
std::uint64_t length_offset(std::uint64_t a, std::size_t m) {
    std::uint64_t offset = 0;
    for (std::size_t j = 0; j < m && offset != kSat; ++j) offset = sat_add(offset, sat_pow(a, j));
    return offset;
}

void check_alphabet(int alphabet) {
    if (alphabet < 1 || alphabet > kMaxAlphabet) throw InputError("alphabet size out of range");
}

std::size_t last_index(SymbolView past, std::size_t n, const char* who) {
    if (past.empty() || n > past.size() - 1)
        throw InputError(std::string(who) + ": window longer than the data");
    return past.size() - 1;
}

// Successor counts of `word` (oldest symbol first) over the tree's window.
std::vector<std::size_t> successor_counts(const ContextTree& tree, SymbolView word) {
    const auto a = static_cast<std::size_t>(tree.alphabet());
    std::vector<std::size_t> row(a, 0);
    ContextTree::NodeId v = tree.root();
    std::size_t d = 0;
    while (d < word.size()) {
        if (!tree.expanded(v)) break;
        const ContextTree::NodeId c = tree.child(v, word[word.size() - 1 - d]);
        if (c == ContextTree::kNone) return row;
        v = c;
        ++d;
    }
    if (d == word.size()) {
        for (std::size_t x = 0; x < a; ++x) row[x] = tree.count(v, static_cast<Symbol>(x));
        return row;
    }
    const SymbolView path = tree.path();
    const std::size_t m = word.size();
    for (std::size_t u : tree.positions(v)) {
        if (u < tree.lo() + m) continue;
        if (std::equal(word.begin(), word.end(), path.begin() + static_cast<std::ptrdiff_t>(u - m)))
            ++row[path[u]];
    }
    return row;
}

std::optional<std::vector<double>> normalize(const std::vector<std::size_t>& row) {
    std::size_t total = 0;
    for (std::size_t c : row) total += c;
    if (total == 0) return std::nullopt;
    std::vector<double> out(row.size());
    for (std::size_t x = 0; x < row.size(); ++x)
        out[x] = static_cast<double>(row[x]) / static_cast<double>(total);
    return out;
}

// Verdict at n from a tree holding exactly the window [0, n] with the
// threshold for n.
MemoryVerdict evaluate_forward(ContextTree& tree, SymbolView path, std::size_t n,
                               const MemoryParams& params, const WordList& words) {
    const double thr = pass_threshold(n, params.beta);
    auto passes = [&](ContextTree::NodeId v) { return tree.delta(v) <= thr; };
    const auto a = static_cast<std::uint64_t>(tree.alphabet());

    MemoryVerdict out;
    out.n = n;

    ContextTree::NodeId v = tree.root();
    std::size_t d = 0;
    while (!passes(v)) {
        // A failing node has total >= min_count and is therefore expanded.
        v = d <= n ? tree.child(v, path[n - d]) : ContextTree::kNone;
        ++d;
    }
    out.rho = d;
    out.kappa = words.index(path.subspan(n + 1 - d, d));

    std::vector<std::pair<std::uint64_t, std::uint64_t>> covered;
    if (d == 0) {
        covered.emplace_back(0, n + 1);
    } else {
        struct Item {
            ContextTree::NodeId node;
            std::size_t depth;
            std::uint64_t rank;
        };
        std::vector<Item> stack{{tree.root(), 0, 0}};
        while (!stack.empty()) {
            const Item it = stack.back();
            stack.pop_back();
            const std::uint64_t scale = sat_pow(a, it.depth);
            for (int s = 0; s < tree.alphabet(); ++s) {
                const ContextTree::NodeId c = tree.child(it.node, static_cast<Symbol>(s));
                if (c == ContextTree::kNone || tree.total(c) == 0) continue;
                const std::uint64_t rank = sat_add(sat_mul(static_cast<std::uint64_t>(s), scale), it.rank);
                if (passes(c)) {
                    const std::uint64_t offset = length_offset(a, it.depth + 1);
                    covered.emplace_back(sat_add(offset, rank), tree.total(c));
                } else {
                    stack.push_back({c, it.depth + 1, rank});
                }
            }
        }
        // Position n itself joins the union at the first passing suffix.
        covered.emplace_back(out.kappa, 1);
    }
    std::sort(covered.begin(), covered.end());
    const long double target = (1.0L - static_cast<long double>(params.epsilon) / 2.0L) *
                               static_cast<long double>(n + 1);
    out.theta = n;
    long double cum = 0.0L;
    for (const auto& [index, amount] : covered) {
        cum += static_cast<long double>(amount);
        if (cum >= target) {
            out.theta = index < n ? index : n;
            break;
        }
    }
    out.in_n = out.theta < n && out.kappa <= out.theta;
    if (out.in_n) {
        auto row = normalize(successor_counts(tree, path.subspan(n + 1 - out.rho, out.rho)));
        if (row) out.qhat = std::move(*row);
    }
    return out;
}

}  // namespace

std::size_t default_l(std::size_t n) {
    if (n == 0) return 0;
    const auto m = static_cast<std::size_t>(std::floor(10.0L * std::log2(static_cast<long double>(n))));
    return std::min(n, std::max<std::size_t>(1, m));
}

void MemoryParams::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("gamma must lie in (0, 1)");
    if (!(beta > 0.0 && beta < (1.0 - gamma) / 2.0)) throw InputError("beta must lie in (0, (1 - gamma)/2)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
    if (!l_schedule) throw InputError("l_schedule is empty");
}

std::size_t frequency_floor(std::size_t n, double gamma) {
    if (n == 0) return 1;
    return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 1.0 - gamma))) + 1;
}

double pass_threshold(std::size_t n, double beta) {
    if (n == 0) return std::numeric_limits<double>::infinity();
    return std::pow(static_cast<double>(n), -beta);
}

WordList::WordList(int alphabet) : alphabet_(alphabet) { check_alphabet(alphabet); }

std::uint64_t WordList::index(SymbolView word) const {
    const auto a = static_cast<std::uint64_t>(alphabet_);
    const std::uint64_t offset = length_offset(a, word.size());
    std::uint64_t rank = 0;
    for (Symbol s : word) {
        if (s >= alphabet_) throw InputError("WordList::index: symbol outside alphabet");
        rank = sat_add(sat_mul(rank, a), s);
    }
    return sat_add(offset, rank);
}

std::vector<Symbol> WordList::word(std::uint64_t index) const {
    const auto a = static_cast<std::uint64_t>(alphabet_);
    std::size_t m = 0;
    for (;;) {
        const std::uint64_t layer = sat_pow(a, m);
        if (index < layer) break;
        if (layer == kSat) throw InputError("WordList::word: index out of range");
        index -= layer;
        ++m;
    }
    std::vector<Symbol> out(m);
    for (std::size_t i = m; i-- > 0;) {
        out[i] = static_cast<Symbol>(index % a);
        index /= a;
    }
    return out;
}

std::optional<double> empirical_conditional(SymbolView past, std::size_t n, SymbolView word,
                                            Symbol symbol) {
    const std::size_t last = last_index(past, n, "empirical_conditional");
    const std::size_t k = word.size();
    std::size_t hits = 0;
    std::size_t total = 0;
    for (std::size_t u = last - n + k; u <= last; ++u) {
        if (!std::equal(word.begin(), word.end(), past.begin() + static_cast<std::ptrdiff_t>(u - k))) continue;
        ++total;
        if (past[u] == symbol) ++hits;
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(total);
}

namespace {

std::map<Word, std::size_t> count_words(SymbolView path, std::size_t first_end, std::size_t last_end,
                                        std::size_t len) {
    std::map<Word, std::size_t> counts;
    if (len == 0 || last_end + 1 < len) return counts;
    for (std::size_t e = std::max(first_end, len - 1); e <= last_end; ++e)
        ++counts[Word(path.begin() + static_cast<std::ptrdiff_t>(e + 1 - len),
                      path.begin() + static_cast<std::ptrdiff_t>(e + 1))];
    return counts;
}

}  // namespace

std::vector<Word> frequent_words(SymbolView past, std::size_t n, std::size_t k, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("frequent_words: gamma must lie in (0, 1)");
    const std::size_t last = last_index(past, n, "frequent_words");
    const std::size_t lo = last - n;
    std::vector<Word> out;
    if (k > n) return out;
    const std::size_t need = frequency_floor(n, gamma);
    for (const auto& [word, count] : count_words(past, lo + k, last, k + 1))
        if (count >= need) out.push_back(word);
    return out;
}

std::vector<Word> frequent_words_split(SymbolView path, std::size_t t, std::size_t k, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("frequent_words_split: gamma must lie in (0, 1)");
    if (t == 0 || t >= path.size()) throw InputError("frequent_words_split: t out of range");
    const std::size_t h = (t + 1) / 2;
    const std::size_t need = frequency_floor(t, gamma);
    std::vector<Word> out;
    const auto first = count_words(path, k, h - 1, k + 1);
    for (const auto& [word, count] : count_words(path, h + k, t, k + 1))
        if (count >= need && first.count(word)) out.push_back(word);
    return out;
}

BackwardMemoryView::BackwardMemoryView(SymbolView past, int alphabet, std::size_t n,
                                       const MemoryParams& params)
    : past_(past),
      n_(n),
      threshold_(pass_threshold(n, params.beta)),
      tree_(past, alphabet, last_index(past, n, "BackwardMemoryView") - n, frequency_floor(n, params.gamma)) {
    params.validate();
    for (std::size_t i = 0; i <= n; ++i) tree_.push_back();
}

double BackwardMemoryView::delta_hat(SymbolView word) { return tree_.delta(tree_.find(word)); }

bool BackwardMemoryView::ntest(SymbolView word) { return delta_hat(word) <= threshold_; }

std::size_t BackwardMemoryView::chi() {
    const std::size_t last = past_.size() - 1;
    ContextTree::NodeId v = tree_.root();
    for (std::size_t k = 0; k < n_; ++k) {
        if (tree_.delta(v) <= threshold_) return k;
        v = (v != ContextTree::kNone && tree_.expanded(v)) ? tree_.child(v, past_[last - k]) : ContextTree::kNone;
    }
    return n_;
}

double delta_hat(SymbolView past, int alphabet, std::size_t n, SymbolView word, const MemoryParams& params) {
    return BackwardMemoryView(past, alphabet, n, params).delta_hat(word);
}

bool ntest(SymbolView past, int alphabet, std::size_t n, SymbolView word, const MemoryParams& params) {
    return BackwardMemoryView(past, alphabet, n, params).ntest(word);
}

bool ptest(SymbolView path, int alphabet, std::size_t n, SymbolView word, const MemoryParams& params) {
    if (n >= path.size()) throw InputError("ptest: n beyond path");
    return ntest(path.first(n + 1), alphabet, n, word, params);
}

std::size_t chi_backward(SymbolView past, int alphabet, std::size_t n, const MemoryParams& params) {
    if (n == 0) return 0;
    return BackwardMemoryView(past, alphabet, n, params).chi();
}

MemoryVerdict forward_scheme(SymbolView path, int alphabet, std::size_t n, const MemoryParams& params) {
    params.validate();
    if (n == 0 || n >= path.size()) throw InputError("forward_scheme: n must be in 1..path length - 1");
    ContextTree tree(path, alphabet, 0, frequency_floor(n, params.gamma));
    for (std::size_t i = 0; i <= n; ++i) tree.push_back();
    return evaluate_forward(tree, path, n, params, WordList(alphabet));
}

ForwardMemoryScanner::ForwardMemoryScanner(SymbolView path, int alphabet, const MemoryParams& params)
    : path_(path), params_(params), words_(alphabet), tree_(path, alphabet, 0, frequency_floor(1, params.gamma)) {
    params_.validate();
}

MemoryVerdict ForwardMemoryScanner::step() {
    const std::size_t n = next_;
    if (n >= path_.size()) throw InputError("ForwardMemoryScanner: path exhausted");
    tree_.raise_min_count(frequency_floor(n, params_.gamma));
    while (tree_.end() <= n) tree_.push_back();
    ++next_;
    return evaluate_forward(tree_, path_, n, params_, words_);
}

std::optional<std::vector<double>> qhat_row(SymbolView path, int alphabet, std::size_t n, std::size_t rho) {
    check_alphabet(alphabet);
    if (n >= path.size()) throw InputError("qhat: n beyond path");
    if (rho > n + 1) throw InputError("qhat: rho longer than the data");
    std::vector<std::size_t> row(static_cast<std::size_t>(alphabet), 0);
    const SymbolView suffix = path.subspan(n + 1 - rho, rho);
    for (std::size_t u = rho; u <= n; ++u)
        if (std::equal(suffix.begin(), suffix.end(), path.begin() + static_cast<std::ptrdiff_t>(u - rho))) {
            if (path[u] >= alphabet) throw InputError("qhat: symbol outside alphabet");
            ++row[path[u]];
        }
    return normalize(row);
}

std::optional<double> qhat(SymbolView path, int alphabet, std::size_t n, std::size_t rho, Symbol symbol) {
    auto row = qhat_row(path, alphabet, n, rho);
    if (!row) return std::nullopt;
    if (symbol >= alphabet) throw InputError("qhat: symbol outside alphabet");
    return (*row)[symbol];
}

std::size_t ordest(SymbolView path, int alphabet, std::size_t n, const MemoryParams& params) {
    params.validate();
    if (n == 0 || n >= path.size()) throw InputError("ordest: n must be in 1..path length - 1");
    const std::size_t need = frequency_floor(n, params.gamma);
    const double thr = pass_threshold(n, params.beta);
    ContextTree tree(path, alphabet, 0, need);
    for (std::size_t i = 0; i <= n; ++i) tree.push_back();

    std::vector<ContextTree::NodeId> level{tree.root()};
    for (std::size_t k = 0; k <= n; ++k) {
        bool all_pass = true;
        std::vector<ContextTree::NodeId> next;
        for (ContextTree::NodeId v : level) {
            bool frequent = false;
            for (int x = 0; x < alphabet; ++x) frequent = frequent || tree.count(v, static_cast<Symbol>(x)) >= need;
            if (frequent && tree.delta(v) > thr) all_pass = false;
            if (!tree.expanded(v)) continue;
            for (int s = 0; s < alphabet; ++s) {
                const ContextTree::NodeId c = tree.child(v, static_cast<Symbol>(s));
                if (c != ContextTree::kNone && tree.total(c) >= need) next.push_back(c);
            }
        }
        if (all_pass || next.empty()) return k;
        level = std::move(next);
    }
    return n;
}

MarkovVerdict markov_qhat(SymbolView path, int alphabet, std::size_t n, const MemoryParams& params) {
    MarkovVerdict out;
    out.n = n;
    out.order = ordest(path, alphabet, n, params);
    const std::size_t k = out.order;
    const SymbolView suffix = path.subspan(n + 1 - k, k);
    std::size_t appearances = 0;
    for (std::size_t e = k == 0 ? 0 : k - 1; e <= n; ++e)
        if (std::equal(suffix.begin(), suffix.end(), path.begin() + static_cast<std::ptrdiff_t>(e + 1 - k)))
            ++appearances;
    out.in_n = static_cast<double>(appearances) >= std::pow(static_cast<double>(n), 1.0 - params.gamma);
    if (auto row = qhat_row(path, alphabet, n, k)) out.qhat = std::move(*row);
    return out;
}

std::size_t block_index(std::size_t i, const LSchedule& l) {
    std::size_t j = 1;
    while (l(j + 1) <= i) ++j;
    return j;
}

FmTrace fm_scheme(SymbolView path, int alphabet, const std::vector<double>& f, const MemoryParams& params) {
    params.validate();
    check_alphabet(alphabet);
    if (f.size() != static_cast<std::size_t>(alphabet)) throw InputError("fm_scheme: f needs one value per symbol");
    if (path.size() < 2) throw InputError("fm_scheme: path must have at least 2 symbols");
    validate_symbols(path, Alphabet{alphabet});
    const LSchedule& l = params.l_schedule;
    const std::size_t last = path.size() - 1;

    FmTrace trace;
    trace.zetas.push_back(0);
    for (std::size_t j = 1;; ++j) {
        const std::size_t len = l(j);
        if (len < 1 || len > j || (j > 1 && len < l(j - 1)))
            throw InputError("fm_scheme: l_schedule must be nondecreasing with 1 <= l_j <= j");
        const std::size_t prev = trace.zetas.back();
        const auto eta = next_occurrence(path, prev - (len - 1), len);
        if (!eta) break;
        trace.zetas.push_back(prev + *eta);
    }
    const std::size_t known = trace.zetas.size();

    // zeta_of[i] = zeta_{J(i)} for every i with J(i) among the known indices.
    std::vector<std::size_t> zeta_of;
    for (std::size_t i = 0, j = 1; j < known; ++i) {
        while (l(j + 1) <= i) {
            ++j;
            if (j >= known) break;
        }
        if (j >= known) break;
        zeta_of.push_back(trace.zetas[j]);
        trace.tilde.push_back(path[trace.zetas[j] - i]);
    }

    ContextTree window(path, alphabet, 0, frequency_floor(1, params.gamma));
    ContextTree history(path, alphabet, 0, 16);
    const auto a = static_cast<std::size_t>(alphabet);
    std::vector<std::uint8_t> seen;  // per (window node, symbol): occurred in the first half
    window.set_filter([&](const ContextTree& tree, ContextTree::NodeId d, Symbol x) {
        const std::size_t key = static_cast<std::size_t>(d) * a + x;
        if (seen.size() <= key) seen.resize(tree.node_count() * a, 0);
        if (seen[key]) return true;
        const std::size_t m = tree.depth(d);
        const std::size_t w = tree.witness(d);
        ContextTree::NodeId v = history.root();
        std::size_t e = 0;
        while (e < m && history.expanded(v)) {
            v = history.child(v, path[w - 1 - e]);
            if (v == ContextTree::kNone) return false;
            ++e;
        }
        bool found = false;
        if (e == m) {
            found = history.count(v, x) > 0;
        } else {
            for (std::size_t u : history.positions(v)) {
                if (u < m || path[u] != x) continue;
                if (std::equal(path.begin() + static_cast<std::ptrdiff_t>(u - m),
                               path.begin() + static_cast<std::ptrdiff_t>(u),
                               path.begin() + static_cast<std::ptrdiff_t>(w - m))) {
                    found = true;
                    break;
                }
            }
        }
        if (found) seen[key] = 1;
        return found;
    });

    trace.chi.push_back(0);
    trace.lambdas.push_back(0);
    trace.kappas.push_back(0);
    std::size_t block = 0;  // largest j with zeta_j <= lambda_{n-1}
    for (std::size_t t = 1; t <= last; ++t) {
        const std::size_t h = (t + 1) / 2;
        while (window.end() <= t) window.push_back();
        while (window.lo() < h) window.pop_front();
        while (history.end() < h) {
            history.push_back();
            window.invalidate_contexts_of(history.end() - 1);
        }
        window.raise_min_count(frequency_floor(t, params.gamma));
        const double thr = pass_threshold(t, params.beta);

        std::size_t chi = t;
        ContextTree::NodeId v = window.root();
        for (std::size_t k = 0; k < t; ++k) {
            const bool gate = k < zeta_of.size() && zeta_of[k] <= h - 1;
            if (!gate || window.delta(v) <= thr) {
                chi = k;
                break;
            }
            v = (v != ContextTree::kNone && window.expanded(v)) ? window.child(v, trace.tilde[k])
                                                                 : ContextTree::kNone;
        }
        trace.chi.push_back(chi);

        const std::size_t zj = trace.zetas[block];
        if (chi <= zj + 1 && chi <= t + 1 && blocks_equal(path, t + 1 - chi, zj + 1 - chi, chi)) {
            trace.lambdas.push_back(t);
            trace.kappas.push_back(chi);
            while (block + 1 < known && trace.zetas[block + 1] <= t) ++block;
        }
    }
    trace.truncated = true;

    double sum = 0.0;
    for (std::size_t n = 1; n < trace.lambdas.size(); ++n) {
        sum += f[path[trace.lambdas[n - 1] + 1]];
        trace.estimates.push_back(sum / static_cast<double>(n));
    }
    return trace;
}

}  // namespace ergo
