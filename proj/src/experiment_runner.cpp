#include "ergo/experiment_runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "ergo/backward_predictor.hpp"
#include "ergo/forward_predictor.hpp"
#include "ergo/memory_inference.hpp"
#include "ergo/stoptime.hpp"

namespace ergo {

namespace {

using nlohmann::json;
using Row = std::vector<std::string>;

std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(double v) { return format_double(v); }
std::string cell(bool v) { return v ? "1" : "0"; }
std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
std::string cell(const MemoryLength& v) { return v ? std::to_string(*v) : std::string(); }

std::optional<double> abs_diff(std::optional<double> a, std::optional<double> b) {
    if (!a || !b) return std::nullopt;
    return std::abs(*a - *b);
}

MemoryParams memory_params(const EstimatorParams& p) {
    MemoryParams m;
    m.gamma = p.gamma;
    m.beta = p.beta;
    m.epsilon = p.epsilon;
    return m;
}

bool emit(std::size_t index, std::size_t stride, std::size_t last) {
    return (index + 1) % stride == 0 || index == last;
}

int path_alphabet(const ProcessModel* model, SymbolView path) {
    if (model) return model->alphabet().size;
    int top = 1;
    for (Symbol s : path) top = std::max(top, static_cast<int>(s));
    return std::max(2, top + 1);
}

std::vector<Row> backward_rows(const EstimatorParams& p, const ProcessModel* model, SymbolView path,
                               const Row& prefix) {
    std::vector<Row> rows;
    const BackwardState state = backward_state(path);
    std::optional<double> truth;
    if (model) truth = true_conditional(*model, path, p.target);
    std::vector<std::size_t> times;
    for (std::size_t t = p.stride; t <= path.size(); t += p.stride) times.push_back(t);
    if (times.empty() || times.back() != path.size()) times.push_back(path.size());
    for (std::size_t t : times) {
        // kappa_t = max{k : lambda_k <= t}, with lambdas[0] = 1.
        const auto it = std::upper_bound(state.lambdas.begin(), state.lambdas.end(), t);
        const std::size_t kappa = it == state.lambdas.begin() ? 0 : static_cast<std::size_t>(it - state.lambdas.begin()) - 1;
        const double est = kappa == 0 ? 0.0 : p_k(state, kappa, p.target);
        Row r = prefix;
        r.insert(r.end(), {cell(t), cell(kappa), cell(est), cell(truth), cell(abs_diff(est, truth))});
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<Row> forward_rows(const EstimatorParams& p, const ProcessModel* model, SymbolView path,
                              const Row& prefix) {
    std::vector<Row> rows;
    const Alphabet alphabet{std::max(2, path_alphabet(model, path))};
    ForwardPredictor predictor(alphabet, default_schedule(alphabet));
    std::optional<ConditionalOracle> oracle;
    if (model) oracle.emplace(*model);
    double error_sum = 0.0;
    const bool cesaro = p.scoring == "cesaro";
    for (std::size_t n = 0; n < path.size(); ++n) {
        const ForwardEstimate est = predictor.push(path[n]);
        std::optional<double> truth, err, score;
        if (oracle) {
            oracle->observe(path[n]);
            truth = oracle->predict(p.target);
            err = std::abs(est.g(p.target) - *truth);
            error_sum += *err;
            score = cesaro ? error_sum / static_cast<double>(n + 1) : *err;
        }
        if (!emit(n, p.stride, path.size() - 1)) continue;
        Row r = prefix;
        r.insert(r.end(), {cell(n), cell(est.kappa), cell(est.lambda), cell(est.g(p.target)), cell(truth),
                           cell(score)});
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<Row> stoptime_rows(const EstimatorParams& p, const ProcessModel* model, SymbolView path,
                               const Row& prefix) {
    std::vector<Row> rows;
    StopTimeTrace trace = p.estimator == "morvai2000" ? morvai2000(path, p.target) : mw03(path, p.target);
    if (model) attach_truths(trace, *model, path, p.target);
    std::optional<double> entropy;
    if (model && (model->is_iid() || model->is_markov())) entropy = entropy_rate(*model);
    for (std::size_t k = 1; k <= trace.size(); ++k) {
        std::optional<double> truth, bound;
        std::string within;
        if (!trace.truths.empty()) truth = trace.truths[k - 1];
        if (entropy) {
            bound = std::exp2(static_cast<double>(k) * (*entropy + p.growth_epsilon));
            within = cell(static_cast<double>(trace.times[k - 1]) < *bound);
        }
        // P_1 is an empty average; it is reported from k = 2 on.
        std::optional<double> estimate = trace.estimates[k - 1];
        if (p.estimator == "morvai2000" && k == 1) estimate.reset();
        Row r = prefix;
        r.insert(r.end(), {cell(k), cell(trace.times[k - 1]), cell(trace.increments[k - 1]), cell(estimate),
                           cell(truth), cell(abs_diff(estimate, truth)), cell(bound), within});
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<Row> memory_backward_rows(const EstimatorParams& p, const ProcessModel* model, SymbolView path,
                                      const Row& prefix) {
    const std::size_t n = path.size() - 1;
    const std::size_t chi = chi_backward(path, path_alphabet(model, path), n, memory_params(p));
    MemoryLength truth;
    std::string err;
    if (model) {
        truth = memory_length_oracle(*model, path);
        if (truth) err = cell(static_cast<double>(chi > *truth ? chi - *truth : *truth - chi));
    }
    Row r = prefix;
    r.insert(r.end(), {cell(n), cell(chi), cell(truth), err});
    return {r};
}

std::vector<Row> memory_forward_rows(const EstimatorParams& p, const ProcessModel* model, SymbolView path,
                                     const Row& prefix) {
    std::vector<Row> rows;
    ForwardMemoryScanner scanner(path, path_alphabet(model, path), memory_params(p));
    std::optional<ConditionalOracle> oracle;
    if (model) {
        oracle.emplace(*model);
        oracle->observe(path[0]);
    }
    for (std::size_t n = 1; n < path.size(); ++n) {
        const MemoryVerdict v = scanner.step();
        std::optional<double> truth, estimate;
        if (oracle) {
            oracle->observe(path[n]);
            truth = oracle->predict(p.target);
        }
        if (!emit(n, p.stride, path.size() - 1)) continue;
        if (!v.qhat.empty()) estimate = v.qhat[p.target];
        MemoryLength memory;
        if (model) memory = memory_length_oracle(*model, path.first(n + 1));
        Row r = prefix;
        r.insert(r.end(), {cell(n), cell(v.in_n), cell(v.theta), cell(v.kappa), cell(v.rho), cell(memory),
                           cell(estimate), cell(truth), v.in_n ? cell(abs_diff(estimate, truth)) : std::string()});
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<Row> markov_qhat_rows(const EstimatorParams& p, const ProcessModel* model, SymbolView path,
                                  const Row& prefix) {
    std::vector<Row> rows;
    const int alphabet = path_alphabet(model, path);
    std::optional<ConditionalOracle> oracle;
    if (model) oracle.emplace(*model);
    for (std::size_t n = 0; n < path.size(); ++n) {
        if (oracle) oracle->observe(path[n]);
        if (n == 0 || !emit(n, p.stride, path.size() - 1)) continue;
        const MarkovVerdict v = markov_qhat(path, alphabet, n, memory_params(p));
        std::optional<double> estimate, truth, sup;
        if (!v.qhat.empty()) estimate = v.qhat[p.target];
        if (oracle) {
            const ProbabilityRow row = oracle->predict();
            truth = row[p.target];
            if (!v.qhat.empty()) {
                double worst = 0.0;
                for (std::size_t x = 0; x < row.size(); ++x) worst = std::max(worst, std::abs(v.qhat[x] - row[x]));
                sup = worst;
            }
        }
        Row r = prefix;
        r.insert(r.end(), {cell(n), cell(v.order), cell(v.in_n), cell(estimate), cell(truth), cell(sup)});
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<Row> fm_rows(const EstimatorParams& p, const ProcessModel* model, SymbolView path, const Row& prefix) {
    std::vector<Row> rows;
    const int alphabet = path_alphabet(model, path);
    std::vector<double> f(static_cast<std::size_t>(alphabet), 0.0);
    f[p.target] = 1.0;
    const FmTrace trace = fm_scheme(path, alphabet, f, memory_params(p));
    std::optional<double> truth;
    if (model) {
        // Conditional law given the reconstructed past, oldest symbol first.
        std::vector<Symbol> past(trace.tilde.rbegin(), trace.tilde.rend());
        truth = true_conditional(*model, past, p.target);
    }
    for (std::size_t j = 1; j <= trace.estimates.size(); ++j) {
        if (!emit(j, p.stride, trace.estimates.size())) continue;
        Row r = prefix;
        r.insert(r.end(), {cell(j), cell(trace.lambdas[j]), cell(trace.kappas[j]), cell(trace.estimates[j - 1]),
                           cell(truth), cell(abs_diff(trace.estimates[j - 1], truth))});
        rows.push_back(std::move(r));
    }
    return rows;
}

double number(const json& params, const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    if (!params.at(key).is_number()) throw ConfigError(std::string("params: \"") + key + "\" must be a number");
    return params.at(key).get<double>();
}

std::size_t count(const json& obj, const char* key, std::size_t fallback, const char* where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError(std::string(where) + ": \"" + key + "\" must be a nonnegative integer");
    return v.get<std::size_t>();
}

}  // namespace

const std::vector<std::string>& estimator_ids() {
    static const std::vector<std::string> ids{"backward",       "forward",        "morvai2000",  "mw03",
                                              "memory-backward", "memory-forward", "markov-qhat", "fm"};
    return ids;
}

std::string default_scoring(const std::string& estimator) {
    if (estimator == "backward" || estimator == "forward") return "pointwise";
    if (estimator == "morvai2000" || estimator == "mw03" || estimator == "fm") return "stoptime";
    return "memory";
}

EstimatorParams parse_estimator_params(const std::string& estimator, const std::string& scoring,
                                       const json& params, Alphabet alphabet) {
    const auto& ids = estimator_ids();
    if (std::find(ids.begin(), ids.end(), estimator) == ids.end())
        throw ConfigError("unknown estimator \"" + estimator + "\"");
    if (!params.is_null() && !params.is_object()) throw ConfigError("params must be a JSON object");
    static const std::set<std::string> known{"target", "stride", "gamma", "beta", "epsilon", "growth_epsilon"};
    if (params.is_object())
        for (const auto& [key, value] : params.items())
            if (!known.count(key)) throw ConfigError("params: unknown key \"" + key + "\"");
    const json empty = json::object();
    const json& q = params.is_object() ? params : empty;

    EstimatorParams p;
    p.estimator = estimator;
    p.scoring = scoring.empty() ? default_scoring(estimator) : scoring;
    const bool cesaro_ok = estimator == "forward";
    if (p.scoring != default_scoring(estimator) && !(cesaro_ok && p.scoring == "cesaro"))
        throw ConfigError("scoring \"" + p.scoring + "\" does not apply to estimator \"" + estimator + "\"");
    const std::size_t target = count(q, "target", 1, "params");
    if (target >= static_cast<std::size_t>(alphabet.size)) throw ConfigError("params: \"target\" outside the alphabet");
    p.target = static_cast<Symbol>(target);
    p.stride = count(q, "stride", 1, "params");
    if (p.stride == 0) throw ConfigError("params: \"stride\" must be positive");
    p.gamma = number(q, "gamma", p.gamma);
    p.beta = number(q, "beta", p.beta);
    p.epsilon = number(q, "epsilon", p.epsilon);
    p.growth_epsilon = number(q, "growth_epsilon", p.growth_epsilon);
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw ConfigError("params: 0 < gamma < 1 violated");
    if (!(p.beta > 0.0 && p.beta < (1.0 - p.gamma) / 2.0))
        throw ConfigError("params: beta < (1 - gamma)/2 violated (beta = " + format_double(p.beta) +
                          ", gamma = " + format_double(p.gamma) + ")");
    if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw ConfigError("params: 0 < epsilon < 1 violated");
    if (!(p.growth_epsilon > 0.0)) throw ConfigError("params: growth_epsilon > 0 violated");
    return p;
}

std::vector<std::string> trace_columns(const EstimatorParams& p) {
    std::vector<std::string> c{"replicate", "seed"};
    const std::string& e = p.estimator;
    std::vector<std::string> rest;
    if (e == "backward") rest = {"t", "kappa_t", "p_hat", "oracle", "abs_err"};
    else if (e == "forward") rest = {"n", "kappa", "lambda", "g", "oracle", "abs_err"};
    else if (e == "morvai2000" || e == "mw03")
        rest = {"k", "time", "increment", "estimate", "oracle", "abs_err", "growth_bound", "within_bound"};
    else if (e == "memory-backward") rest = {"n", "chi", "memory_true", "abs_err"};
    else if (e == "memory-forward")
        rest = {"n", "in_n", "theta", "kappa", "rho", "memory_true", "qhat", "oracle", "abs_err"};
    else if (e == "markov-qhat") rest = {"n", "order", "in_n", "qhat", "oracle", "abs_err"};
    else rest = {"j", "lambda", "kappa", "estimate", "oracle", "abs_err"};
    c.insert(c.end(), rest.begin(), rest.end());
    return c;
}

std::vector<std::vector<std::string>> replicate_rows(const EstimatorParams& p, const ProcessModel* model,
                                                     SymbolView path, std::size_t replicate, std::uint64_t seed) {
    if (path.empty()) throw InputError("empty path");
    const Row prefix{cell(replicate), cell(seed)};
    const std::string& e = p.estimator;
    if (e == "backward") return backward_rows(p, model, path, prefix);
    if (e == "forward") return forward_rows(p, model, path, prefix);
    if (e == "morvai2000" || e == "mw03") return stoptime_rows(p, model, path, prefix);
    if (e == "memory-backward") return memory_backward_rows(p, model, path, prefix);
    if (e == "memory-forward") return memory_forward_rows(p, model, path, prefix);
    if (e == "markov-qhat") return markov_qhat_rows(p, model, path, prefix);
    return fm_rows(p, model, path, prefix);
}

ExperimentConfig parse_experiment_config(const json& raw, const std::filesystem::path& base_dir) {
    if (!raw.is_object()) throw ConfigError("experiment config must be a JSON object");
    static const std::set<std::string> known{"model", "model_file", "estimator", "params", "scoring",
                                             "length", "seeds", "output", "threads"};
    for (const auto& [key, value] : raw.items())
        if (!known.count(key)) throw ConfigError("config: unknown key \"" + key + "\"");
    ExperimentConfig c;
    c.raw = raw;
    if (raw.contains("model") == raw.contains("model_file"))
        throw ConfigError("config: exactly one of \"model\" and \"model_file\" is required");
    if (raw.contains("model")) {
        c.model = model_from_json(raw.at("model"));
    } else {
        if (!raw.at("model_file").is_string()) throw ConfigError("config: \"model_file\" must be a string");
        std::filesystem::path file = raw.at("model_file").get<std::string>();
        if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
        c.model = model_from_json(read_json_file(file));
    }
    if (!raw.contains("estimator") || !raw.at("estimator").is_string())
        throw ConfigError("config: \"estimator\" must be a string");
    std::string scoring;
    if (raw.contains("scoring")) {
        if (!raw.at("scoring").is_string()) throw ConfigError("config: \"scoring\" must be a string");
        scoring = raw.at("scoring").get<std::string>();
        static const std::set<std::string> modes{"pointwise", "cesaro", "stoptime", "memory"};
        if (!modes.count(scoring)) throw ConfigError("config: unknown scoring \"" + scoring + "\"");
    }
    c.params = parse_estimator_params(raw.at("estimator").get<std::string>(), scoring,
                                      raw.contains("params") ? raw.at("params") : json(), c.model.alphabet());
    c.length = count(raw, "length", 0, "config");
    const std::size_t min_length = c.params.estimator == "backward" ? 1 : 2;
    if (c.length < min_length) throw ConfigError("config: \"length\" must be at least " + std::to_string(min_length));
    if (!raw.contains("seeds") || !raw.at("seeds").is_object())
        throw ConfigError("config: \"seeds\" must be an object {\"first\", \"count\"}");
    c.seed_first = count(raw.at("seeds"), "first", 0, "seeds");
    c.replicates = count(raw.at("seeds"), "count", 0, "seeds");
    if (c.replicates == 0) throw ConfigError("config: seed range is empty");
    if (raw.contains("output")) {
        if (!raw.at("output").is_string()) throw ConfigError("config: \"output\" must be a string");
        c.output = raw.at("output").get<std::string>();
    }
    c.threads = static_cast<unsigned>(count(raw, "threads", 0, "config"));
    return c;
}

TraceFile run_experiment(const ExperimentConfig& config) {
    std::vector<std::vector<Row>> blocks(config.replicates);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t r = next++; r < config.replicates; r = next++) {
            try {
                const SamplePath path = sample_path(config.model, config.length, config.seed(r));
                blocks[r] = replicate_rows(config.params, &config.model, path.view(), r, config.seed(r));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.replicates));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    TraceFile trace;
    trace.table.columns = trace_columns(config.params);
    for (auto& block : blocks)
        for (auto& row : block) trace.table.rows.push_back(std::move(row));
    json seeds = json::array();
    for (std::size_t r = 0; r < config.replicates; ++r) seeds.push_back(config.seed(r));
    trace.metadata = {{"artifact_version", kArtifactVersion},
                      {"config", config.raw},
                      {"model", model_to_json(config.model)},
                      {"estimator", config.params.estimator},
                      {"scoring", config.params.scoring},
                      {"columns", trace.table.columns},
                      {"rows", trace.table.rows.size()},
                      {"seeds", seeds}};
    return trace;
}

void write_trace(const TraceFile& trace, const std::filesystem::path& csv) {
    write_text(csv, to_csv(trace.table));
    std::filesystem::path meta = csv;
    meta += ".meta.json";
    write_text(meta, trace.metadata.dump(2) + "\n");
}

double order_statistic(std::vector<double>& values, double q) {
    if (values.empty()) throw InputError("order_statistic: no values");
    if (!(q >= 0.0 && q <= 1.0)) throw InputError("order_statistic: quantile outside [0, 1]");
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    return values[rank == 0 ? 0 : rank - 1];
}

CsvTable summarize(const CsvTable& trace, const std::vector<double>& quantiles) {
    if (trace.rows.empty()) throw InputError("summarize: trace has no rows");
    if (trace.columns.size() < 3 || trace.columns[0] != "replicate")
        throw InputError("summarize: not a trace (expected replicate, seed, index, ...)");
    auto number_of = [](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw InputError("summarize: non-numeric cell \"" + s + "\"");
        }
        if (used != s.size()) throw InputError("summarize: non-numeric cell \"" + s + "\"");
        return v;
    };
    auto index_of = [](const std::string& s) { return std::stoull(s); };

    CsvTable out;
    out.columns = {"section", "key", "statistic", "value"};

    if (trace.has_column("abs_err")) {
        const std::size_t col = trace.column("abs_err");
        std::map<unsigned long long, std::vector<double>> by_index;
        for (const auto& row : trace.rows)
            if (!row[col].empty()) by_index[index_of(row[2])].push_back(number_of(row[col]));
        for (auto& [index, values] : by_index) {
            out.rows.push_back({"error", std::to_string(index), "count", std::to_string(values.size())});
            for (double q : quantiles)
                out.rows.push_back({"error", std::to_string(index), "q" + format_double(q),
                                    format_double(order_statistic(values, q))});
        }
    }
    if (trace.has_column("in_n")) {
        const std::size_t col = trace.column("in_n");
        std::map<unsigned long long, std::pair<std::size_t, std::size_t>> per_replicate;
        for (const auto& row : trace.rows) {
            auto& [hits, total] = per_replicate[index_of(row[0])];
            hits += row[col] == "1";
            ++total;
        }
        for (const auto& [rep, counts] : per_replicate)
            out.rows.push_back({"density", std::to_string(rep), "in_n",
                                format_double(static_cast<double>(counts.first) / static_cast<double>(counts.second))});
    }
    if (trace.has_column("within_bound")) {
        const std::size_t col = trace.column("within_bound");
        std::map<unsigned long long, std::pair<std::size_t, std::size_t>> per_k;
        for (const auto& row : trace.rows) {
            if (row[col].empty()) continue;
            auto& [hits, total] = per_k[index_of(row[2])];
            hits += row[col] == "1";
            ++total;
        }
        for (const auto& [k, counts] : per_k)
            out.rows.push_back({"growth", std::to_string(k), "pass_rate",
                                format_double(static_cast<double>(counts.first) / static_cast<double>(counts.second))});
    }
    return out;
}

}  // namespace ergo
