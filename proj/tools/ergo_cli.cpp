// ergo: command-line front end.
//
// Exit codes: 0 ok, 2 config error, 3 data error.  ERGO_OUTPUT_DIR sets the
// directory for relative output paths (overridden by --output-dir).

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ergo/backward_predictor.hpp"
#include "ergo/experiment_runner.hpp"
#include "ergo/io.hpp"
#include "ergo/memory_inference.hpp"

namespace {

using namespace ergo;
namespace fs = std::filesystem;

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;

struct Globals {
    std::string output_dir;
};

// Where a command's input path comes from: a path file or a fresh sample.
struct Source {
    std::string model_file;
    std::string path_file;
    std::size_t length = 0;
    std::uint64_t seed = 1;
    std::string output;
};

void add_source(CLI::App* cmd, Source& src, bool need_length = true) {
    cmd->add_option("--model", src.model_file, "Model config (JSON)")->required();
    auto* path = cmd->add_option("--path", src.path_file, "Path file to read instead of sampling");
    if (need_length) cmd->add_option("--length", src.length, "Sampled path length")->excludes(path);
    cmd->add_option("--seed", src.seed, "Sampling seed")->excludes(path);
    cmd->add_option("-o,--output", src.output, "Output file (stdout when omitted)");
}

fs::path resolve(const Globals& g, const std::string& file) {
    fs::path p = file;
    if (p.is_absolute() || g.output_dir.empty()) return p;
    return fs::path(g.output_dir) / p;
}

void emit(const Globals& g, const std::string& output, const std::string& text) {
    if (output.empty()) {
        std::cout << text << std::flush;
        return;
    }
    write_text(resolve(g, output), text);
}

ProcessModel load_model(const std::string& file) { return model_from_json(read_json_file(file)); }

std::vector<Symbol> load_symbols(const Source& src, const ProcessModel& model, std::size_t fallback_length) {
    if (!src.path_file.empty()) return read_path(src.path_file, model.alphabet());
    const std::size_t length = src.length ? src.length : fallback_length;
    if (length == 0) throw ConfigError("--length (or --path) is required");
    return sample_path(model, length, src.seed).symbols();
}

// Trace rows for a single path, without the replicate and seed columns.
std::string estimator_csv(const EstimatorParams& params, const ProcessModel& model, SymbolView path) {
    CsvTable table;
    const auto columns = trace_columns(params);
    table.columns.assign(columns.begin() + 2, columns.end());
    for (auto& row : replicate_rows(params, &model, path, 0, 0)) table.rows.emplace_back(row.begin() + 2, row.end());
    return to_csv(table);
}

// "a..b" or a single seed.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const auto a = std::stoull(text, &used);
            if (used == text.size()) return {a, a};
        } else {
            const std::string lo = text.substr(0, dots), hi = text.substr(dots + 2);
            const auto a = std::stoull(lo, &used);
            if (used == lo.size()) {
                const auto b = std::stoull(hi, &used);
                if (used == hi.size() && a <= b) return {a, b};
            }
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("--seeds: expected a..b with a <= b, got \"" + text + "\"");
}

std::string backward_csv(const ProcessModel& model, const Source& src, std::size_t t, const std::string& seeds) {
    if (t == 0) throw ConfigError("--t must be at least 1");
    CsvTable table;
    table.columns = {"seed", "t", "kappa_t", "p_hat", "oracle", "abs_err"};
    auto add = [&](const std::string& seed, SymbolView past) {
        if (t > past.size()) throw InputError("--t exceeds the past length");
        const BackwardEstimate est = p_hat(past, t);
        const double oracle = true_conditional(model, past, 1);
        table.rows.push_back({seed, std::to_string(t), std::to_string(est.kappa), format_double(est.p_hat),
                              format_double(oracle), format_double(std::abs(est.p_hat - oracle))});
    };
    if (!src.path_file.empty()) {
        add("", read_path(src.path_file, model.alphabet()));
    } else {
        const auto [first, last] = parse_seed_range(seeds);
        // The past X_{-len}^{-1}; by default exactly the lags the estimate may use.
        const std::size_t len = src.length ? src.length : t;
        for (std::uint64_t seed = first;; ++seed) {
            add(std::to_string(seed), sample_path(model, len, seed).symbols());
            if (seed == last) break;
        }
    }
    return to_csv(table);
}

Word parse_word(const std::string& text) {
    Word w;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty()) continue;
        std::size_t used = 0;
        int v = -1;
        try {
            v = std::stoi(part, &used);
        } catch (const std::exception&) {
        }
        if (used != part.size() || v < 0 || v >= kMaxAlphabet) throw ConfigError("--word: bad symbol \"" + part + "\"");
        w.push_back(static_cast<Symbol>(v));
    }
    return w;
}

std::string word_text(SymbolView w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) out += (i ? " " : "") + std::to_string(w[i]);
    return out;
}

std::vector<double> parse_quantiles(const std::string& text) {
    std::vector<double> qs;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        std::size_t used = 0;
        double q = -1.0;
        try {
            q = std::stod(part, &used);
        } catch (const std::exception&) {
        }
        if (used != part.size() || !(q >= 0.0 && q <= 1.0)) throw ConfigError("--quantiles: bad value \"" + part + "\"");
        qs.push_back(q);
    }
    if (qs.empty()) throw ConfigError("--quantiles: empty list");
    return qs;
}

struct MemoryArgs {
    Source src;
    std::string mode;
    std::size_t n = 0;
    double gamma = 0.5;
    double beta = 0.2;
    double eps = 0.1;
    std::string word;
    std::size_t rho = 0;
    std::size_t stride = 1;
};

std::string run_memory(const MemoryArgs& a) {
    const ProcessModel model = load_model(a.src.model_file);
    MemoryParams params;
    params.gamma = a.gamma;
    params.beta = a.beta;
    params.epsilon = a.eps;
    try {
        params.validate();
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    const auto symbols = load_symbols(a.src, model, a.n + 1);
    if (a.n + 1 > symbols.size()) throw InputError("--n exceeds the path length minus one");
    const int alphabet = std::max(2, model.alphabet().size);
    const SymbolView view(symbols);

    if (a.mode == "forward" || a.mode == "fm") {
        nlohmann::json p{{"gamma", a.gamma}, {"beta", a.beta}, {"epsilon", a.eps}, {"stride", a.stride}};
        const auto est = parse_estimator_params(a.mode == "fm" ? "fm" : "memory-forward", "", p, model.alphabet());
        return estimator_csv(est, model, view.first(a.n + 1));
    }
    CsvTable t;
    const std::string n = std::to_string(a.n);
    if (a.mode == "ntest") {
        const Word w = parse_word(a.word);
        validate_symbols(w, model.alphabet());
        // Backward window: the last n + 1 symbols of the past.
        const SymbolView past = view.first(a.n + 1);
        const double d = delta_hat(past, alphabet, a.n, w, params);
        const bool pass = ntest(past, alphabet, a.n, w, params);
        t.columns = {"n", "word", "delta_hat", "threshold", "verdict"};
        t.rows.push_back({n, word_text(w), format_double(d), format_double(pass_threshold(a.n, a.beta)),
                          pass ? "YES" : "NO"});
    } else if (a.mode == "chi") {
        const SymbolView past = view.first(a.n + 1);
        const auto memory = memory_length_oracle(model, past);
        t.columns = {"n", "chi", "memory_true"};
        t.rows.push_back({n, std::to_string(chi_backward(past, alphabet, a.n, params)),
                          memory ? std::to_string(*memory) : std::string()});
    } else if (a.mode == "qhat") {
        const auto row = qhat_row(view, alphabet, a.n, a.rho);
        const auto truth = true_conditional_row(model, view.first(a.n + 1));
        t.columns = {"n", "rho", "symbol", "qhat", "truth"};
        for (int x = 0; x < alphabet; ++x)
            t.rows.push_back({n, std::to_string(a.rho), std::to_string(x),
                              row ? format_double((*row)[static_cast<std::size_t>(x)]) : std::string(),
                              format_double(truth[static_cast<std::size_t>(x)])});
    } else if (a.mode == "ordest") {
        const MarkovVerdict v = markov_qhat(view, alphabet, a.n, params);
        t.columns = {"n", "order", "in_n"};
        t.rows.push_back({n, std::to_string(v.order), v.in_n ? "1" : "0"});
    } else {
        throw ConfigError("--mode must be one of ntest, chi, forward, qhat, fm, ordest");
    }
    return to_csv(t);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Universal sequential estimators for stationary ergodic processes"};
    app.require_subcommand(1);
    Globals g;
    if (const char* env = std::getenv("ERGO_OUTPUT_DIR")) g.output_dir = env;
    app.add_option("--output-dir", g.output_dir, "Directory for relative outputs (default: $ERGO_OUTPUT_DIR)");

    Source sim;
    auto* simulate = app.add_subcommand("simulate", "Sample a path and write it as a path file");
    simulate->add_option("--model", sim.model_file, "Model config (JSON)")->required();
    simulate->add_option("--length", sim.length, "Path length")->required();
    simulate->add_option("--seed", sim.seed, "Seed");
    simulate->add_option("-o,--output", sim.output, "Path file")->required();

    Source bw;
    std::size_t bw_t = 0;
    std::string bw_seeds = "1..1";
    auto* backward = app.add_subcommand("predict-backward", "Backward estimate P-hat of P(X_0 = 1 | past), one row per seed");
    backward->add_option("--model", bw.model_file, "Model config (JSON)")->required();
    backward->add_option("--t", bw_t, "Largest lag the estimate may use")->required();
    auto* bw_path = backward->add_option("--path", bw.path_file, "Past to read instead of sampling (oldest first)");
    backward->add_option("--seeds", bw_seeds, "Seed range a..b")->excludes(bw_path);
    backward->add_option("--length", bw.length, "Sampled past length (default: t)")->excludes(bw_path);
    backward->add_option("-o,--output", bw.output, "Output file (stdout when omitted)");

    Source fw;
    std::size_t fw_stride = 1;
    std::string fw_mode = "pointwise";
    auto* forward = app.add_subcommand("predict-forward", "Forward estimate g_n for n = 0..N");
    forward->add_option("--model", fw.model_file, "Model config (JSON)")->required();
    auto* fw_path = forward->add_option("--path", fw.path_file, "Path file to read instead of sampling");
    forward->add_option("--N", fw.length, "Last index N (the path has N + 1 symbols)")->excludes(fw_path);
    forward->add_option("--seed", fw.seed, "Sampling seed")->excludes(fw_path);
    forward->add_option("--mode", fw_mode, "pointwise, or cesaro for the running mean error")
        ->check(CLI::IsMember({"pointwise", "cesaro"}));
    forward->add_option("--stride", fw_stride, "Report every stride-th n");
    forward->add_option("-o,--output", fw.output, "Output file (stdout when omitted)");

    Source st;
    std::string scheme = "mw03";
    double growth_eps = 0.2;
    auto* stoptime = app.add_subcommand("stoptime", "Stopping-time schemes");
    add_source(stoptime, st);
    stoptime->add_option("--scheme", scheme, "morvai2000 or mw03")->check(CLI::IsMember({"morvai2000", "mw03"}));
    stoptime->add_option("--eps", growth_eps, "Growth-bound slack");

    MemoryArgs mem;
    auto* memory = app.add_subcommand("memory", "Memory-word, memory-length and order inference");
    add_source(memory, mem.src, false);
    memory->add_option("--mode", mem.mode, "ntest|chi|forward|qhat|fm|ordest")
        ->required()
        ->check(CLI::IsMember({"ntest", "chi", "forward", "qhat", "fm", "ordest"}));
    memory->add_option("--n", mem.n, "Sample size n (the path has n + 1 symbols)")->required();
    memory->add_option("--gamma", mem.gamma);
    memory->add_option("--beta", mem.beta);
    memory->add_option("--eps", mem.eps);
    memory->add_option("--word", mem.word, "Word for ntest, comma separated, oldest first");
    memory->add_option("--rho", mem.rho, "Context length for qhat");
    memory->add_option("--stride", mem.stride, "Report every stride-th row (forward, fm)");

    auto* experiment = app.add_subcommand("experiment", "Seeded replicate experiments");
    experiment->require_subcommand(1);
    std::string cfg_file, run_output;
    auto* run = experiment->add_subcommand("run", "Run a config and write trace + sidecar");
    run->add_option("config", cfg_file, "Experiment config (JSON)")->required();
    run->add_option("-o,--output", run_output, "Trace file (overrides the config)");
    std::string trace_file, summary_output, quantiles = "0.1,0.5,0.9";
    auto* summarize_cmd = experiment->add_subcommand("summarize", "Summarize a trace");
    summarize_cmd->add_option("trace", trace_file, "Trace CSV")->required();
    summarize_cmd->add_option("--quantiles", quantiles, "Comma-separated quantiles");
    summarize_cmd->add_option("-o,--output", summary_output, "Summary file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigExit;
    }

    try {
        if (*simulate) {
            const ProcessModel model = load_model(sim.model_file);
            if (sim.length == 0) throw ConfigError("--length must be positive");
            write_path(resolve(g, sim.output), sample_path(model, sim.length, sim.seed).symbols());
        } else if (*backward) {
            emit(g, bw.output, backward_csv(load_model(bw.model_file), bw, bw_t, bw_seeds));
        } else if (*forward || *stoptime) {
            Source& src = *forward ? fw : st;
            nlohmann::json p = nlohmann::json::object();
            if (*forward) p["stride"] = fw_stride;
            if (*stoptime) p["growth_epsilon"] = growth_eps;
            const ProcessModel model = load_model(src.model_file);
            const auto params =
                parse_estimator_params(*forward ? "forward" : scheme, *forward ? fw_mode : "", p, model.alphabet());
            // --N names the last index, so the path holds N + 1 symbols.
            if (*forward && src.path_file.empty() && src.length == 0) throw ConfigError("--N (or --path) is required");
            Source sized = src;
            if (*forward && sized.path_file.empty()) ++sized.length;
            const auto symbols = load_symbols(sized, model, 0);
            emit(g, src.output, estimator_csv(params, model, symbols));
        } else if (*memory) {
            emit(g, mem.src.output, run_memory(mem));
        } else if (*run) {
            const fs::path cfg_path = cfg_file;
            ExperimentConfig cfg = parse_experiment_config(read_json_file(cfg_path), cfg_path.parent_path());
            if (!run_output.empty()) cfg.output = run_output;
            if (cfg.output.empty()) cfg.output = "trace.csv";
            write_trace(run_experiment(cfg), resolve(g, cfg.output.string()));
        } else if (*summarize_cmd) {
            const auto qs = parse_quantiles(quantiles);
            emit(g, summary_output, to_csv(summarize(read_csv(trace_file), qs)));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigExit;
    } catch (const ConvergenceError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigExit;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kDataExit;
    }
    return 0;
}
