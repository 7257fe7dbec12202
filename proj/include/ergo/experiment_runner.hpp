#pragma once

// Seeded replicate experiments: run an estimator against a model, score it
// against the model's oracles, and write a CSV trace plus a JSON sidecar.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergo/io.hpp"
#include "ergo/process_models.hpp"

namespace ergo {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Estimator ids accepted by the runner and the CLI.
///   backward        p_hat(past, t) at a fixed end of the past
///   forward         streaming forward estimate g_n
///   morvai2000      pattern-doubling stopping times
///   mw03            growing-window stopping times
///   memory-backward chi on the backward window
///   memory-forward  forward memory-word scheme, one verdict per n
///   markov-qhat     order estimate and q-hat at sampled n
///   fm              stopping scheme for finitarily Markovian processes
const std::vector<std::string>& estimator_ids();

/// Scoring mode matching an estimator, used when the config names none.
std::string default_scoring(const std::string& estimator);

/// Estimator parameters with the defaults filled in.
struct EstimatorParams {
    std::string estimator;
    std::string scoring;
    Symbol target = 1;
    std::size_t stride = 1;
    double gamma = 0.5;
    double beta = 0.2;
    double epsilon = 0.1;
    double growth_epsilon = 0.2;
};

/// Reads {"target", "stride", "gamma", "beta", "epsilon", "growth_epsilon"}
/// from `params`; unknown keys are rejected.  Throws ConfigError.
EstimatorParams parse_estimator_params(const std::string& estimator, const std::string& scoring,
                                       const nlohmann::json& params, Alphabet alphabet);

std::vector<std::string> trace_columns(const EstimatorParams& params);

/// Rows for one replicate.  `model` may be null (no oracle); the oracle and
/// abs_err cells are then left empty.  Under cesaro scoring the forward
/// abs_err column holds the running mean of the pointwise errors.
std::vector<std::vector<std::string>> replicate_rows(const EstimatorParams& params, const ProcessModel* model,
                                                     SymbolView path, std::size_t replicate,
                                                     std::uint64_t seed);

struct ExperimentConfig {
    nlohmann::json raw;  // as read, echoed into the sidecar
    ProcessModel model = make_bernoulli(0.5);
    EstimatorParams params;
    std::size_t length = 0;
    std::uint64_t seed_first = 0;
    std::size_t replicates = 0;
    std::filesystem::path output;
    unsigned threads = 0;  // 0: hardware concurrency

    std::uint64_t seed(std::size_t replicate) const { return seed_first + replicate; }
};

/// Config object:
///   {"model": {...} | "model_file": "m.json",
///    "estimator": "forward", "params": {...}, "scoring": "pointwise",
///    "length": 100000, "seeds": {"first": 1, "count": 50},
///    "output": "trace.csv", "threads": 0}
/// A relative model_file resolves against `base_dir`; a relative output is
/// kept relative (the CLI resolves it).  Throws ConfigError naming the
/// violated constraint.
ExperimentConfig parse_experiment_config(const nlohmann::json& raw, const std::filesystem::path& base_dir = {});

struct TraceFile {
    CsvTable table;
    nlohmann::json metadata;
};

/// Replicates run in parallel; rows are merged in replicate order, so the
/// result does not depend on the thread count.
TraceFile run_experiment(const ExperimentConfig& config);

/// Writes `csv` and `csv` + ".meta.json".
void write_trace(const TraceFile& trace, const std::filesystem::path& csv);

/// Long-format summary with columns (section, key, statistic, value):
///   error   / <index>      / q<quantile> | count   (from the abs_err column)
///   density / <replicate>  / in_n        fraction of rows flagged in_n
///   growth  / <k>          / pass_rate   fraction of replicates within the bound
/// Quantiles are exact order statistics (nearest rank) over replicates.
/// Throws InputError for a trace with no data rows.
CsvTable summarize(const CsvTable& trace, const std::vector<double>& quantiles = {0.1, 0.5, 0.9});

/// Nearest-rank order statistic of `values` (sorted in place).
double order_statistic(std::vector<double>& values, double q);

}  // namespace ergo
