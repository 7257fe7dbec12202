#pragma once

// Model configs, path files and CSV text.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergo/process_models.hpp"
#include "ergo/types.hpp"

namespace ergo {

/// Model from a JSON object:
///   {"type": "iid",     "alphabet": k, "pmf": [...]}
///   {"type": "markov",  "alphabet": k, "order": o, "rows": [[...], ...]}
///   {"type": "hidden",  "alphabet": 2, "rows": [[...], ...], "distinguished": s}
///   {"type": "renewal", "alphabet": 2, "interarrival": [...]}
///   {"type": "renewal", "alphabet": 2, "geometric": q, "max_gap": L}
/// Markov rows are indexed by the context code (oldest symbol most
/// significant).  A hidden model may instead name {"preset": "example1"}.
/// Throws ConfigError naming the offending field.
ProcessModel model_from_json(const nlohmann::json& config);
nlohmann::json model_to_json(const ProcessModel& model);

nlohmann::json read_json_file(const std::filesystem::path& file);

/// Path file: 8-byte little-endian length, then one byte per symbol.
void write_path(const std::filesystem::path& file, SymbolView symbols);
/// Throws InputError on truncation, trailing bytes or out-of-alphabet bytes.
std::vector<Symbol> read_path(const std::filesystem::path& file, Alphabet alphabet);

/// %.17g, with "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double x);

/// Rows of string cells with a header.  Cells never need quoting for the
/// data this library writes; quoting is applied anyway when a cell holds a
/// comma, quote or newline.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws InputError
    bool has_column(const std::string& name) const;
};

std::string csv_line(const std::vector<std::string>& cells);
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& file);

/// Binary-mode write so bytes match on every platform.
void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace ergo
