#include "ergo/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ergo {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
    if (!obj.contains(key)) throw ConfigError(std::string("model: missing field \"") + key + "\"");
    return obj.at(key);
}

ProbabilityRow read_row(const json& value, const char* key) {
    if (!value.is_array()) throw ConfigError(std::string("model: \"") + key + "\" must be an array");
    ProbabilityRow row;
    for (const auto& p : value) {
        if (!p.is_number()) throw ConfigError(std::string("model: \"") + key + "\" holds a non-number");
        row.push_back(p.get<double>());
    }
    return row;
}

std::vector<ProbabilityRow> read_rows(const json& value, const char* key) {
    if (!value.is_array()) throw ConfigError(std::string("model: \"") + key + "\" must be an array of rows");
    std::vector<ProbabilityRow> rows;
    for (const auto& r : value) rows.push_back(read_row(r, key));
    return rows;
}

int read_int(const json& value, const char* key) {
    if (!value.is_number_integer()) throw ConfigError(std::string("model: \"") + key + "\" must be an integer");
    return value.get<int>();
}

ProcessModel build(const json& config) {
    if (!config.is_object()) throw ConfigError("model: config must be a JSON object");
    const json& type_field = require(config, "type");
    if (!type_field.is_string()) throw ConfigError("model: \"type\" must be a string");
    const std::string type = type_field.get<std::string>();
    const int alphabet = read_int(require(config, "alphabet"), "alphabet");
    if (alphabet < 1 || alphabet > kMaxAlphabet) throw ConfigError("model: \"alphabet\" must be in 1..256");

    if (type == "iid") {
        ProbabilityRow pmf = read_row(require(config, "pmf"), "pmf");
        if (pmf.size() != static_cast<std::size_t>(alphabet))
            throw ConfigError("model: \"pmf\" length differs from \"alphabet\"");
        return ProcessModel(IidSpec{std::move(pmf)});
    }
    if (type == "markov") {
        MarkovSpec spec;
        spec.alphabet = alphabet;
        spec.order = read_int(require(config, "order"), "order");
        spec.rows = read_rows(require(config, "rows"), "rows");
        return ProcessModel(std::move(spec));
    }
    if (alphabet != 2) throw ConfigError("model: \"" + type + "\" models are binary (alphabet 2)");
    if (type == "hidden") {
        if (config.contains("preset")) {
            if (config.at("preset") != "example1") throw ConfigError("model: unknown hidden preset");
            return make_example1();
        }
        HiddenFunctionSpec spec;
        spec.hidden.order = 1;
        spec.hidden.rows = read_rows(require(config, "rows"), "rows");
        spec.hidden.alphabet = static_cast<int>(spec.hidden.rows.size());
        spec.distinguished = read_int(require(config, "distinguished"), "distinguished");
        return ProcessModel(std::move(spec));
    }
    if (type == "renewal") {
        if (config.contains("geometric")) {
            const json& q = config.at("geometric");
            if (!q.is_number()) throw ConfigError("model: \"geometric\" must be a number");
            return make_truncated_geometric_renewal(q.get<double>(), read_int(require(config, "max_gap"), "max_gap"));
        }
        return ProcessModel(RenewalSpec{read_row(require(config, "interarrival"), "interarrival")});
    }
    throw ConfigError("model: unknown type \"" + type + "\"");
}

}  // namespace

ProcessModel model_from_json(const json& config) {
    try {
        return build(config);
    } catch (const ConvergenceError& e) {
        throw ConfigError(std::string("model: ") + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
}

json model_to_json(const ProcessModel& model) {
    json out;
    out["type"] = model.kind();
    out["alphabet"] = model.alphabet().size;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IidSpec>) {
                out["pmf"] = s.pmf;
            } else if constexpr (std::is_same_v<T, MarkovSpec>) {
                out["order"] = s.order;
                out["rows"] = s.rows;
            } else if constexpr (std::is_same_v<T, HiddenFunctionSpec>) {
                out["rows"] = s.hidden.rows;
                out["distinguished"] = s.distinguished;
            } else {
                out["interarrival"] = s.interarrival;
            }
        },
        model.spec());
    return out;
}

json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + file.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
}

void write_path(const std::filesystem::path& file, SymbolView symbols) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + file.string());
    std::array<char, 8> header{};
    std::uint64_t len = symbols.size();
    for (auto& b : header) {
        b = static_cast<char>(len & 0xffu);
        len >>= 8;
    }
    out.write(header.data(), header.size());
    out.write(reinterpret_cast<const char*>(symbols.data()), static_cast<std::streamsize>(symbols.size()));
    if (!out) throw InputError("short write to " + file.string());
}

std::vector<Symbol> read_path(const std::filesystem::path& file, Alphabet alphabet) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot open " + file.string());
    std::array<unsigned char, 8> header{};
    if (!in.read(reinterpret_cast<char*>(header.data()), header.size()))
        throw InputError(file.string() + ": missing length header");
    std::uint64_t len = 0;
    for (std::size_t i = header.size(); i-- > 0;) len = (len << 8) | header[i];
    const auto size = std::filesystem::file_size(file);
    if (size - header.size() != len)
        throw InputError(file.string() + ": header says " + std::to_string(len) + " symbols, file holds " +
                         std::to_string(size - header.size()));
    std::vector<Symbol> symbols(static_cast<std::size_t>(len));
    in.read(reinterpret_cast<char*>(symbols.data()), static_cast<std::streamsize>(len));
    if (!in) throw InputError(file.string() + ": truncated");
    validate_symbols(symbols, alphabet);
    return symbols;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw InputError("csv: no column \"" + name + "\"");
}

bool CsvTable::has_column(const std::string& name) const {
    for (const auto& c : columns)
        if (c == name) return true;
    return false;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\n\r") == std::string::npos) {
            line += c;
            continue;
        }
        line += '"';
        for (char ch : c) {
            if (ch == '"') line += '"';
            line += ch;
        }
        line += '"';
    }
    line += '\n';
    return line;
}

std::string to_csv(const CsvTable& table) {
    std::string out = csv_line(table.columns);
    for (const auto& row : table.rows) out += csv_line(row);
    return out;
}

CsvTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string cell;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch != '"') {
                cell += ch;
            } else if (i + 1 < text.size() && text[i + 1] == '"') {
                cell += '"';
                ++i;
            } else {
                quoted = false;
            }
            continue;
        }
        any = true;
        if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            record.push_back(std::move(cell));
            cell.clear();
        } else if (ch == '\n') {
            record.push_back(std::move(cell));
            cell.clear();
            records.push_back(std::move(record));
            record.clear();
            any = false;
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    if (quoted) throw InputError("csv: unterminated quote");
    if (any) {
        record.push_back(std::move(cell));
        records.push_back(std::move(record));
    }
    if (records.empty()) throw InputError("csv: no header row");
    CsvTable table;
    table.columns = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.columns.size())
            throw InputError("csv: row " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                             " cells, header has " + std::to_string(table.columns.size()));
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + file.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw InputError("short write to " + file.string());
}

}  // namespace ergo
