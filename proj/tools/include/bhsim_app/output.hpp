#pragma once

#include "bhsim_app/config.hpp"

#include <bhsim/protocols.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace bhsim::app {

struct Table {
    std::vector<std::string> columns;
    std::vector<bool> integer;  ///< per column; integers print without exponent
    std::vector<std::vector<double>> rows;
};

/// Lines emitted as '#' comments in CSV and as top-level keys in JSON.
struct FileHeader {
    std::vector<std::pair<std::string, std::string>> entries;
};

FileHeader make_header(const ExperimentConfig& cfg, const std::string& kind);

/// 12 significant digits, scientific.
std::string format_number(double x);

std::string render_csv(const Table& table, const FileHeader& header);
std::string render_json(const Table& table, const FileHeader& header);
std::string render(const Table& table, const FileHeader& header, OutputFormat format);

Table density_table(const ProtocolResult& r);
Table scalars_table(const ProtocolResult& r);

nlohmann::json to_json(const ParameterRecord& record);

/// Write to a sibling temporary and rename over @p path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string extension(OutputFormat f);

} // namespace bhsim::app
