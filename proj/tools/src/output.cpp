#include "bhsim_app/output.hpp"

#include <bhsim/version.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

namespace bhsim::app {

using nlohmann::json;

FileHeader make_header(const ExperimentConfig& cfg, const std::string& kind) {
    FileHeader h;
    h.entries = {{"bhsim", kVersion},
                 {"config_digest", cfg.digest()},
                 {"protocol", to_string(cfg.protocol)},
                 {"content", kind},
                 {"time_unit", "1/J"}};
    return h;
}

std::string format_number(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", x == 0.0 ? 0.0 : x);  // folds -0
    return buf;
}

namespace {

std::string format_cell(double x, bool integer) {
    if (integer && std::isfinite(x)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", x);
        return buf;
    }
    return format_number(x);
}

} // namespace

std::string render_csv(const Table& table, const FileHeader& header) {
    std::string out;
    for (const auto& [k, v] : header.entries)
        out += "# " + k + " " + v + "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out += (c ? "," : "") + table.columns[c];
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c)
                out += ',';
            out += format_cell(row[c], c < table.integer.size() && table.integer[c]);
        }
        out += "\n";
    }
    return out;
}

std::string render_json(const Table& table, const FileHeader& header) {
    // ordered_json keeps the header first
    nlohmann::ordered_json doc;
    for (const auto& [k, v] : header.entries)
        doc[k] = v;
    doc["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto r = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!std::isfinite(row[c]))
                r.push_back(nullptr);
            else if (c < table.integer.size() && table.integer[c])
                r.push_back(static_cast<std::int64_t>(std::llround(row[c])));
            else
                r.push_back(row[c]);
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(1) + "\n";
}

std::string render(const Table& table, const FileHeader& header, OutputFormat format) {
    return format == OutputFormat::Csv ? render_csv(table, header) : render_json(table, header);
}

Table density_table(const ProtocolResult& r) {
    Table t;
    t.columns.push_back("time");
    for (const auto& label : r.mode_labels)
        t.columns.push_back(label);
    t.integer.assign(t.columns.size(), false);
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        std::vector<double> row{r.times[k]};
        for (Eigen::Index c = 0; c < r.density.cols(); ++c)
            row.push_back(r.density(static_cast<Eigen::Index>(k), c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table scalars_table(const ProtocolResult& r) {
    Table t;
    t.columns.push_back("time");
    for (const auto& [name, _] : r.scalars)
        t.columns.push_back(name);
    t.integer.assign(t.columns.size(), false);
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        std::vector<double> row{r.times[k]};
        for (const auto& [_, series] : r.scalars)
            row.push_back(series[k]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

json to_json(const ParameterRecord& record) {
    json j = json::object();
    for (const auto& [k, v] : record)
        std::visit([&](const auto& x) { j[k] = x; }, v);
    return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
    }
}

std::string extension(OutputFormat f) { return f == OutputFormat::Csv ? ".csv" : ".json"; }

} // namespace bhsim::app
