#include "bhsim_app/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bhsim::app {

using nlohmann::json;

namespace {

// Parameters carrying an energy; divided by J under "physical" units.
const std::set<std::string> kEnergyKeys{"J",      "U",     "U_evolve", "mu_pin",     "mu_ramp",
                                        "Jprime", "delta", "omega01",  "sigma_omega", "U_grid"};

const std::array<std::pair<Protocol, const char*>, 8> kProtocolNames{{
    {Protocol::PinRelease, "pin_release"},
    {Protocol::StackRelease, "stack_release"},
    {Protocol::RepulsiveQuench, "repulsive_quench"},
    {Protocol::Ramp, "ramp"},
    {Protocol::SourceDrain, "source_drain"},
    {Protocol::VelocitySweep, "velocity_sweep"},
    {Protocol::Spectrum, "spectrum"},
    {Protocol::Dephased, "dephased"},
}};

void require_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
}

double number_at(const json& v, const std::string& path) {
    if (!v.is_number())
        throw ConfigError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ConfigError(path, "must be finite");
    return x;
}

void convert_energies(json& params, double scale) {
    for (auto& [key, value] : params.items()) {
        if (!kEnergyKeys.count(key))
            continue;
        if (value.is_number()) {
            value = value.get<double>() / scale;
        } else if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i)
                value[i] = number_at(value[i], "parameters." + key + "[" + std::to_string(i) + "]") / scale;
        }
    }
}

std::vector<double> numeric_list(const json& arr, const std::string& path) {
    if (!arr.is_array())
        throw ConfigError(path, "expected an array of numbers");
    if (arr.empty())
        throw ConfigError(path, "grid is empty");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(number_at(arr[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

} // namespace

std::string to_string(Protocol p) {
    for (auto [kind, name] : kProtocolNames)
        if (kind == p)
            return name;
    return "unknown";
}

Protocol protocol_from_string(const std::string& name, const std::string& path) {
    for (auto [kind, label] : kProtocolNames)
        if (name == label)
            return kind;
    std::string known;
    for (auto [_, label] : kProtocolNames)
        known += std::string(known.empty() ? "" : ", ") + label;
    throw ConfigError(path, "unknown protocol '" + name + "' (expected one of " + known + ")");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

std::vector<double> expand_grid(const json& axis, const std::string& path) {
    if (axis.contains("values"))
        return numeric_list(axis.at("values"), path + ".values");
    for (const char* key : {"start", "stop", "step"})
        if (!axis.contains(key))
            throw ConfigError(path + "." + key, "required field missing (or give 'values')");
    const double start = number_at(axis.at("start"), path + ".start");
    const double stop = number_at(axis.at("stop"), path + ".stop");
    const double step = number_at(axis.at("step"), path + ".step");
    if (step == 0.0)
        throw ConfigError(path + ".step", "must be nonzero");
    const double span = (stop - start) / step;
    if (span < -1e-9)
        throw ConfigError(path, "grid is empty (step points away from stop)");
    if (span > 1e7)
        throw ConfigError(path, "grid is unreasonably large");
    const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = start + static_cast<double>(k) * step;
    return out;
}

ExperimentConfig parse_config(const json& doc, const Overrides& overrides) {
    if (!doc.is_object())
        throw ConfigError("$", "config must be a JSON object");
    require_keys(doc, "", {"$schema", "description", "protocol", "units", "parameters", "sweep", "output", "seed"});

    ExperimentConfig cfg;
    if (!doc.contains("protocol"))
        throw ConfigError("protocol", "required field missing");
    if (!doc.at("protocol").is_string())
        throw ConfigError("protocol", "expected a string");
    cfg.protocol = protocol_from_string(doc.at("protocol").get<std::string>(), "protocol");

    if (doc.contains("units")) {
        if (!doc.at("units").is_string())
            throw ConfigError("units", "expected a string");
        const auto u = doc.at("units").get<std::string>();
        if (u == "J" || u == "J-units")
            cfg.units = "J";
        else if (u == "physical")
            cfg.units = "physical";
        else
            throw ConfigError("units", "expected \"J\" or \"physical\", got \"" + u + "\"");
    }

    if (!doc.contains("parameters"))
        throw ConfigError("parameters", "required field missing");
    if (!doc.at("parameters").is_object())
        throw ConfigError("parameters", "expected an object");
    cfg.parameters = doc.at("parameters");

    double scale = 1.0;
    if (cfg.units == "physical") {
        if (!cfg.parameters.contains("J"))
            throw ConfigError("parameters.J", "physical units need J in MHz");
        cfg.J_MHz = number_at(cfg.parameters.at("J"), "parameters.J");
        if (!(cfg.J_MHz > 0.0))
            throw ConfigError("parameters.J", "must be positive");
        scale = cfg.J_MHz;
        convert_energies(cfg.parameters, scale);
    }

    if (cfg.protocol == Protocol::VelocitySweep) {
        // list-valued N and U become leading axes
        if (cfg.parameters.contains("N_values")) {
            const auto v = numeric_list(cfg.parameters.at("N_values"), "parameters.N_values");
            cfg.axes.push_back({"N", v});
            cfg.parameters.erase("N_values");
        }
        if (cfg.parameters.contains("U_grid")) {
            const auto v = numeric_list(cfg.parameters.at("U_grid"), "parameters.U_grid");
            cfg.axes.push_back({"U", v});
            cfg.parameters.erase("U_grid");
        }
    }

    if (doc.contains("sweep")) {
        const json& sw = doc.at("sweep");
        if (!sw.is_object())
            throw ConfigError("sweep", "expected an object");
        require_keys(sw, "sweep", {"axes", "cap"});
        if (sw.contains("cap")) {
            if (!sw.at("cap").is_number_integer() || sw.at("cap").get<std::int64_t>() < 1)
                throw ConfigError("sweep.cap", "expected a positive integer");
            cfg.sweep_cap = sw.at("cap").get<std::size_t>();
        }
        if (!sw.contains("axes"))
            throw ConfigError("sweep.axes", "required field missing");
        const json& axes = sw.at("axes");
        if (!axes.is_array())
            throw ConfigError("sweep.axes", "expected an array");
        if (axes.empty())
            throw ConfigError("sweep.axes", "grid is empty");
        for (std::size_t i = 0; i < axes.size(); ++i) {
            const std::string path = "sweep.axes[" + std::to_string(i) + "]";
            const json& a = axes[i];
            if (!a.is_object())
                throw ConfigError(path, "expected an object");
            require_keys(a, path, {"name", "values", "start", "stop", "step"});
            if (!a.contains("name") || !a.at("name").is_string())
                throw ConfigError(path + ".name", "required string field");
            SweepAxis axis{a.at("name").get<std::string>(), expand_grid(a, path)};
            if (kEnergyKeys.count(axis.name))
                for (double& x : axis.values)
                    x /= scale;
            for (const auto& other : cfg.axes)
                if (other.name == axis.name)
                    throw ConfigError(path + ".name", "axis '" + axis.name + "' given twice");
            cfg.axes.push_back(std::move(axis));
        }
    }

    if (doc.contains("output")) {
        const json& out = doc.at("output");
        if (!out.is_object())
            throw ConfigError("output", "expected an object");
        require_keys(out, "output", {"path", "format"});
        if (out.contains("path")) {
            if (!out.at("path").is_string() || out.at("path").get<std::string>().empty())
                throw ConfigError("output.path", "expected a non-empty string");
            cfg.output_stem = out.at("path").get<std::string>();
        }
        if (out.contains("format")) {
            const json& f = out.at("format");
            if (f == "csv")
                cfg.format = OutputFormat::Csv;
            else if (f == "json")
                cfg.format = OutputFormat::Json;
            else
                throw ConfigError("output.format", "expected \"csv\" or \"json\"");
        }
    }

    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (!s.is_number_unsigned())
            throw ConfigError("seed", "expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }

    if (overrides.seed)
        cfg.seed = *overrides.seed;
    if (overrides.format)
        cfg.format = *overrides.format;

    const std::size_t points = cfg.point_count();
    if (points > cfg.sweep_cap)
        throw ConfigError("sweep.cap", "grid has " + std::to_string(points) + " points, cap is " +
                                           std::to_string(cfg.sweep_cap));
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("$", "cannot read config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc, overrides);
}

json ExperimentConfig::resolved() const {
    json j;
    j["protocol"] = to_string(protocol);
    j["units"] = units;
    if (units == "physical")
        j["J_MHz"] = J_MHz;
    j["parameters"] = parameters;
    json grid = json::array();
    for (const auto& a : axes)
        grid.push_back({{"name", a.name}, {"values", a.values}});
    j["axes"] = grid;
    j["sweep_cap"] = sweep_cap;
    j["output"] = {{"path", output_stem}, {"format", to_string(format)}};
    j["seed"] = seed;
    return j;
}

std::string ExperimentConfig::digest() const { return "sha256:" + sha256_hex(resolved().dump()); }

std::size_t ExperimentConfig::point_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) {
        if (a.values.empty())
            return 0;
        if (n > (std::size_t(1) << 40) / a.values.size())
            return std::size_t(1) << 40;
        n *= a.values.size();
    }
    return n;
}

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream os;
    static const char* hex = "0123456789abcdef";
    for (unsigned i = 0; i < len; ++i)
        os << hex[md[i] >> 4] << hex[md[i] & 15];
    return os.str();
}

} // namespace bhsim::app
