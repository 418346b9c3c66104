#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bhsim::app {

/// Schema violation. what() starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

enum class Protocol {
    PinRelease,
    StackRelease,
    RepulsiveQuench,
    Ramp,
    SourceDrain,
    VelocitySweep,
    Spectrum,
    Dephased,
};

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& name, const std::string& path);

enum class OutputFormat { Csv, Json };

std::string to_string(OutputFormat f);

struct SweepAxis {
    std::string name;  ///< parameter key, e.g. "delta"
    std::vector<double> values;
};

inline constexpr std::size_t kDefaultSweepCap = 10000;

/// Command-line values that take precedence over the file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<OutputFormat> format;
};

struct ExperimentConfig {
    Protocol protocol = Protocol::PinRelease;
    std::string units = "J";
    double J_MHz = 0.0;            ///< set when units == "physical"
    nlohmann::json parameters;     ///< converted to J units
    std::vector<SweepAxis> axes;   ///< empty unless a "sweep" block is present
    std::size_t sweep_cap = kDefaultSweepCap;
    std::string output_stem = "result";
    OutputFormat format = OutputFormat::Csv;
    std::uint64_t seed = 0;

    /// Canonical JSON of everything above; input of the digest.
    [[nodiscard]] nlohmann::json resolved() const;
    /// "sha256:<hex>" of resolved().dump().
    [[nodiscard]] std::string digest() const;
    /// Number of sweep points (product of axis sizes; 1 without axes).
    [[nodiscard]] std::size_t point_count() const;
};

ExperimentConfig parse_config(const nlohmann::json& doc, const Overrides& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

/// Expand "start/stop/step" or explicit "values" for one axis. Empty grids are an error.
std::vector<double> expand_grid(const nlohmann::json& axis, const std::string& path);

std::string sha256_hex(const std::string& bytes);

} // namespace bhsim::app
