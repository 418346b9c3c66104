#pragma once

#include "bhsim_app/config.hpp"

#include <bhsim/dephasing.hpp>
#include <bhsim/fitting.hpp>
#include <bhsim/protocols.hpp>

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace bhsim::app {

/// One fully typed parameter set; every schema check happens while building it.
struct Job {
    Protocol protocol = Protocol::PinRelease;
    ProtocolSpec spec;               ///< evolution protocols, dephased base, velocity release
    DephasingParams dephasing;       ///< dephased only
    int levels = 0;                  ///< spectrum: 0 keeps every eigenvalue
    std::size_t dense_threshold = 0; ///< spectrum
    FitWindow window;                ///< velocity_sweep
};

/// Throws ConfigError naming "parameters.<key>".
Job build_job(Protocol protocol, const nlohmann::json& parameters, std::uint64_t seed);

/// Parameter object of sweep point @p index; the last axis varies fastest.
nlohmann::json point_parameters(const ExperimentConfig& cfg, std::size_t index);

/// Axis values of sweep point @p index, in axis order.
std::vector<double> point_coordinates(const ExperimentConfig& cfg, std::size_t index);

struct JobOutput {
    std::optional<ProtocolResult> series;  ///< time-resolved protocols only
    std::vector<std::string> summary_columns;
    std::vector<double> summary;
    std::vector<bool> summary_integer;
};

JobOutput run_job(const Job& job, int threads);

} // namespace bhsim::app
