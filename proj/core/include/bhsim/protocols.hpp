#pragma once

/**
 * @file protocols.hpp
 * @brief End-to-end experiment recipes: prepare, quench, evolve, record.
 *
 * Every recipe records the same observable set on the time grid and embeds
 * the fully resolved parameters in the result.
 */

#include "bhsim/evolution.hpp"
#include "bhsim/hamiltonian.hpp"
#include "bhsim/observables.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bhsim {

/// Pin strength: an explicit value, or the soliton band width for (U, N).
struct BandPin {};
using PinStrength = std::variant<double, BandPin>;

double resolve_pin_strength(const PinStrength& pin, double U, int N, double J);

using ParameterValue = std::variant<double, std::int64_t, std::string>;
using ParameterRecord = std::map<std::string, ParameterValue>;

struct ProtocolResult {
    std::vector<double> times;
    std::vector<std::string> mode_labels;  ///< "S", "1".."M", "D"
    Eigen::MatrixXd density;               ///< rows: time, cols: mode_labels
    std::vector<std::pair<std::string, std::vector<double>>> scalars;
    ParameterRecord metadata;

    [[nodiscard]] bool has_scalar(const std::string& name) const;
    [[nodiscard]] const std::vector<double>& scalar(const std::string& name) const;
    std::vector<double>& scalar(const std::string& name);
    /// <n_site>(t) for chain site @p site (1-based).
    [[nodiscard]] std::vector<double> site_series(int site) const;
    /// Chain density row at time index @p k.
    [[nodiscard]] DensityProfile profile(std::size_t k) const;
};

struct RunSettings {
    TimeGrid grid{0.02, 5000};
    EvolveOptions evolve{};
};

ProtocolResult run_pin_release(const ChainParams& chain, int N, int pin_site, const PinStrength& mu_pin,
                               const RunSettings& settings = {});

ProtocolResult run_stack_release(const ChainParams& chain, int N, int site,
                                 const RunSettings& settings = {});

/// Ground state pinned at U_prep = chain.U < 0, evolved unpinned with U_evolve.
ProtocolResult run_repulsive_quench(const ChainParams& chain, double U_evolve, int N, int pin_site,
                                    const PinStrength& mu_pin, const RunSettings& settings = {});

/// Ramp mu_ramp (ramp_site - i) added to chain.mu for i < ramp_site; pinned at ramp_site for
/// preparation, ramp kept during evolution.
ProtocolResult run_ramp(const ChainParams& chain, int N, int ramp_site, double mu_ramp,
                        const PinStrength& mu_pin, const RunSettings& settings = {});

/// Source prepared in |N_total>, chain and drain empty; J' switched on at t = 0.
ProtocolResult run_source_drain(const ChainParams& chain, const SourceDrainParams& sd,
                                const RunSettings& settings = {});

enum class ProtocolKind { PinRelease, StackRelease, RepulsiveQuench, Ramp, SourceDrain };

std::string to_string(ProtocolKind kind);

/// Tagged description of any recipe, used for sweeps and ensembles.
struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::PinRelease;
    ChainParams chain;
    int N = 1;
    int site = 1;  ///< pin, stack or ramp site
    PinStrength mu_pin = BandPin{};
    double mu_ramp = 0.0;
    double U_evolve = 0.0;
    SourceDrainParams sd;
    RunSettings settings;
};

ProtocolResult run_protocol(const ProtocolSpec& spec);

} // namespace bhsim
