#pragma once

/**
 * @file dephasing.hpp
 * @brief Quasistatic frequency disorder: Gaussian-sampled transmon frequencies,
 *        rescaled couplings, and trajectory-averaged protocol runs.
 */

#include "bhsim/protocols.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace bhsim {

struct DephasingParams {
    double sigma_omega = 0.0;  ///< sqrt(2)/T_phi
    int n_trajectories = 100;
    std::uint64_t seed = 0;
    double omega01 = 100.0;    ///< mean transmon frequency, same units as J

    void validate() const;
};

struct DisorderSample {
    std::vector<double> omega;   ///< sampled frequencies, one per site
    std::vector<double> bond_J;  ///< J sqrt(omega_i omega_{i+1}) / omega01, length M-1
    int resamples = 0;           ///< draws rejected for omega <= 0
};

/// Independent generator for trajectory @p index of a run seeded with @p seed.
std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index);

DisorderSample sample_disorder(const DephasingParams& params, int M, double J, std::mt19937_64& rng);

struct DephasingOptions {
    int threads = 1;
    bool keep_trajectories = false;
};

struct EnsembleResult {
    ProtocolResult mean;
    std::vector<DisorderSample> samples;
    std::vector<ProtocolResult> trajectories;  ///< empty unless requested
    int total_resamples = 0;
};

/// Runs @p spec once per trajectory with disorder added to spec.chain, then averages
/// densities and scalars in trajectory order. Supports pin_release, stack_release and ramp.
EnsembleResult run_dephased_protocol(const ProtocolSpec& spec, const DephasingParams& params,
                                     const DephasingOptions& options = {});

} // namespace bhsim
