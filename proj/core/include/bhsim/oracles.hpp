#pragma once

/**
 * @file oracles.hpp
 * @brief Closed-form analytic results used as independent checks of the
 *        numerical engine. Nothing here depends on the engine.
 *
 * All energies and frequencies carry the units of @p J.
 */

#include <vector>

namespace bhsim::oracles {

/// Pinning strength equal to the width of the soliton band.
double mu_band(double U, int N, double J = 1.0);

/// Approximate RMSD width of a strongly pinned soliton.
double soliton_width(double mu_pin, double U, int N, double J = 1.0);

/// Approximate amplitude on each nearest neighbour of the pin site (first order in J).
double soliton_neighbour_amplitude(double mu_pin, double U, int N, double J = 1.0);

/// Effective hopping of an N-boson bound state: J N (J/|U|)^{N-1} / (N-1)!.
double j_tilde(double U, int N, double J = 1.0);

/// Interaction strength at which the soliton band detaches: J (2N/(N-1)!)^{1/(N-1)}.
double u_critical(int N, double J = 1.0);

/// Single-particle energies omega01 + 2J cos(pi k/(M+1)), sorted ascending.
std::vector<double> tight_binding_energies(int M, double J = 1.0, double omega01 = 0.0);

struct SourceDrainDensities {
    std::vector<double> times;
    std::vector<double> n_source;
    std::vector<double> n_drain;
    std::vector<double> n_chain;
};

/// Zero-detuning, U = 0 transfer through an odd chain. Throws DomainError for even M.
SourceDrainDensities resonant_sd_densities(int M, double Jprime, int N_total,
                                           const std::vector<double>& times);

struct ParityReduction {
    int M = 0;
    double Jprime = 0.0;
    double J = 1.0;
    double beta = 0.0;
    double omega_plus = 0.0;
    double omega_minus = 0.0;
    double alpha_beat = 0.0;
    double omega_minus_corrected = 0.0;
    int parity_sign = 1;  ///< (-1)^{M/2}

    /// Beating model; uses the level-repulsion corrected slow frequency unless told otherwise.
    [[nodiscard]] SourceDrainDensities densities(int N_total, const std::vector<double>& times,
                                                 bool corrected = true) const;
};

/// Two-level reduction for an even chain at zero detuning. Throws DomainError for odd M.
ParityReduction off_resonant_sd(int M, double Jprime, double J = 1.0);

/// Resonator detuning that makes N photons resonant with an N-boson bound state: U(N-1)/2.
double multiphoton_resonance_detuning(double U, int N);

/// sqrt(M+1) J'/J; small values mean a pronounced even/odd difference.
double parity_crossover(int M, double Jprime, double J = 1.0);

} // namespace bhsim::oracles
