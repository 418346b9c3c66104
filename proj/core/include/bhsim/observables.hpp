#pragma once

/**
 * @file observables.hpp
 * @brief Site densities, RMSD width and expansion velocity, stack fidelity,
 *        occupation-class projections and spectral weights.
 *
 * Site indices are 1-based chain sites throughout.
 */

#include "bhsim/evolution.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace bhsim {

struct DensityProfile {
    std::vector<double> per_site;  ///< <n_i>, chain sites 1..M stored at 0..M-1
    double time = 0.0;
    bool has_resonators = false;
    double n_source = 0.0;
    double n_drain = 0.0;

    [[nodiscard]] int site_count() const noexcept { return static_cast<int>(per_site.size()); }
    [[nodiscard]] double at(int site) const { return per_site.at(static_cast<std::size_t>(site - 1)); }
    /// Sum over chain sites only.
    [[nodiscard]] double chain_total() const;
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

DensityProfile site_densities(const QuantumState& state, double time = 0.0);

/// sqrt((1/N) sum_i <n_i>(i - pin)^2).
double rmsd(const DensityProfile& profile, int pin_site, int N);

/// d/dt sqrt(R^2(t) - R^2(0)) by central differences; one-sided at the ends.
TimeSeries expansion_velocity(const std::vector<DensityProfile>& series, int pin_site, int N);

/// Same, from an already computed R(t) series.
TimeSeries expansion_velocity(const TimeSeries& width);

/// Probability of all N counted excitations sitting on a single chain site.
/// For the extended layout the remaining excitations may be in the resonators.
double fidelity_stack_subspace(const QuantumState& state, int N);

struct ClassProbabilities {
    double empty = 0.0;                 ///< no excitation in the chain
    double single = 0.0;                ///< exactly one
    double separated_singles = 0.0;     ///< two or more, none sharing a site
    double doublon_plus_singles = 0.0;  ///< one doubly occupied site plus at least one single
    double other = 0.0;

    [[nodiscard]] double total() const noexcept {
        return empty + single + separated_singles + doublon_plus_singles + other;
    }
};

enum class OccupationClass { Empty, Single, SeparatedSingles, DoublonPlusSingles, Other };

OccupationClass classify_chain_pattern(std::span<const std::uint8_t> chain_occupations);

/// Requires the SourceChainDrain layout.
ClassProbabilities project_state_classes(const QuantumState& state);

/// |<psi_n|phi>|^2 for every eigenvector.
std::vector<double> spectral_overlaps(const EigenDecomposition& eig, const QuantumState& phi);

/// Raw sum of |<phi_j|target>|^2; the family is not orthogonalized.
double subspace_weight(const std::vector<QuantumState>& phi_list, const QuantumState& target);

} // namespace bhsim
