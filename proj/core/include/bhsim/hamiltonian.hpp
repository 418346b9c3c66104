#pragma once

/**
 * @file hamiltonian.hpp
 * @brief Sparse real-symmetric Bose-Hubbard operators for a chain, optionally
 *        terminated by a source and a drain resonator.
 *
 * Energies are in units where hbar = 1; the library default is J = 1.
 * Site indices in this interface are 1-based.
 */

#include "bhsim/fock_basis.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace bhsim {

struct ChainParams {
    double J = 1.0;
    double U = 0.0;
    std::vector<double> mu;      ///< on-site frequencies, one per site
    std::vector<double> bond_J;  ///< per-bond couplings J_{i,i+1}; empty means uniform J

    [[nodiscard]] int site_count() const noexcept { return static_cast<int>(mu.size()); }
    [[nodiscard]] double bond(int i) const {
        return bond_J.empty() ? J : bond_J[static_cast<std::size_t>(i)];
    }
    /// Uniform chain with mu_i = omega01.
    static ChainParams uniform(int M, double J, double U, double omega01 = 0.0);
    void validate() const;
};

struct SourceDrainParams {
    double omega_r = 0.0;     ///< common source/drain resonator frequency
    double Jprime = 0.0;      ///< resonator-chain coupling
    int total_excitations = 1;

    /// Resonator frequency placed at detuning @p delta from a chain at @p omega01.
    static SourceDrainParams from_detuning(double delta, double Jprime, int total_excitations,
                                           double omega01 = 0.0) {
        return {omega01 + delta, Jprime, total_excitations};
    }
    [[nodiscard]] double detuning(double omega01) const noexcept { return omega_r - omega01; }
};

/// Real-symmetric sparse operator; only the upper triangle (with diagonal) is stored.
class SparseHamiltonian {
public:
    SparseHamiltonian(std::shared_ptr<const FockBasis> basis, std::vector<std::size_t> row_ptr,
                      std::vector<std::size_t> cols, std::vector<double> values,
                      std::string params_digest);

    [[nodiscard]] const FockBasis& basis() const noexcept { return *basis_; }
    [[nodiscard]] const std::shared_ptr<const FockBasis>& basis_ptr() const noexcept { return basis_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return basis_->dimension(); }
    [[nodiscard]] std::size_t stored_entries() const noexcept { return values_.size(); }
    [[nodiscard]] const std::string& params_digest() const noexcept { return digest_; }

    [[nodiscard]] const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
    [[nodiscard]] const std::vector<std::size_t>& cols() const noexcept { return cols_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    /// y = H x. Safe to call concurrently on distinct output vectors.
    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

    [[nodiscard]] Eigen::VectorXd diagonal() const;
    [[nodiscard]] Eigen::MatrixXd to_dense() const;
    /// Gershgorin bound on the spectral radius (max absolute row sum).
    [[nodiscard]] double norm_bound() const;

private:
    template <class Vec>
    void apply_impl(const Vec& x, Vec& y) const;

    std::shared_ptr<const FockBasis> basis_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
    std::string digest_;
};

SparseHamiltonian build_chain_hamiltonian(std::shared_ptr<const FockBasis> basis,
                                          const ChainParams& params);

SparseHamiltonian build_source_drain_hamiltonian(std::shared_ptr<const FockBasis> basis,
                                                 const ChainParams& chain,
                                                 const SourceDrainParams& sd);

/// mu_i = omega01 everywhere except mu_{pin_site} = omega01 - mu_pin.
std::vector<double> build_pinned_mu(int M, double omega01, int pin_site, double mu_pin);

/// Linear ramp rising towards site 1: mu_i = omega01 + mu_ramp (ramp_site - i) for i < ramp_site.
std::vector<double> build_ramp_mu(int M, double omega01, int ramp_site, double mu_ramp);

/// Coordinate text dump: "row col value" per line, 1-based, upper triangle.
void write_coordinate_text(std::ostream& out, const SparseHamiltonian& H);

} // namespace bhsim
