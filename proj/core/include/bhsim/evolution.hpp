#pragma once

/**
 * @file evolution.hpp
 * @brief States, eigendecompositions and unitary propagation e^{-iHt}|psi0>.
 *
 * Two propagation paths share one interface: spectral synthesis from a full
 * eigendecomposition for small sectors, and a Lanczos-Krylov exponential for
 * large ones. Both are always available so they can cross-check each other.
 */

#include "bhsim/hamiltonian.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace bhsim {

inline constexpr std::size_t kDefaultDenseThreshold = 4000;

class QuantumState {
public:
    /// Throws DomainError unless ||amplitudes|| = 1 within 1e-10.
    QuantumState(std::shared_ptr<const FockBasis> basis, Eigen::VectorXcd amplitudes);

    static QuantumState fock(std::shared_ptr<const FockBasis> basis, const FockState& occupations);
    static QuantumState normalized(std::shared_ptr<const FockBasis> basis, Eigen::VectorXcd amplitudes);

    [[nodiscard]] const FockBasis& basis() const noexcept { return *basis_; }
    [[nodiscard]] const std::shared_ptr<const FockBasis>& basis_ptr() const noexcept { return basis_; }
    [[nodiscard]] const Eigen::VectorXcd& amplitudes() const noexcept { return amp_; }
    [[nodiscard]] double norm() const { return amp_.norm(); }

    /// <this|other>
    [[nodiscard]] std::complex<double> overlap(const QuantumState& other) const;

    /// Skips the norm check; for propagator output whose norm drift is tested separately.
    static QuantumState unchecked(std::shared_ptr<const FockBasis> basis, Eigen::VectorXcd amplitudes);

private:
    QuantumState() = default;

    std::shared_ptr<const FockBasis> basis_;
    Eigen::VectorXcd amp_;
};

/// |<a|b>|^2
double fidelity(const QuantumState& a, const QuantumState& b);

struct EigenDecomposition {
    std::shared_ptr<const FockBasis> basis;
    Eigen::VectorXd eigenvalues;   ///< ascending
    Eigen::MatrixXd eigenvectors;  ///< columns, orthonormal

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
    [[nodiscard]] QuantumState eigenstate(std::size_t n) const;
};

/// Full real-symmetric eigendecomposition. Sectors above @p dense_threshold are rejected.
EigenDecomposition diagonalize(const SparseHamiltonian& H,
                               std::size_t dense_threshold = kDefaultDenseThreshold);

struct GroundStateOptions {
    std::size_t dense_threshold = kDefaultDenseThreshold;
    double relative_tolerance = 1e-9;  ///< residual / ||H||
    int subspace = 80;
    int max_restarts = 400;
};

struct GroundState {
    double energy;
    QuantumState state;
};

/// Lowest eigenpair; largest-magnitude amplitude made real positive.
GroundState ground_state(const SparseHamiltonian& H, const GroundStateOptions& options = {});

/// Uniform sampling grid t_k = k dt, k = 0..steps.
struct TimeGrid {
    double dt = 0.02;
    std::size_t steps = 0;

    static TimeGrid until(double t_max, double dt);
    [[nodiscard]] std::size_t size() const noexcept { return steps + 1; }
    [[nodiscard]] double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
    [[nodiscard]] double t_max() const noexcept { return time(steps); }
    [[nodiscard]] std::vector<double> times() const;
};

enum class PropagationMethod { Auto, Dense, Krylov };

struct EvolveOptions {
    PropagationMethod method = PropagationMethod::Auto;
    std::size_t dense_threshold = kDefaultDenseThreshold;
    double krylov_tolerance = 1e-10;
    int krylov_min_dim = 10;
    int krylov_max_dim = 60;
};

/// Lanczos-Krylov propagator for a fixed Hamiltonian.
class KrylovPropagator {
public:
    KrylovPropagator(const SparseHamiltonian& H, const EvolveOptions& options = {});

    /// v <- e^{-iH tau} v. Subdivides tau internally when the error estimate requires it.
    void advance(Eigen::VectorXcd& v, double tau, std::size_t step_index = 0);

    [[nodiscard]] std::size_t substeps_taken() const noexcept { return substeps_; }

private:
    const SparseHamiltonian& H_;
    EvolveOptions opt_;
    double hnorm_;
    std::size_t substeps_ = 0;
    std::vector<Eigen::VectorXcd> basis_;
    Eigen::VectorXcd w_;
};

using StateVisitor = std::function<void(std::size_t step, double t, const QuantumState& state)>;

/// Streams psi(t_k) to @p visit. @p eig may supply a precomputed decomposition for the dense path.
void evolve_visit(const SparseHamiltonian& H, const QuantumState& psi0, const TimeGrid& grid,
                  const StateVisitor& visit, const EvolveOptions& options = {},
                  const EigenDecomposition* eig = nullptr);

std::vector<QuantumState> evolve(const SparseHamiltonian& H, const QuantumState& psi0,
                                 const TimeGrid& grid, const EvolveOptions& options = {});

/// Single-shot e^{-iHt}|psi>; t may be negative.
QuantumState propagate(const SparseHamiltonian& H, const QuantumState& psi, double t,
                       const EvolveOptions& options = {});

/// Diagonal operator as its values on the basis states.
Eigen::VectorXd number_operator(const FockBasis& basis, int mode);
Eigen::VectorXd total_number_operator(const FockBasis& basis);

/// <psi|O|psi> for a Hermitian O; throws DomainError if the imaginary part exceeds 1e-10.
double expectation(const QuantumState& state, const Eigen::VectorXd& diagonal_op);
double expectation(const QuantumState& state, const SparseHamiltonian& op);

} // namespace bhsim
