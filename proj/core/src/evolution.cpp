#include "bhsim/evolution.hpp"

#include "bhsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace bhsim {

QuantumState::QuantumState(std::shared_ptr<const FockBasis> basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amp_(std::move(amplitudes)) {
    if (!basis_)
        throw DomainError("QuantumState: null basis");
    if (static_cast<std::size_t>(amp_.size()) != basis_->dimension())
        throw DomainError("QuantumState: amplitude length " + std::to_string(amp_.size()) +
                          " does not match basis dimension " + std::to_string(basis_->dimension()));
    if (std::abs(amp_.norm() - 1.0) > 1e-10)
        throw DomainError("QuantumState: norm " + std::to_string(amp_.norm()) + " is not 1");
}

QuantumState QuantumState::unchecked(std::shared_ptr<const FockBasis> basis,
                                     Eigen::VectorXcd amplitudes) {
    QuantumState s;
    s.basis_ = std::move(basis);
    s.amp_ = std::move(amplitudes);
    return s;
}

QuantumState QuantumState::fock(std::shared_ptr<const FockBasis> basis, const FockState& occupations) {
    const std::size_t idx = basis->index_of(std::span<const int>(occupations));
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
    amp(static_cast<Eigen::Index>(idx)) = 1.0;
    return QuantumState(std::move(basis), std::move(amp));
}

QuantumState QuantumState::normalized(std::shared_ptr<const FockBasis> basis, Eigen::VectorXcd amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw DomainError("QuantumState::normalized: zero or non-finite vector");
    amplitudes /= n;
    return QuantumState(std::move(basis), std::move(amplitudes));
}

std::complex<double> QuantumState::overlap(const QuantumState& other) const {
    if (!(*basis_ == other.basis()))
        throw DomainError("overlap: states live in different bases");
    return amp_.dot(other.amp_);
}

double fidelity(const QuantumState& a, const QuantumState& b) { return std::norm(a.overlap(b)); }

QuantumState EigenDecomposition::eigenstate(std::size_t n) const {
    if (n >= size())
        throw DomainError("eigenstate: index out of range");
    Eigen::VectorXcd v = eigenvectors.col(static_cast<Eigen::Index>(n)).cast<std::complex<double>>();
    return QuantumState::normalized(basis, std::move(v));
}

EigenDecomposition diagonalize(const SparseHamiltonian& H, std::size_t dense_threshold) {
    if (H.dimension() > dense_threshold)
        throw DomainError("diagonalize: dimension " + std::to_string(H.dimension()) +
                          " exceeds the dense threshold " + std::to_string(dense_threshold) +
                          "; use the Krylov path (ground_state / evolve) instead");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H.to_dense());
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("diagonalize: eigensolver did not converge", 0.0);
    return {H.basis_ptr(), solver.eigenvalues(), solver.eigenvectors()};
}

TimeGrid TimeGrid::until(double t_max, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw DomainError("TimeGrid: dt must be positive");
    if (!(t_max >= 0.0) || !std::isfinite(t_max))
        throw DomainError("TimeGrid: t_max must be non-negative");
    const double n = std::round(t_max / dt);
    return {dt, static_cast<std::size_t>(n)};
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> t(size());
    for (std::size_t k = 0; k < t.size(); ++k)
        t[k] = time(k);
    return t;
}

namespace {

bool use_dense(const SparseHamiltonian& H, const EvolveOptions& opt) {
    switch (opt.method) {
    case PropagationMethod::Dense:
        if (H.dimension() > opt.dense_threshold)
            throw DomainError("evolve: dense propagation requested above the dense threshold");
        return true;
    case PropagationMethod::Krylov:
        return false;
    case PropagationMethod::Auto:
        break;
    }
    return H.dimension() <= opt.dense_threshold;
}

void check_state_matches(const SparseHamiltonian& H, const QuantumState& psi) {
    if (!(H.basis() == psi.basis()))
        throw DomainError("evolve: state and Hamiltonian use different bases");
}

// psi(t) = V diag(e^{-i E t}) V^T psi0, done as two real products.
class SpectralSynth {
public:
    SpectralSynth(const EigenDecomposition& eig, const Eigen::VectorXcd& psi0) : eig_(eig) {
        cr_ = eig.eigenvectors.transpose() * psi0.real();
        ci_ = eig.eigenvectors.transpose() * psi0.imag();
    }
    Eigen::VectorXcd at(double t) {
        const Eigen::Index n = cr_.size();
        Eigen::VectorXd ar(n), ai(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double ph = -eig_.eigenvalues(k) * t;
            const double c = std::cos(ph), s = std::sin(ph);
            ar(k) = c * cr_(k) - s * ci_(k);
            ai(k) = s * cr_(k) + c * ci_(k);
        }
        Eigen::VectorXcd out(n);
        out.real() = eig_.eigenvectors * ar;
        out.imag() = eig_.eigenvectors * ai;
        return out;
    }

private:
    const EigenDecomposition& eig_;
    Eigen::VectorXd cr_, ci_;
};

} // namespace

void evolve_visit(const SparseHamiltonian& H, const QuantumState& psi0, const TimeGrid& grid,
                  const StateVisitor& visit, const EvolveOptions& options,
                  const EigenDecomposition* eig) {
    check_state_matches(H, psi0);
    if (!(grid.dt > 0.0) || !std::isfinite(grid.dt))
        throw DomainError("evolve: dt must be positive");

    if (use_dense(H, options) || (eig && options.method != PropagationMethod::Krylov)) {
        EigenDecomposition local;
        if (!eig) {
            local = diagonalize(H, std::max(options.dense_threshold, H.dimension()));
            eig = &local;
        }
        SpectralSynth synth(*eig, psi0.amplitudes());
        visit(0, 0.0, psi0);
        for (std::size_t k = 1; k < grid.size(); ++k) {
            const double t = grid.time(k);
            visit(k, t, QuantumState::unchecked(psi0.basis_ptr(), synth.at(t)));
        }
        return;
    }

    KrylovPropagator prop(H, options);
    Eigen::VectorXcd v = psi0.amplitudes();
    visit(0, 0.0, psi0);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        prop.advance(v, grid.dt, k);
        visit(k, grid.time(k), QuantumState::unchecked(psi0.basis_ptr(), v));
    }
}

std::vector<QuantumState> evolve(const SparseHamiltonian& H, const QuantumState& psi0,
                                 const TimeGrid& grid, const EvolveOptions& options) {
    std::vector<QuantumState> out;
    out.reserve(grid.size());
    evolve_visit(
        H, psi0, grid, [&](std::size_t, double, const QuantumState& s) { out.push_back(s); }, options);
    return out;
}

QuantumState propagate(const SparseHamiltonian& H, const QuantumState& psi, double t,
                       const EvolveOptions& options) {
    check_state_matches(H, psi);
    if (!std::isfinite(t))
        throw DomainError("propagate: non-finite time");
    if (t == 0.0)
        return psi;
    if (use_dense(H, options)) {
        const EigenDecomposition eig = diagonalize(H, std::max(options.dense_threshold, H.dimension()));
        SpectralSynth synth(eig, psi.amplitudes());
        return QuantumState::unchecked(psi.basis_ptr(), synth.at(t));
    }
    KrylovPropagator prop(H, options);
    Eigen::VectorXcd v = psi.amplitudes();
    prop.advance(v, t);
    return QuantumState::unchecked(psi.basis_ptr(), std::move(v));
}

Eigen::VectorXd number_operator(const FockBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.mode_count())
        throw DomainError("number_operator: mode " + std::to_string(mode) + " out of range");
    Eigen::VectorXd d(static_cast<Eigen::Index>(basis.dimension()));
    for (std::size_t i = 0; i < basis.dimension(); ++i)
        d(static_cast<Eigen::Index>(i)) = basis.occupation(i, mode);
    return d;
}

Eigen::VectorXd total_number_operator(const FockBasis& basis) {
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(basis.dimension()),
                                     basis.total_excitations());
}

double expectation(const QuantumState& state, const Eigen::VectorXd& diagonal_op) {
    if (diagonal_op.size() != state.amplitudes().size())
        throw DomainError("expectation: operator size does not match the state");
    return (state.amplitudes().cwiseAbs2().array() * diagonal_op.array()).sum();
}

double expectation(const QuantumState& state, const SparseHamiltonian& op) {
    if (!(op.basis() == state.basis()))
        throw DomainError("expectation: operator and state use different bases");
    Eigen::VectorXcd y;
    op.apply(state.amplitudes(), y);
    const std::complex<double> v = state.amplitudes().dot(y);
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
        throw DomainError("expectation: imaginary part " + std::to_string(v.imag()) +
                          " exceeds tolerance; operator is not Hermitian");
    return v.real();
}

} // namespace bhsim
