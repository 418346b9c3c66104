#include "bhsim/errors.hpp"
#include "bhsim/evolution.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace bhsim {

namespace {

using Tridiag = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>;

// Coefficients of e^{-i T tau} e_1 in the Lanczos basis.
Eigen::VectorXcd krylov_coefficients(const Tridiag& eig, double tau) {
    const Eigen::Index m = eig.eigenvalues().size();
    Eigen::VectorXcd z(m);
    for (Eigen::Index k = 0; k < m; ++k)
        z(k) = std::polar(eig.eigenvectors()(0, k), -eig.eigenvalues()(k) * tau);
    return eig.eigenvectors().cast<std::complex<double>>() * z;
}

} // namespace

KrylovPropagator::KrylovPropagator(const SparseHamiltonian& H, const EvolveOptions& options)
    : H_(H), opt_(options), hnorm_(std::max(H.norm_bound(), 1e-300)) {
    if (opt_.krylov_min_dim < 2 || opt_.krylov_max_dim < opt_.krylov_min_dim)
        throw DomainError("KrylovPropagator: need 2 <= krylov_min_dim <= krylov_max_dim");
    if (!(opt_.krylov_tolerance > 0.0))
        throw DomainError("KrylovPropagator: tolerance must be positive");
}

void KrylovPropagator::advance(Eigen::VectorXcd& v, double tau, std::size_t step_index) {
    const double nrm = v.norm();
    if (tau == 0.0 || nrm == 0.0)
        return;
    const auto dim = static_cast<int>(H_.dimension());
    const int m_cap = std::min(opt_.krylov_max_dim, dim);
    const double tol = opt_.krylov_tolerance;
    const double min_step = std::ldexp(std::abs(tau), -30);

    if (basis_.size() < static_cast<std::size_t>(m_cap + 1))
        basis_.resize(static_cast<std::size_t>(m_cap + 1));

    std::vector<double> alpha, beta;
    double remaining = tau;
    while (remaining != 0.0) {
        alpha.clear();
        beta.clear();
        basis_[0] = v / v.norm();
        const double scale = v.norm();

        double step = 0.0;
        Eigen::VectorXcd coef;
        for (int j = 0;; ++j) {
            H_.apply(basis_[j], w_);
            const double a = basis_[j].dot(w_).real();
            w_ -= a * basis_[j];
            if (j > 0)
                w_ -= beta.back() * basis_[j - 1];
            for (int i = 0; i <= j; ++i)
                w_ -= basis_[i].dot(w_) * basis_[i];
            const double b = w_.norm();
            alpha.push_back(a);
            const int m = j + 1;
            const bool breakdown = b <= 1e-13 * hnorm_ || m >= dim;

            if (breakdown || m >= opt_.krylov_min_dim || m >= m_cap) {
                Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
                Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                          : Eigen::VectorXd();
                Tridiag eig;
                eig.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
                auto error_at = [&](double t, Eigen::VectorXcd& c) {
                    c = krylov_coefficients(eig, t);
                    return breakdown ? 0.0 : b * std::abs(c(m - 1));
                };
                if (error_at(remaining, coef) <= tol) {
                    step = remaining;
                    break;
                }
                if (m >= m_cap) {
                    double t = remaining;
                    do {
                        t *= 0.5;
                        if (std::abs(t) < min_step)
                            throw ConvergenceError("Krylov propagation stalled at step " +
                                                       std::to_string(step_index) +
                                                       ": substep fell below 2^-30 dt",
                                                   error_at(t, coef));
                    } while (error_at(t, coef) > tol);
                    step = t;
                    ++substeps_;
                    break;
                }
            }
            beta.push_back(b);
            basis_[j + 1] = w_ / b;
        }

        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(v.size());
        for (Eigen::Index k = 0; k < coef.size(); ++k)
            next += coef(k) * basis_[static_cast<std::size_t>(k)];
        v = scale * next;
        remaining -= step;
        if (std::abs(remaining) <= 1e-15 * std::abs(tau))
            remaining = 0.0;
    }
}

GroundState ground_state(const SparseHamiltonian& H, const GroundStateOptions& options) {
    const std::size_t dim = H.dimension();
    Eigen::VectorXd x;
    double energy = 0.0;

    if (dim <= options.dense_threshold) {
        const EigenDecomposition eig = diagonalize(H, options.dense_threshold);
        x = eig.eigenvectors.col(0);
        energy = eig.eigenvalues(0);
    } else {
        const double hnorm = std::max(H.norm_bound(), 1e-300);
        const int k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(options.subspace), dim));
        std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        x.resize(static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x(i) = uni(rng);
        x.normalize();

        std::vector<Eigen::VectorXd> V(static_cast<std::size_t>(k));
        Eigen::VectorXd w, hx;
        double residual = 0.0;
        bool converged = false;
        for (int restart = 0; restart < options.max_restarts && !converged; ++restart) {
            std::vector<double> alpha, beta;
            V[0] = x;
            int m = 0;
            for (int j = 0; j < k; ++j) {
                H.apply(V[static_cast<std::size_t>(j)], w);
                const double a = V[static_cast<std::size_t>(j)].dot(w);
                alpha.push_back(a);
                m = j + 1;
                if (j + 1 == k)
                    break;
                for (int i = 0; i <= j; ++i)
                    w -= V[static_cast<std::size_t>(i)].dot(w) * V[static_cast<std::size_t>(i)];
                const double b = w.norm();
                if (b <= 1e-13 * hnorm)
                    break;
                beta.push_back(b);
                V[static_cast<std::size_t>(j + 1)] = w / b;
            }
            Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
            Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                      : Eigen::VectorXd();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
            eig.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
            energy = eig.eigenvalues()(0);
            x.setZero(static_cast<Eigen::Index>(dim));
            for (int i = 0; i < m; ++i)
                x += eig.eigenvectors()(i, 0) * V[static_cast<std::size_t>(i)];
            x.normalize();
            H.apply(x, hx);
            energy = x.dot(hx);
            residual = (hx - energy * x).norm();
            converged = residual <= options.relative_tolerance * hnorm;
        }
        if (!converged)
            throw ConvergenceError("ground_state: Lanczos did not reach the residual tolerance",
                                   residual / hnorm);
    }

    Eigen::Index imax = 0;
    x.cwiseAbs().maxCoeff(&imax);
    if (x(imax) < 0.0)
        x = -x;
    return {energy, QuantumState::normalized(H.basis_ptr(), x.cast<std::complex<double>>())};
}

} // namespace bhsim
