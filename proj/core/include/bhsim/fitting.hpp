#pragma once

/**
 * @file fitting.hpp
 * @brief Asymptotic expansion velocity from a damped-oscillation fit
 *        v(t) = v_inf + A cos(Omega t + phi) / (Omega t)^eta.
 */

#include "bhsim/observables.hpp"

#include <cstddef>

namespace bhsim {

struct FitWindow {
    double t_eps = 0.5;
    double t_star = 6.2;

    void validate() const;
};

struct FitOptions {
    /// |U| in units of J; the initial-Omega grid runs up to 4 max(|U|, J).
    double interaction_scale = 0.0;
    int max_iterations = 1000;
};

struct VelocityFit {
    double v_inf = 0.0;
    double amplitude = 0.0;
    double omega = 0.0;  ///< NaN when indeterminate
    double phase = 0.0;  ///< in [0, 2pi); NaN when indeterminate
    double eta = 0.0;    ///< NaN when indeterminate
    double residual_norm = 0.0;
    FitWindow window;
    std::size_t samples = 0;
    bool converged = false;
    /// |A| fell below 1e-3 v_inf: Omega, phi, eta carry no information and v_inf is the window mean.
    bool indeterminate = false;
};

double velocity_model(double t, double v_inf, double A, double omega, double phi, double eta);

/// Multi-start Levenberg-Marquardt over the samples with t_eps < t < t_star.
/// Throws DomainError with fewer than 20 samples in the window and
/// ConvergenceError (carrying the best residual) when every start fails.
VelocityFit fit_velocity(const TimeSeries& v, const FitWindow& window, const FitOptions& options = {});

/// Steady-state window for a chain of M sites (J = 1): t_eps = 0.5 and
/// t_star = min(6.2 M/29, (M/4) sqrt2 / max(v_estimate, sqrt2)).
FitWindow default_window(double U, int M, double v_estimate);

} // namespace bhsim
