#include "bhsim/oracles.hpp"

#include "bhsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bhsim::oracles {

double mu_band(double U, int N, double J) {
    if (N < 2)
        throw DomainError("mu_band: needs N >= 2");
    if (U == 0.0)
        throw DomainError("mu_band: needs U != 0");
    const double a = std::abs(U) * (N - 1);
    const double r = 16.0 * J * J / (a * a);
    // a/2 (sqrt(1+r) - 1) rewritten to avoid cancellation at large |U|
    return 0.5 * a * r / (std::sqrt(1.0 + r) + 1.0);
}

double soliton_width(double mu_pin, double U, int N, double J) {
    const double d = mu_pin + std::abs(U) * (N - 1);
    if (!(d > 0.0))
        throw DomainError("soliton_width: mu_pin + |U|(N-1) must be positive");
    return std::numbers::sqrt2 * J / d;
}

double soliton_neighbour_amplitude(double mu_pin, double U, int N, double J) {
    const double d = mu_pin + std::abs(U) * (N - 1);
    if (!(d > 0.0))
        throw DomainError("soliton_neighbour_amplitude: mu_pin + |U|(N-1) must be positive");
    return -J * std::sqrt(double(N)) / d;
}

double j_tilde(double U, int N, double J) {
    if (N < 1)
        throw DomainError("j_tilde: needs N >= 1");
    if (N == 1)
        return J;
    if (U == 0.0)
        throw DomainError("j_tilde: needs U != 0 for N >= 2");
    return J * N * std::exp((N - 1) * std::log(J / std::abs(U)) - std::lgamma(double(N)));
}

double u_critical(int N, double J) {
    if (N < 2)
        throw DomainError("u_critical: needs N >= 2");
    return J * std::exp((std::log(2.0 * N) - std::lgamma(double(N))) / (N - 1));
}

std::vector<double> tight_binding_energies(int M, double J, double omega01) {
    if (M < 1)
        throw DomainError("tight_binding_energies: needs M >= 1");
    std::vector<double> e(static_cast<std::size_t>(M));
    for (int k = 1; k <= M; ++k)
        e[static_cast<std::size_t>(k - 1)] = omega01 + 2.0 * J * std::cos(std::numbers::pi * k / (M + 1));
    std::sort(e.begin(), e.end());
    return e;
}

SourceDrainDensities resonant_sd_densities(int M, double Jprime, int N_total,
                                           const std::vector<double>& times) {
    if (M < 1 || M % 2 == 0)
        throw DomainError("resonant_sd_densities: M must be odd (M=" + std::to_string(M) +
                          "); use off_resonant_sd for even chains");
    const double w = Jprime / std::sqrt(double(M + 1));
    SourceDrainDensities out;
    out.times = times;
    for (double t : times) {
        const double c = std::cos(w * t), s = std::sin(w * t), s2 = std::sin(2.0 * w * t);
        out.n_source.push_back(N_total * c * c * c * c);
        out.n_drain.push_back(N_total * s * s * s * s);
        out.n_chain.push_back(N_total * s2 * s2 / 2.0);
    }
    return out;
}

SourceDrainDensities ParityReduction::densities(int N_total, const std::vector<double>& times,
                                                bool corrected) const {
    const double wm = corrected ? omega_minus_corrected : omega_minus;
    const double a = 0.5 * (1.0 + alpha_beat), b = 0.5 * (1.0 - alpha_beat);
    SourceDrainDensities out;
    out.times = times;
    for (double t : times) {
        const double s = a * std::cos(wm * t) + b * std::cos(omega_plus * t);
        const double d = a * std::sin(wm * t) - b * std::sin(omega_plus * t);
        out.n_source.push_back(N_total * s * s);
        out.n_drain.push_back(N_total * d * d);
        out.n_chain.push_back(N_total * (1.0 - s * s - d * d));
    }
    return out;
}

ParityReduction off_resonant_sd(int M, double Jprime, double J) {
    if (M < 2 || M % 2 != 0)
        throw DomainError("off_resonant_sd: M must be even (M=" + std::to_string(M) +
                          "); use resonant_sd_densities for odd chains");
    const double x = std::numbers::pi / (2.0 * (M + 1));
    ParityReduction r;
    r.M = M;
    r.Jprime = Jprime;
    r.J = J;
    r.beta = (Jprime / J) / std::tan(x) * std::sqrt(2.0 / (M + 1));
    const double root = std::sqrt(2.0 * r.beta * r.beta + 1.0);
    r.omega_plus = J * std::sin(x) * (root + 1.0);
    // root - 1 = 2 beta^2 / (root + 1), stable for small beta
    r.omega_minus = J * std::sin(x) * 2.0 * r.beta * r.beta / (root + 1.0);
    r.alpha_beat = (r.omega_plus - r.omega_minus) / (r.omega_plus + r.omega_minus);
    r.omega_minus_corrected = Jprime * Jprime / (J * (1.0 + M * Jprime * Jprime / (2.0 * J * J)));
    r.parity_sign = (M / 2) % 2 == 0 ? 1 : -1;
    return r;
}

double multiphoton_resonance_detuning(double U, int N) {
    if (N < 1)
        throw DomainError("multiphoton_resonance_detuning: needs N >= 1");
    return U * (N - 1) / 2.0;
}

double parity_crossover(int M, double Jprime, double J) {
    if (M < 1)
        throw DomainError("parity_crossover: needs M >= 1");
    return std::sqrt(double(M + 1)) * Jprime / J;
}

} // namespace bhsim::oracles
