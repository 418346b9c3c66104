#include "bhsim/fitting.hpp"

#include "bhsim/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace bhsim {

namespace {

constexpr double kEtaMax = 5.0;
constexpr std::size_t kMinSamples = 20;

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

struct Problem {
    const std::vector<double>& t;
    const std::vector<double>& y;
    double omega_min;
};

void clamp_params(Vec5& p, double omega_min) {
    p(2) = std::max(p(2), omega_min);
    p(4) = std::clamp(p(4), 0.0, kEtaMax);
}

double cost(const Problem& pr, const Vec5& p) {
    double c = 0.0;
    for (std::size_t k = 0; k < pr.t.size(); ++k) {
        const double r = velocity_model(pr.t[k], p(0), p(1), p(2), p(3), p(4)) - pr.y[k];
        c += r * r;
    }
    return c;
}

void normal_equations(const Problem& pr, const Vec5& p, Mat5& JtJ, Vec5& Jtr) {
    JtJ.setZero();
    Jtr.setZero();
    const double A = p(1), W = p(2), phi = p(3), eta = p(4);
    for (std::size_t k = 0; k < pr.t.size(); ++k) {
        const double t = pr.t[k];
        const double wt = W * t;
        const double g = std::pow(wt, -eta);
        const double c = std::cos(wt + phi), s = std::sin(wt + phi);
        Vec5 j;
        j << 1.0, c * g, A * g * (-s * t - eta * c / W), -A * s * g, -A * c * g * std::log(wt);
        const double r = p(0) + A * c * g - pr.y[k];
        JtJ.noalias() += j * j.transpose();
        Jtr.noalias() += j * r;
    }
}

struct Outcome {
    Vec5 p;
    double cost;
    bool ok;
};

Outcome levenberg_marquardt(const Problem& pr, Vec5 p, int max_iter) {
    clamp_params(p, pr.omega_min);
    double c = cost(pr, p);
    double lambda = 1e-3;
    Mat5 JtJ;
    Vec5 Jtr;
    for (int it = 0; it < max_iter; ++it) {
        normal_equations(pr, p, JtJ, Jtr);
        if (!JtJ.allFinite() || !Jtr.allFinite())
            return {p, c, false};
        const double dmax = JtJ.diagonal().maxCoeff();
        bool accepted = false;
        while (!accepted) {
            Mat5 A = JtJ;
            for (int i = 0; i < 5; ++i)
                A(i, i) += lambda * std::max(JtJ(i, i), 1e-12 * dmax + 1e-300);
            Vec5 step = A.ldlt().solve(-Jtr);
            Vec5 trial = p + step;
            clamp_params(trial, pr.omega_min);
            const double ct = cost(pr, trial);
            if (std::isfinite(ct) && ct < c) {
                const double dc = c - ct;
                const double dp = (trial - p).norm();
                p = trial;
                c = ct;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (dc <= 1e-10 * c + 1e-300 || dp <= 1e-10 * (p.norm() + 1e-12))
                    return {p, c, true};
            } else {
                lambda *= 4.0;
                if (lambda > 1e16)
                    return {p, c, std::isfinite(c)};  // no descent direction left
            }
        }
    }
    return {p, c, false};
}

} // namespace

void FitWindow::validate() const {
    if (!(t_eps >= 0.0) || !(t_star > t_eps))
        throw DomainError("FitWindow: need 0 <= t_eps < t_star (got t_eps=" + std::to_string(t_eps) +
                          ", t_star=" + std::to_string(t_star) + ")");
}

double velocity_model(double t, double v_inf, double A, double omega, double phi, double eta) {
    return v_inf + A * std::cos(omega * t + phi) * std::pow(omega * t, -eta);
}

VelocityFit fit_velocity(const TimeSeries& v, const FitWindow& window, const FitOptions& options) {
    window.validate();
    if (v.times.size() != v.values.size())
        throw DomainError("fit_velocity: times and values differ in length");
    std::vector<double> t, y;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (v.times[k] > window.t_eps && v.times[k] < window.t_star && v.times[k] > 0.0) {
            t.push_back(v.times[k]);
            y.push_back(v.values[k]);
        }
    if (t.size() < kMinSamples)
        throw DomainError("fit_velocity: " + std::to_string(t.size()) +
                          " samples inside the window, need at least " + std::to_string(kMinSamples));

    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    const double omega_min = std::numbers::pi / (window.t_star - window.t_eps);
    const double omega_max = std::max(4.0 * std::max(std::abs(options.interaction_scale), 1.0), 2.0 * omega_min);
    const Problem pr{t, y, omega_min};

    constexpr int kOmegaStarts = 8;
    constexpr std::array<double, 4> kPhases{0.0, 0.5 * std::numbers::pi, std::numbers::pi,
                                            1.5 * std::numbers::pi};
    Outcome best{Vec5::Zero(), std::numeric_limits<double>::infinity(), false};
    double best_partial = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kOmegaStarts; ++i) {
        const double w0 = omega_min + (omega_max - omega_min) * i / (kOmegaStarts - 1);
        for (double phi0 : kPhases) {
            // v_inf and A from a linear fit with the oscillation shape held fixed
            const double eta0 = 0.5;
            double sb = 0, sbb = 0, sy = 0, sby = 0;
            for (std::size_t k = 0; k < t.size(); ++k) {
                const double b = std::cos(w0 * t[k] + phi0) * std::pow(w0 * t[k], -eta0);
                sb += b;
                sbb += b * b;
                sy += y[k];
                sby += b * y[k];
            }
            const double n = static_cast<double>(t.size());
            const double det = n * sbb - sb * sb;
            const double A0 = std::abs(det) > 1e-300 ? (n * sby - sb * sy) / det : 0.0;
            const double v0 = (sy - A0 * sb) / n;
            Vec5 p0;
            p0 << v0, A0, w0, phi0, eta0;
            const Outcome o = levenberg_marquardt(pr, p0, options.max_iterations);
            if (std::isfinite(o.cost))
                best_partial = std::min(best_partial, o.cost);
            if (!o.ok)
                continue;
            if (!best.ok) {
                best = o;
                continue;
            }
            const double tie = 1e-12 * std::max(best.cost, 1e-300);
            if (o.cost < best.cost - tie || (std::abs(o.cost - best.cost) <= tie && o.p(2) < best.p(2)))
                best = o;
        }
    }
    if (!best.ok)
        throw ConvergenceError("fit_velocity: no start converged", std::sqrt(best_partial));

    VelocityFit fit;
    fit.window = window;
    fit.samples = t.size();
    fit.converged = true;
    fit.residual_norm = std::sqrt(best.cost);
    Vec5 p = best.p;
    if (p(1) < 0.0) {
        p(1) = -p(1);
        p(3) += std::numbers::pi;
    }
    p(3) = std::fmod(p(3), 2.0 * std::numbers::pi);
    if (p(3) < 0.0)
        p(3) += 2.0 * std::numbers::pi;
    fit.v_inf = p(0);
    fit.amplitude = p(1);
    fit.omega = p(2);
    fit.phase = p(3);
    fit.eta = p(4);

    if (fit.amplitude < 1e-3 * std::abs(fit.v_inf) || fit.amplitude == 0.0) {
        fit.indeterminate = true;
        fit.v_inf = mean;
        fit.omega = fit.phase = fit.eta = std::numeric_limits<double>::quiet_NaN();
        double r2 = 0.0;
        for (double yk : y)
            r2 += (yk - mean) * (yk - mean);
        fit.residual_norm = std::sqrt(r2);
    }
    return fit;
}

FitWindow default_window(double /*U*/, int M, double v_estimate) {
    if (M < 2)
        throw DomainError("default_window: needs M >= 2");
    const double sqrt2 = std::numbers::sqrt2;
    const double ballistic = (M / 4.0) * sqrt2 / std::max(v_estimate, sqrt2);
    return {0.5, std::min(6.2 * M / 29.0, ballistic)};
}

} // namespace bhsim
