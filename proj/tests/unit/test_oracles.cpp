#include "doctest.h"

#include "bhsim/errors.hpp"
#include "bhsim/oracles.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace bhsim;
using namespace bhsim::oracles;

TEST_SUITE("oracles") {

TEST_CASE("mu_band values and limits") {
    CHECK(mu_band(-3.0, 3) == doctest::Approx(0.6056).epsilon(1e-4));
    CHECK(mu_band(-1e-6, 2) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(mu_band(-1e4, 3) == doctest::Approx(4.0 / (1e4 * 2)).epsilon(1e-6));
    CHECK(mu_band(3.0, 3) == mu_band(-3.0, 3));
    double prev = mu_band(-0.1, 4);
    for (double u = 0.2; u < 20.0; u += 0.1) {
        const double cur = mu_band(-u, 4);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS_AS(mu_band(-3.0, 1), DomainError);
    CHECK_THROWS_AS(mu_band(0.0, 3), DomainError);
}

TEST_CASE("soliton width") {
    CHECK(soliton_width(10.0, -3.0, 3) == doctest::Approx(0.0884).epsilon(1e-3));
    CHECK(soliton_width(7.0, -100.0, 1) == doctest::Approx(std::sqrt(2.0) / 7.0));
    CHECK(soliton_width(1e9, -3.0, 3) < 1e-8);
    CHECK_THROWS_AS(soliton_width(0.0, 0.0, 3), DomainError);
    CHECK_THROWS_AS(soliton_width(-1.0, 0.0, 1), DomainError);
}

TEST_CASE("neighbour amplitudes reproduce the width") {
    for (int N : {1, 2, 3, 5})
        for (double mu : {5.0, 20.0}) {
            const double a = soliton_neighbour_amplitude(mu, -3.0, N);
            CHECK(a < 0.0);
            const double w = soliton_width(mu, -3.0, N);
            CHECK(2.0 * a * a == doctest::Approx(N * w * w));
        }
}

TEST_CASE("effective hopping") {
    CHECK(j_tilde(-5.0, 1) == 1.0);
    CHECK(j_tilde(-10.0, 2) == doctest::Approx(0.2));
    CHECK(j_tilde(-10.0, 3) == doctest::Approx(0.015));
    CHECK(j_tilde(-10.0, 2, 2.0) == doctest::Approx(2.0 * 2 * 0.2));
    CHECK_THROWS_AS(j_tilde(0.0, 2), DomainError);
    CHECK_THROWS_AS(j_tilde(-1.0, 0), DomainError);
}

TEST_CASE("critical interaction") {
    CHECK(u_critical(2) == 4.0);
    CHECK(u_critical(3) == doctest::Approx(std::sqrt(3.0)));
    // relative distance to e J / N shrinks steadily; 12.7% at N = 20, under 5% from N = 58
    double prev = 1e9;
    for (int N = 5; N <= 200; N += 5) {
        const double rel = u_critical(N) / (std::numbers::e / N) - 1.0;
        CHECK(rel > 0.0);
        CHECK(rel < prev);
        prev = rel;
    }
    CHECK(u_critical(20) / (std::numbers::e / 20) - 1.0 == doctest::Approx(0.1268).epsilon(1e-3));
    CHECK(u_critical(60) / (std::numbers::e / 60) - 1.0 < 0.05);
    CHECK_THROWS_AS(u_critical(1), DomainError);
}

TEST_CASE("tight-binding energies") {
    const auto e3 = tight_binding_energies(3, 1.0, 0.5);
    CHECK(e3[1] == doctest::Approx(0.5));
    for (double e : tight_binding_energies(4, 1.0, 0.5))
        CHECK(std::abs(e - 0.5) > 0.1);
    const auto e5 = tight_binding_energies(5);
    const double ref[] = {-std::sqrt(3.0), -1.0, 0.0, 1.0, std::sqrt(3.0)};
    for (int k = 0; k < 5; ++k)
        CHECK(e5[static_cast<std::size_t>(k)] == doctest::Approx(ref[k]).epsilon(1e-12));
    CHECK_THROWS_AS(tight_binding_energies(0), DomainError);
}

TEST_CASE("resonant source-drain densities") {
    const double Jp = 0.1;
    const double t_half = std::numbers::pi * 2.0 / (2.0 * Jp);  // M = 3
    const auto r = resonant_sd_densities(3, Jp, 4, {0.0, t_half, 7.7, 19.1});
    CHECK(r.n_source[0] == 4.0);
    CHECK(r.n_drain[0] == 0.0);
    CHECK(r.n_chain[0] == 0.0);
    CHECK(t_half == doctest::Approx(31.4159).epsilon(1e-5));
    CHECK(r.n_source[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.n_drain[1] == doctest::Approx(4.0));
    for (std::size_t k = 0; k < r.times.size(); ++k)
        CHECK(r.n_source[k] + r.n_drain[k] + r.n_chain[k] == doctest::Approx(4.0).epsilon(1e-14));
    const auto peak = resonant_sd_densities(3, Jp, 4, {t_half / 2});
    CHECK(peak.n_chain[0] == doctest::Approx(2.0));
    CHECK_THROWS_AS(resonant_sd_densities(4, Jp, 4, {0.0}), DomainError);
}

TEST_CASE("even-chain reduction") {
    const auto r = off_resonant_sd(4, 0.1);
    CHECK(r.beta == doctest::Approx(0.1947).epsilon(1e-3));
    CHECK(r.omega_plus == doctest::Approx(0.3090 * 2.0372).epsilon(1e-3));
    CHECK(r.omega_minus == doctest::Approx(0.0115).epsilon(1e-2));
    CHECK(r.omega_minus_corrected == doctest::Approx(0.009804).epsilon(1e-4));
    CHECK(r.omega_minus_corrected < r.omega_minus);
    CHECK(r.omega_plus > r.omega_minus);
    CHECK(r.alpha_beat > 0.0);
    CHECK(r.alpha_beat < 1.0);
    CHECK(r.parity_sign == 1);
    CHECK(off_resonant_sd(2, 0.1).omega_minus_corrected == doctest::Approx(0.01 / 1.01));
    CHECK(off_resonant_sd(2, 0.1).parity_sign == -1);

    const auto weak = off_resonant_sd(6, 1e-6);
    CHECK(weak.omega_minus < 1e-10);
    CHECK(weak.alpha_beat == doctest::Approx(1.0));

    const auto d = r.densities(4, {0.0, 3.0, 50.0, 300.0});
    CHECK(d.n_source[0] == doctest::Approx(4.0));
    for (std::size_t k = 0; k < d.times.size(); ++k) {
        const double expect = 4.0 * (1 - r.alpha_beat * r.alpha_beat) *
                              std::pow(std::sin((r.omega_plus + r.omega_minus_corrected) * d.times[k] / 2), 2);
        CHECK(d.n_chain[k] == doctest::Approx(expect).epsilon(1e-9));
    }
    const auto du = r.densities(4, {100.0}, false);
    const auto dc = r.densities(4, {100.0}, true);
    CHECK(du.n_source[0] != dc.n_source[0]);
    CHECK_THROWS_AS(off_resonant_sd(3, 0.1), DomainError);
}

TEST_CASE("two-level frequencies match the eigenvalues of the four-level model") {
    // Resonators at zero coupled through the two chain levels nearest zero energy.
    for (int M = 2; M <= 100; M += 2) {
        const double Jp = 0.1;
        const auto r = off_resonant_sd(M, Jp);
        const int kbar = M / 2;
        const double eps = 2.0 * std::cos(std::numbers::pi * kbar / (M + 1));
        const double g = Jp * std::sin(std::numbers::pi * kbar / (M + 1)) * std::sqrt(2.0 / (M + 1));
        const double c = (kbar % 2 == 0) ? 1.0 : -1.0;  // drain overlap sign of level kbar
        // basis: S, D, level kbar (energy eps), level kbar+1 (energy -eps)
        Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
        H(2, 2) = eps;
        H(3, 3) = -eps;
        H(0, 2) = H(2, 0) = g;
        H(0, 3) = H(3, 0) = g;
        H(1, 2) = H(2, 1) = -c * g;
        H(1, 3) = H(3, 1) = c * g;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(H);
        const auto ev = es.eigenvalues();
        // spectrum symmetric about zero
        CHECK(ev(0) == doctest::Approx(-ev(3)).epsilon(1e-12));
        CHECK(ev(1) == doctest::Approx(-ev(2)).epsilon(1e-12));
        CHECK(ev(2) == doctest::Approx(r.omega_minus).epsilon(1e-8));
        CHECK(ev(3) == doctest::Approx(r.omega_plus).epsilon(1e-8));
    }
}

TEST_CASE("resonance detuning and parity crossover") {
    CHECK(multiphoton_resonance_detuning(-10.0, 2) == -5.0);
    CHECK(multiphoton_resonance_detuning(-10.0, 1) == 0.0);
    CHECK(multiphoton_resonance_detuning(-4.0, 3) == -4.0);
    CHECK(parity_crossover(8, 0.1) == doctest::Approx(0.3));
    CHECK(parity_crossover(99, 0.1) == doctest::Approx(1.0));
    CHECK(parity_crossover(5, 0.0) == 0.0);
}

}
