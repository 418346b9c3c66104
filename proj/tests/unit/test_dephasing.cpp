#include "doctest.h"

#include "bhsim/dephasing.hpp"
#include "bhsim/errors.hpp"

#include <cmath>

using namespace bhsim;

namespace {

ProtocolSpec small_stack() {
    ProtocolSpec spec;
    spec.kind = ProtocolKind::StackRelease;
    spec.chain = ChainParams::uniform(9, 1.0, -3.0);
    spec.N = 2;
    spec.site = 5;
    spec.settings.grid = TimeGrid::until(4.0, 0.05);
    return spec;
}

} // namespace

TEST_SUITE("dephasing") {

TEST_CASE("zero spread reproduces the clean parameters") {
    DephasingParams p{0.0, 1, 42, 100.0};
    auto rng = trajectory_rng(42, 0);
    const auto s = sample_disorder(p, 6, 1.0, rng);
    for (double w : s.omega)
        CHECK(w == 100.0);
    for (double j : s.bond_J)
        CHECK(j == 1.0);
    CHECK(s.bond_J.size() == 5);
}

TEST_CASE("sample mean converges to omega01") {
    DephasingParams p{0.05, 1, 7, 100.0};
    double sum = 0.0;
    int count = 0;
    for (std::uint64_t k = 0; k < 500; ++k) {
        auto rng = trajectory_rng(7, k);
        for (double w : sample_disorder(p, 20, 1.0, rng).omega) {
            sum += w;
            ++count;
        }
    }
    REQUIRE(count == 10000);
    CHECK(std::abs(sum / count - 100.0) <= 3.0 * 0.05 / 100.0);
}

TEST_CASE("coupling rescaling is first order in sigma over omega01") {
    DephasingParams p{0.05, 1, 11, 100.0};
    auto rng = trajectory_rng(11, 3);
    const auto s = sample_disorder(p, 19, 1.0, rng);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.bond_J.size(); ++i) {
        const double expect = std::sqrt(s.omega[i] * s.omega[i + 1]) / 100.0;
        CHECK(s.bond_J[i] == doctest::Approx(expect).epsilon(1e-15));
        worst = std::max(worst, std::abs(s.bond_J[i] - 1.0));
    }
    CHECK(worst < 4.0 * 5e-4);
    CHECK(worst > 1e-6);
}

TEST_CASE("non-positive draws are resampled and counted") {
    DephasingParams p{2.0, 1, 5, 1.0};
    int resamples = 0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        auto rng = trajectory_rng(5, k);
        const auto s = sample_disorder(p, 10, 1.0, rng);
        for (double w : s.omega)
            CHECK(w > 0.0);
        resamples += s.resamples;
    }
    CHECK(resamples > 0);
}

TEST_CASE("streams are reproducible and distinct") {
    DephasingParams p{0.1, 1, 99, 100.0};
    auto a = trajectory_rng(99, 4), b = trajectory_rng(99, 4), c = trajectory_rng(99, 5), d = trajectory_rng(98, 4);
    const auto sa = sample_disorder(p, 12, 1.0, a), sb = sample_disorder(p, 12, 1.0, b);
    CHECK(sa.omega == sb.omega);
    CHECK(sa.bond_J == sb.bond_J);
    CHECK(sample_disorder(p, 12, 1.0, c).omega != sa.omega);
    CHECK(sample_disorder(p, 12, 1.0, d).omega != sa.omega);
}

TEST_CASE("parameter validation") {
    auto rng = trajectory_rng(0, 0);
    CHECK_THROWS_AS(sample_disorder({-0.1, 1, 0, 100.0}, 5, 1.0, rng), DomainError);
    CHECK_THROWS_AS(sample_disorder({0.1, 0, 0, 100.0}, 5, 1.0, rng), DomainError);
    CHECK_THROWS_AS(sample_disorder({0.1, 1, 0, 0.0}, 5, 1.0, rng), DomainError);
    auto spec = small_stack();
    spec.kind = ProtocolKind::SourceDrain;
    CHECK_THROWS_AS(run_dephased_protocol(spec, {0.1, 2, 0, 100.0}), DomainError);
}

TEST_CASE("noiseless ensemble equals the clean run") {
    const auto spec = small_stack();
    const auto clean = run_protocol(spec);
    const auto ens = run_dephased_protocol(spec, {0.0, 5, 1, 100.0});
    CHECK((ens.mean.density - clean.density).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(ens.samples.size() == 5);
    CHECK(ens.trajectories.empty());
}

TEST_CASE("ensemble averages conserve the particle number and are deterministic") {
    const auto spec = small_stack();
    const DephasingParams p{0.3, 6, 2024, 100.0};
    DephasingOptions keep;
    keep.keep_trajectories = true;
    const auto a = run_dephased_protocol(spec, p, keep);
    DephasingOptions threaded;
    threaded.threads = 3;
    const auto b = run_dephased_protocol(spec, p, threaded);
    CHECK((a.mean.density - b.mean.density).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index k = 0; k < a.mean.density.rows(); ++k)
        CHECK(a.mean.density.row(k).sum() == doctest::Approx(2.0).epsilon(1e-10));
    REQUIRE(a.trajectories.size() == 6);
    for (const auto& t : a.trajectories) {
        const auto& E = t.scalar("energy");
        for (double e : E)
            CHECK(std::abs(e - E[0]) <= 1e-8 * std::max(1.0, std::abs(E[0])));
    }
    CHECK(std::get<std::int64_t>(a.mean.metadata.at("n_trajectories")) == 6);
}

TEST_CASE("vanishing disorder approaches the clean result") {
    const auto spec = small_stack();
    const auto clean = run_protocol(spec);
    double prev = 1e9;
    for (double sigma : {0.3, 0.03, 0.003}) {
        const auto e = run_dephased_protocol(spec, {sigma, 4, 8, 100.0});
        const double gap = (e.mean.density - clean.density).cwiseAbs().maxCoeff();
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-3);
}

}
