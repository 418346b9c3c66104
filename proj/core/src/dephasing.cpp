#include "bhsim/dephasing.hpp"

#include "bhsim/errors.hpp"
#include "bhsim/parallel.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace bhsim {

void DephasingParams::validate() const {
    if (!(sigma_omega >= 0.0) || !std::isfinite(sigma_omega))
        throw DomainError("DephasingParams: sigma_omega must be finite and >= 0");
    if (n_trajectories < 1)
        throw DomainError("DephasingParams: n_trajectories must be >= 1");
    if (!(omega01 > 0.0) || !std::isfinite(omega01))
        throw DomainError("DephasingParams: omega01 must be positive");
}

std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

DisorderSample sample_disorder(const DephasingParams& params, int M, double J, std::mt19937_64& rng) {
    params.validate();
    if (M < 1)
        throw DomainError("sample_disorder: M must be >= 1");
    DisorderSample s;
    s.omega.resize(static_cast<std::size_t>(M));
    if (params.sigma_omega == 0.0) {
        std::fill(s.omega.begin(), s.omega.end(), params.omega01);
    } else {
        std::normal_distribution<double> gauss(params.omega01, params.sigma_omega);
        for (auto& w : s.omega) {
            w = gauss(rng);
            while (w <= 0.0) {
                ++s.resamples;
                w = gauss(rng);
            }
        }
    }
    s.bond_J.resize(static_cast<std::size_t>(M > 1 ? M - 1 : 0));
    for (std::size_t i = 0; i + 1 < s.omega.size(); ++i)
        s.bond_J[i] = J * std::sqrt(s.omega[i] * s.omega[i + 1]) / params.omega01;
    return s;
}

EnsembleResult run_dephased_protocol(const ProtocolSpec& spec, const DephasingParams& params,
                                     const DephasingOptions& options) {
    params.validate();
    if (spec.kind != ProtocolKind::PinRelease && spec.kind != ProtocolKind::StackRelease &&
        spec.kind != ProtocolKind::Ramp)
        throw DomainError("run_dephased_protocol: supports pin_release, stack_release and ramp, not " +
                          to_string(spec.kind));
    spec.chain.validate();
    const int M = spec.chain.site_count();
    const auto n = static_cast<std::size_t>(params.n_trajectories);

    EnsembleResult out;
    out.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto rng = trajectory_rng(params.seed, k);
        out.samples[k] = sample_disorder(params, M, spec.chain.J, rng);
        out.total_resamples += out.samples[k].resamples;
    }

    std::vector<std::optional<ProtocolResult>> runs(n);
    parallel_for(n, options.threads, [&](std::size_t k) {
        ProtocolSpec s = spec;
        const DisorderSample& d = out.samples[k];
        // Frequencies enter relative to omega01 so the propagator never sees the large common offset.
        for (int i = 0; i < M; ++i)
            s.chain.mu[static_cast<std::size_t>(i)] += d.omega[static_cast<std::size_t>(i)] - params.omega01;
        s.chain.bond_J.resize(d.bond_J.size());
        for (std::size_t b = 0; b < d.bond_J.size(); ++b)
            s.chain.bond_J[b] = spec.chain.bond(static_cast<int>(b)) * d.bond_J[b] / spec.chain.J;
        runs[k] = run_protocol(s);
    });

    // Pointwise mean in trajectory-index order.
    ProtocolResult mean = *runs[0];
    for (std::size_t k = 1; k < n; ++k) {
        mean.density += runs[k]->density;
        for (std::size_t c = 0; c < mean.scalars.size(); ++c) {
            auto& acc = mean.scalars[c].second;
            const auto& add = runs[k]->scalars[c].second;
            for (std::size_t t = 0; t < acc.size(); ++t)
                acc[t] += add[t];
        }
    }
    const double inv = 1.0 / static_cast<double>(n);
    mean.density *= inv;
    for (auto& [name, series] : mean.scalars)
        for (double& v : series)
            v *= inv;

    // Width and velocity of the averaged density rather than averages of per-run widths.
    if (mean.has_scalar("R")) {
        const int center = spec.site;
        const int N = spec.N;
        auto& R = mean.scalar("R");
        for (std::size_t t = 0; t < R.size(); ++t)
            R[t] = rmsd(mean.profile(t), center, N);
        if (R.size() >= 3)
            mean.scalar("v") = expansion_velocity(TimeSeries{mean.times, R}).values;
    }

    mean.metadata["sigma_omega"] = params.sigma_omega;
    mean.metadata["n_trajectories"] = std::int64_t{params.n_trajectories};
    mean.metadata["seed"] = std::to_string(params.seed);
    mean.metadata["omega01"] = params.omega01;
    mean.metadata["resamples"] = std::int64_t{out.total_resamples};
    mean.metadata.erase("hamiltonian");
    mean.metadata.erase("ground_energy");
    out.mean = std::move(mean);
    if (options.keep_trajectories)
        for (auto& r : runs)
            out.trajectories.push_back(std::move(*r));
    return out;
}

} // namespace bhsim
