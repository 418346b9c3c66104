#include "bhsim/observables.hpp"

#include "bhsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bhsim {

double DensityProfile::chain_total() const {
    return std::accumulate(per_site.begin(), per_site.end(), 0.0);
}

DensityProfile site_densities(const QuantumState& state, double time) {
    const FockBasis& B = state.basis();
    const int modes = B.mode_count();
    std::vector<double> mode_n(static_cast<std::size_t>(modes), 0.0);
    const Eigen::VectorXcd& a = state.amplitudes();
    for (std::size_t i = 0; i < B.dimension(); ++i) {
        const double p = std::norm(a(static_cast<Eigen::Index>(i)));
        if (p == 0.0)
            continue;
        auto occ = B.occupations(i);
        for (int k = 0; k < modes; ++k)
            mode_n[static_cast<std::size_t>(k)] += p * occ[static_cast<std::size_t>(k)];
    }

    DensityProfile out;
    out.time = time;
    const int M = B.chain_sites();
    out.per_site.resize(static_cast<std::size_t>(M));
    for (int s = 1; s <= M; ++s)
        out.per_site[static_cast<std::size_t>(s - 1)] = mode_n[static_cast<std::size_t>(B.chain_mode(s))];
    if (B.layout() == Layout::SourceChainDrain) {
        out.has_resonators = true;
        out.n_source = mode_n.front();
        out.n_drain = mode_n.back();
    }
    return out;
}

double rmsd(const DensityProfile& profile, int pin_site, int N) {
    if (N <= 0)
        throw DomainError("rmsd: N must be positive");
    double r2 = 0.0;
    for (int i = 1; i <= profile.site_count(); ++i) {
        const double d = i - pin_site;
        r2 += profile.at(i) * d * d;
    }
    return std::sqrt(std::max(0.0, r2 / N));
}

TimeSeries expansion_velocity(const TimeSeries& width) {
    const std::size_t n = width.size();
    if (n < 3 || width.times.size() != n)
        throw DomainError("expansion_velocity: need at least 3 samples on a common grid");
    const double dt = width.times[1] - width.times[0];
    if (!(dt > 0.0))
        throw DomainError("expansion_velocity: time grid must be increasing");
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(width.times[k] - width.times[k - 1] - dt) > 1e-9 * std::max(1.0, std::abs(width.times[k])))
            throw DomainError("expansion_velocity: time grid is not uniform");

    const double r0 = width.values[0] * width.values[0];
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k)
        g[k] = std::sqrt(std::max(0.0, width.values[k] * width.values[k] - r0));

    TimeSeries v{width.times, std::vector<double>(n)};
    v.values[0] = (g[1] - g[0]) / dt;
    v.values[n - 1] = (g[n - 1] - g[n - 2]) / dt;
    for (std::size_t k = 1; k + 1 < n; ++k)
        v.values[k] = (g[k + 1] - g[k - 1]) / (2.0 * dt);
    return v;
}

TimeSeries expansion_velocity(const std::vector<DensityProfile>& series, int pin_site, int N) {
    TimeSeries width;
    width.times.reserve(series.size());
    width.values.reserve(series.size());
    for (const auto& p : series) {
        width.times.push_back(p.time);
        width.values.push_back(rmsd(p, pin_site, N));
    }
    return expansion_velocity(width);
}

double fidelity_stack_subspace(const QuantumState& state, int N) {
    if (N <= 0)
        throw DomainError("fidelity_stack_subspace: N must be positive");
    const FockBasis& B = state.basis();
    if (B.layout() == Layout::ChainOnly && N != B.total_excitations())
        throw DomainError("fidelity_stack_subspace: N must equal the sector size on a bare chain");
    const int M = B.chain_sites();
    const Eigen::VectorXcd& a = state.amplitudes();
    double f = 0.0;
    for (std::size_t i = 0; i < B.dimension(); ++i) {
        int occupied = 0;
        int n = 0;
        for (int s = 1; s <= M && occupied <= 1; ++s) {
            const int k = B.occupation(i, B.chain_mode(s));
            if (k > 0) {
                ++occupied;
                n = k;
            }
        }
        if (occupied == 1 && n == N)
            f += std::norm(a(static_cast<Eigen::Index>(i)));
    }
    return f;
}

OccupationClass classify_chain_pattern(std::span<const std::uint8_t> c) {
    int total = 0, doublons = 0, higher = 0;
    for (auto n : c) {
        total += n;
        doublons += n == 2;
        higher += n > 2;
    }
    if (total == 0)
        return OccupationClass::Empty;
    if (total == 1)
        return OccupationClass::Single;
    if (higher == 0 && doublons == 0)
        return OccupationClass::SeparatedSingles;
    if (higher == 0 && doublons == 1 && total > 2)
        return OccupationClass::DoublonPlusSingles;
    return OccupationClass::Other;
}

ClassProbabilities project_state_classes(const QuantumState& state) {
    const FockBasis& B = state.basis();
    if (B.layout() != Layout::SourceChainDrain)
        throw DomainError("project_state_classes: requires the source-chain-drain layout");
    const int M = B.chain_sites();
    const Eigen::VectorXcd& a = state.amplitudes();
    ClassProbabilities out;
    for (std::size_t i = 0; i < B.dimension(); ++i) {
        const double p = std::norm(a(static_cast<Eigen::Index>(i)));
        auto chain = B.occupations(i).subspan(1, static_cast<std::size_t>(M));
        switch (classify_chain_pattern(chain)) {
        case OccupationClass::Empty: out.empty += p; break;
        case OccupationClass::Single: out.single += p; break;
        case OccupationClass::SeparatedSingles: out.separated_singles += p; break;
        case OccupationClass::DoublonPlusSingles: out.doublon_plus_singles += p; break;
        case OccupationClass::Other: out.other += p; break;
        }
    }
    return out;
}

std::vector<double> spectral_overlaps(const EigenDecomposition& eig, const QuantumState& phi) {
    if (!eig.basis || !(*eig.basis == phi.basis()))
        throw DomainError("spectral_overlaps: decomposition and state use different bases");
    const Eigen::VectorXd re = eig.eigenvectors.transpose() * phi.amplitudes().real();
    const Eigen::VectorXd im = eig.eigenvectors.transpose() * phi.amplitudes().imag();
    std::vector<double> w(static_cast<std::size_t>(re.size()));
    for (Eigen::Index n = 0; n < re.size(); ++n)
        w[static_cast<std::size_t>(n)] = re(n) * re(n) + im(n) * im(n);
    return w;
}

double subspace_weight(const std::vector<QuantumState>& phi_list, const QuantumState& target) {
    double s = 0.0;
    for (const auto& phi : phi_list)
        s += std::norm(phi.overlap(target));
    return s;
}

} // namespace bhsim
