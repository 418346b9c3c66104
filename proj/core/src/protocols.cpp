#include "bhsim/protocols.hpp"

#include "bhsim/errors.hpp"
#include "bhsim/oracles.hpp"
#include "bhsim/version.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bhsim {

double resolve_pin_strength(const PinStrength& pin, double U, int N, double J) {
    if (const double* v = std::get_if<double>(&pin)) {
        if (!(*v >= 0.0) || !std::isfinite(*v))
            throw DomainError("pin strength must be finite and >= 0");
        return *v;
    }
    return oracles::mu_band(U, N, J);
}

bool ProtocolResult::has_scalar(const std::string& name) const {
    return std::any_of(scalars.begin(), scalars.end(), [&](const auto& s) { return s.first == name; });
}

const std::vector<double>& ProtocolResult::scalar(const std::string& name) const {
    for (const auto& s : scalars)
        if (s.first == name)
            return s.second;
    throw DomainError("ProtocolResult: no scalar series named '" + name + "'");
}

std::vector<double>& ProtocolResult::scalar(const std::string& name) {
    return const_cast<std::vector<double>&>(std::as_const(*this).scalar(name));
}

namespace {

int first_chain_column(const ProtocolResult& r) {
    return !r.mode_labels.empty() && r.mode_labels.front() == "S" ? 1 : 0;
}

int chain_columns(const ProtocolResult& r) {
    return static_cast<int>(r.mode_labels.size()) - 2 * first_chain_column(r);
}

} // namespace

std::vector<double> ProtocolResult::site_series(int site) const {
    if (site < 1 || site > chain_columns(*this))
        throw DomainError("ProtocolResult::site_series: site out of range");
    const Eigen::Index c = first_chain_column(*this) + site - 1;
    std::vector<double> out(static_cast<std::size_t>(density.rows()));
    for (Eigen::Index k = 0; k < density.rows(); ++k)
        out[static_cast<std::size_t>(k)] = density(k, c);
    return out;
}

DensityProfile ProtocolResult::profile(std::size_t k) const {
    DensityProfile p;
    p.time = times.at(k);
    const int off = first_chain_column(*this);
    const int M = chain_columns(*this);
    const auto row = static_cast<Eigen::Index>(k);
    for (int s = 0; s < M; ++s)
        p.per_site.push_back(density(row, off + s));
    if (off) {
        p.has_resonators = true;
        p.n_source = density(row, 0);
        p.n_drain = density(row, density.cols() - 1);
    }
    return p;
}

std::string to_string(ProtocolKind kind) {
    switch (kind) {
    case ProtocolKind::PinRelease: return "pin_release";
    case ProtocolKind::StackRelease: return "stack_release";
    case ProtocolKind::RepulsiveQuench: return "repulsive_quench";
    case ProtocolKind::Ramp: return "ramp";
    case ProtocolKind::SourceDrain: return "source_drain";
    }
    return "unknown";
}

namespace {

void check_site(int site, int M, const char* what) {
    if (site < 1 || site > M)
        throw DomainError(std::string(what) + " " + std::to_string(site) + " outside the chain [1, " +
                          std::to_string(M) + "]");
}

void check_settings(const RunSettings& s) {
    if (!(s.grid.dt > 0.0) || !std::isfinite(s.grid.dt))
        throw DomainError("time step dt must be positive");
}

bool dense_path(std::size_t dim, const EvolveOptions& opt) {
    if (opt.method == PropagationMethod::Dense)
        return true;
    if (opt.method == PropagationMethod::Krylov)
        return false;
    return dim <= opt.dense_threshold;
}

GroundState prepare_ground_state(const SparseHamiltonian& H, const EvolveOptions& opt) {
    GroundStateOptions g;
    g.dense_threshold = dense_path(H.dimension(), opt) ? std::max(opt.dense_threshold, H.dimension()) : 0;
    return ground_state(H, g);
}

std::vector<std::string> labels_for(const FockBasis& B) {
    std::vector<std::string> l;
    const bool sd = B.layout() == Layout::SourceChainDrain;
    if (sd)
        l.emplace_back("S");
    for (int s = 1; s <= B.chain_sites(); ++s)
        l.push_back(std::to_string(s));
    if (sd)
        l.emplace_back("D");
    return l;
}

// Collects the standard observables while a trajectory streams past.
class Recorder {
public:
    Recorder(const SparseHamiltonian& H, const TimeGrid& grid, int counted_N, int center_site)
        : H_(H), N_(counted_N), center_(center_site),
          sd_(H.basis().layout() == Layout::SourceChainDrain) {
        const auto n = grid.size();
        res_.times = grid.times();
        res_.mode_labels = labels_for(H.basis());
        res_.density.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(res_.mode_labels.size()));
        auto add = [&](const char* name) { res_.scalars.emplace_back(name, std::vector<double>(n)); };
        if (sd_) {
            for (const char* s : {"n_S", "n_D", "N_chain", "F_2", "P_empty", "P_single",
                                  "P_separated_singles", "P_doublon_singles", "P_other"})
                add(s);
        } else {
            for (const char* s : {"R", "v", "F_N", "N_chain"})
                add(s);
        }
        add("energy");
        add("norm");
    }

    void operator()(std::size_t k, double t, const QuantumState& psi) {
        const DensityProfile p = site_densities(psi, t);
        const auto row = static_cast<Eigen::Index>(k);
        Eigen::Index c = 0;
        if (sd_)
            res_.density(row, c++) = p.n_source;
        for (double n : p.per_site)
            res_.density(row, c++) = n;
        if (sd_)
            res_.density(row, c++) = p.n_drain;

        auto set = [&](std::size_t idx, double v) { res_.scalars[idx].second[k] = v; };
        std::size_t i = 0;
        if (sd_) {
            set(i++, p.n_source);
            set(i++, p.n_drain);
            set(i++, p.chain_total());
            set(i++, psi.basis().total_excitations() >= 2 ? fidelity_stack_subspace(psi, 2) : 0.0);
            const ClassProbabilities cl = project_state_classes(psi);
            set(i++, cl.empty);
            set(i++, cl.single);
            set(i++, cl.separated_singles);
            set(i++, cl.doublon_plus_singles);
            set(i++, cl.other);
        } else {
            set(i++, rmsd(p, center_, N_));
            ++i;  // v filled in finish()
            set(i++, fidelity_stack_subspace(psi, N_));
            set(i++, p.chain_total());
        }
        set(i++, expectation(psi, H_));
        set(i++, psi.norm());
    }

    ProtocolResult finish(ParameterRecord meta) {
        if (!sd_) {
            auto& v = res_.scalar("v");
            if (res_.times.size() >= 3) {
                const TimeSeries vs = expansion_velocity(TimeSeries{res_.times, res_.scalar("R")});
                v = vs.values;
            } else {
                std::fill(v.begin(), v.end(), std::numeric_limits<double>::quiet_NaN());
            }
        }
        res_.metadata = std::move(meta);
        return std::move(res_);
    }

private:
    const SparseHamiltonian& H_;
    int N_;
    int center_;
    bool sd_;
    ProtocolResult res_;
};

ParameterRecord base_metadata(const char* protocol, const ChainParams& chain, int N,
                              const SparseHamiltonian& H, const RunSettings& s) {
    ParameterRecord m;
    m["protocol"] = std::string(protocol);
    m["version"] = std::string(kVersion);
    m["M"] = std::int64_t{chain.site_count()};
    m["N"] = std::int64_t{N};
    m["J"] = chain.J;
    m["U"] = chain.U;
    m["dt"] = s.grid.dt;
    m["t_max"] = s.grid.t_max();
    m["steps"] = static_cast<std::int64_t>(s.grid.steps);
    m["dimension"] = static_cast<std::int64_t>(H.dimension());
    m["method"] = std::string(dense_path(H.dimension(), s.evolve) ? "dense" : "krylov");
    m["hamiltonian"] = H.params_digest();
    return m;
}

ChainParams with_pin(ChainParams chain, int pin_site, double mu_pin) {
    chain.mu[static_cast<std::size_t>(pin_site - 1)] -= mu_pin;
    return chain;
}

// Pinned ground state of `prep`, released under `evolve_chain`.
ProtocolResult pinned_release(const char* name, const ChainParams& prep, const ChainParams& evolve_chain,
                              int N, int pin_site, double mu_pin, const RunSettings& s,
                              ParameterRecord extra) {
    auto basis = std::make_shared<const FockBasis>(prep.site_count(), N);
    const SparseHamiltonian Hpin = build_chain_hamiltonian(basis, with_pin(prep, pin_site, mu_pin));
    const SparseHamiltonian H = build_chain_hamiltonian(basis, evolve_chain);
    const GroundState gs = prepare_ground_state(Hpin, s.evolve);

    Recorder rec(H, s.grid, N, pin_site);
    evolve_visit(H, gs.state, s.grid, std::ref(rec), s.evolve);

    ParameterRecord meta = base_metadata(name, evolve_chain, N, H, s);
    meta["pin_site"] = std::int64_t{pin_site};
    meta["mu_pin"] = mu_pin;
    meta["ground_energy"] = gs.energy;
    for (auto& [k, v] : extra)
        meta[k] = v;
    return rec.finish(std::move(meta));
}

ParameterValue pin_mode(const PinStrength& p) {
    return std::string(std::holds_alternative<BandPin>(p) ? "band" : "value");
}

} // namespace

ProtocolResult run_pin_release(const ChainParams& chain, int N, int pin_site, const PinStrength& mu_pin,
                               const RunSettings& settings) {
    chain.validate();
    check_settings(settings);
    check_site(pin_site, chain.site_count(), "pin_site");
    const double mp = resolve_pin_strength(mu_pin, chain.U, N, chain.J);
    return pinned_release("pin_release", chain, chain, N, pin_site, mp, settings,
                          {{"mu_pin_mode", pin_mode(mu_pin)}});
}

ProtocolResult run_stack_release(const ChainParams& chain, int N, int site, const RunSettings& settings) {
    chain.validate();
    check_settings(settings);
    check_site(site, chain.site_count(), "site");
    auto basis = std::make_shared<const FockBasis>(chain.site_count(), N);
    const SparseHamiltonian H = build_chain_hamiltonian(basis, chain);
    FockState stack(static_cast<std::size_t>(chain.site_count()), 0);
    stack[static_cast<std::size_t>(site - 1)] = N;
    const QuantumState psi0 = QuantumState::fock(basis, stack);

    Recorder rec(H, settings.grid, N, site);
    evolve_visit(H, psi0, settings.grid, std::ref(rec), settings.evolve);
    ParameterRecord meta = base_metadata("stack_release", chain, N, H, settings);
    meta["site"] = std::int64_t{site};
    return rec.finish(std::move(meta));
}

ProtocolResult run_repulsive_quench(const ChainParams& chain, double U_evolve, int N, int pin_site,
                                    const PinStrength& mu_pin, const RunSettings& settings) {
    chain.validate();
    check_settings(settings);
    check_site(pin_site, chain.site_count(), "pin_site");
    if (!(chain.U < 0.0))
        throw DomainError("run_repulsive_quench: preparation interaction U must be negative");
    const double mp = resolve_pin_strength(mu_pin, chain.U, N, chain.J);
    ChainParams evolve_chain = chain;
    evolve_chain.U = U_evolve;
    return pinned_release("repulsive_quench", chain, evolve_chain, N, pin_site, mp, settings,
                          {{"mu_pin_mode", pin_mode(mu_pin)}, {"U_prep", chain.U}, {"U_evolve", U_evolve}});
}

ProtocolResult run_ramp(const ChainParams& chain, int N, int ramp_site, double mu_ramp,
                        const PinStrength& mu_pin, const RunSettings& settings) {
    chain.validate();
    check_settings(settings);
    check_site(ramp_site, chain.site_count(), "ramp_site");
    if (!(mu_ramp >= 0.0) || !std::isfinite(mu_ramp))
        throw DomainError("run_ramp: mu_ramp must be finite and >= 0");
    ChainParams ramped = chain;
    for (int i = 1; i < ramp_site; ++i)
        ramped.mu[static_cast<std::size_t>(i - 1)] += mu_ramp * (ramp_site - i);
    const double mp = resolve_pin_strength(mu_pin, chain.U, N, chain.J);
    return pinned_release("ramp", ramped, ramped, N, ramp_site, mp, settings,
                          {{"mu_pin_mode", pin_mode(mu_pin)}, {"mu_ramp", mu_ramp},
                           {"ramp_site", std::int64_t{ramp_site}}});
}

ProtocolResult run_source_drain(const ChainParams& chain, const SourceDrainParams& sd,
                                const RunSettings& settings) {
    chain.validate();
    check_settings(settings);
    if (sd.total_excitations < 1)
        throw DomainError("run_source_drain: total_excitations must be >= 1");
    const int M = chain.site_count();
    auto basis = std::make_shared<const FockBasis>(M + 2, sd.total_excitations, Layout::SourceChainDrain);
    const SparseHamiltonian H = build_source_drain_hamiltonian(basis, chain, sd);
    FockState init(static_cast<std::size_t>(M + 2), 0);
    init.front() = sd.total_excitations;
    const QuantumState psi0 = QuantumState::fock(basis, init);

    Recorder rec(H, settings.grid, sd.total_excitations, 0);
    evolve_visit(H, psi0, settings.grid, std::ref(rec), settings.evolve);
    ParameterRecord meta = base_metadata("source_drain", chain, sd.total_excitations, H, settings);
    meta["omega_r"] = sd.omega_r;
    meta["Jprime"] = sd.Jprime;
    return rec.finish(std::move(meta));
}

ProtocolResult run_protocol(const ProtocolSpec& spec) {
    switch (spec.kind) {
    case ProtocolKind::PinRelease:
        return run_pin_release(spec.chain, spec.N, spec.site, spec.mu_pin, spec.settings);
    case ProtocolKind::StackRelease:
        return run_stack_release(spec.chain, spec.N, spec.site, spec.settings);
    case ProtocolKind::RepulsiveQuench:
        return run_repulsive_quench(spec.chain, spec.U_evolve, spec.N, spec.site, spec.mu_pin, spec.settings);
    case ProtocolKind::Ramp:
        return run_ramp(spec.chain, spec.N, spec.site, spec.mu_ramp, spec.mu_pin, spec.settings);
    case ProtocolKind::SourceDrain:
        return run_source_drain(spec.chain, spec.sd, spec.settings);
    }
    throw DomainError("run_protocol: unknown protocol kind");
}

} // namespace bhsim
