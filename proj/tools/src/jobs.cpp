#include "bhsim_app/jobs.hpp"

#include <bhsim/errors.hpp>
#include <bhsim/evolution.hpp>
#include <bhsim/fock_basis.hpp>
#include <bhsim/hamiltonian.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace bhsim::app {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Typed, path-aware view of the parameters object.
class Params {
public:
    Params(const json& obj, const std::set<std::string>& allowed) : obj_(obj) {
        for (const auto& [key, _] : obj.items())
            if (!allowed.count(key))
                throw ConfigError(path(key), "unknown parameter for this protocol");
    }

    [[nodiscard]] bool has(const std::string& key) const { return obj_.contains(key); }

    [[nodiscard]] double real(const std::string& key) const {
        if (!has(key))
            throw ConfigError(path(key), "required field missing");
        const json& v = obj_.at(key);
        if (!v.is_number())
            throw ConfigError(path(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x))
            throw ConfigError(path(key), "must be finite");
        return x;
    }
    [[nodiscard]] double real(const std::string& key, double fallback) const {
        return has(key) ? real(key) : fallback;
    }

    [[nodiscard]] int integer(const std::string& key) const {
        const double x = real(key);
        if (x != std::floor(x) || std::abs(x) > 1e9)
            throw ConfigError(path(key), "expected an integer");
        return static_cast<int>(x);
    }
    [[nodiscard]] int integer(const std::string& key, int fallback) const {
        return has(key) ? integer(key) : fallback;
    }

    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
        if (!has(key))
            return fallback;
        if (!obj_.at(key).is_string())
            throw ConfigError(path(key), "expected a string");
        return obj_.at(key).get<std::string>();
    }

    [[nodiscard]] const json& raw(const std::string& key) const { return obj_.at(key); }

    static std::string path(const std::string& key) { return "parameters." + key; }

private:
    const json& obj_;
};

const std::set<std::string> kEvolutionKeys{"M",      "N",      "J",      "U",
                                           "omega01", "t_max", "dt",     "method",
                                           "krylov_tolerance", "dense_threshold"};

std::set<std::string> keys_for(Protocol p, const std::string& base = {}) {
    std::set<std::string> k = kEvolutionKeys;
    switch (p) {
    case Protocol::PinRelease:
        k.insert({"pin_site", "mu_pin"});
        break;
    case Protocol::StackRelease:
        k.insert("site");
        break;
    case Protocol::RepulsiveQuench:
        k.insert({"U_evolve", "pin_site", "mu_pin"});
        break;
    case Protocol::Ramp:
        k.insert({"ramp_site", "mu_ramp", "mu_pin"});
        break;
    case Protocol::SourceDrain:
        k.insert({"Jprime", "delta"});
        break;
    case Protocol::VelocitySweep:
        k.erase("t_max");
        k.insert({"pin_site", "mu_pin", "t_eps", "t_star"});
        break;
    case Protocol::Spectrum:
        k = {"M", "N", "J", "U", "omega01", "levels", "dense_threshold"};
        break;
    case Protocol::Dephased:
        if (base == "pin_release")
            k = keys_for(Protocol::PinRelease);
        else if (base == "ramp")
            k = keys_for(Protocol::Ramp);
        else
            k = keys_for(Protocol::StackRelease);
        k.insert({"base", "sigma_omega", "n_trajectories"});
        break;
    }
    return k;
}

int site_in_range(const Params& p, const std::string& key, int M, int fallback) {
    const int s = p.integer(key, fallback);
    if (s < 1 || s > M)
        throw ConfigError(Params::path(key), "must lie in [1, " + std::to_string(M) + "]");
    return s;
}

PinStrength pin_strength(const Params& p, const ProtocolSpec& s) {
    const bool band = !p.has("mu_pin") || p.raw("mu_pin").is_string();
    if (band) {
        if (p.has("mu_pin") && p.raw("mu_pin").get<std::string>() != "band")
            throw ConfigError(Params::path("mu_pin"), "expected a number or \"band\"");
        if (s.N < 2 || s.chain.U == 0.0)
            throw ConfigError(Params::path("mu_pin"), "\"band\" needs N >= 2 and U != 0; give a value");
        return BandPin{};
    }
    const double mu = p.real("mu_pin");
    if (mu < 0.0)
        throw ConfigError(Params::path("mu_pin"), "must be >= 0");
    return mu;
}

EvolveOptions evolve_options(const Params& p) {
    EvolveOptions o;
    const std::string m = p.text("method", "auto");
    if (m == "auto")
        o.method = PropagationMethod::Auto;
    else if (m == "dense")
        o.method = PropagationMethod::Dense;
    else if (m == "krylov")
        o.method = PropagationMethod::Krylov;
    else
        throw ConfigError(Params::path("method"), "expected \"auto\", \"dense\" or \"krylov\"");
    o.krylov_tolerance = p.real("krylov_tolerance", o.krylov_tolerance);
    if (!(o.krylov_tolerance > 0.0))
        throw ConfigError(Params::path("krylov_tolerance"), "must be positive");
    const int threshold = p.integer("dense_threshold", static_cast<int>(o.dense_threshold));
    if (threshold < 0)
        throw ConfigError(Params::path("dense_threshold"), "must be >= 0");
    o.dense_threshold = static_cast<std::size_t>(threshold);
    return o;
}

TimeGrid time_grid(const Params& p, double t_max) {
    const double dt = p.real("dt", 0.02);
    if (!(dt > 0.0))
        throw ConfigError(Params::path("dt"), "must be positive");
    if (!(t_max > 0.0))
        throw ConfigError(Params::path("t_max"), "must be positive");
    if (t_max / dt > 1e7)
        throw ConfigError(Params::path("dt"), "more than 1e7 time steps");
    return TimeGrid::until(t_max, dt);
}

// M, N, J, U common to every protocol.
ChainParams chain_params(const Params& p, int& N, double omega01) {
    const int M = p.integer("M");
    if (M < 1)
        throw ConfigError(Params::path("M"), "must be >= 1");
    N = p.integer("N");
    if (N < 1)
        throw ConfigError(Params::path("N"), "must be >= 1");
    const double J = p.real("J", 1.0);
    if (!(J > 0.0))
        throw ConfigError(Params::path("J"), "must be positive");
    return ChainParams::uniform(M, J, p.real("U"), omega01);
}

// Dephased runs keep the chain at zero and pass omega01 to the disorder model instead.
void fill_evolution(Protocol kind, const Params& p, ProtocolSpec& s, bool rotating = false) {
    const double omega01 = rotating ? 0.0 : p.real("omega01", 0.0);
    s.chain = chain_params(p, s.N, omega01);
    const int M = s.chain.site_count();
    const int centre = (M + 1) / 2;
    s.settings.evolve = evolve_options(p);
    s.settings.grid = time_grid(p, p.real("t_max"));
    switch (kind) {
    case Protocol::PinRelease:
        s.kind = ProtocolKind::PinRelease;
        s.site = site_in_range(p, "pin_site", M, centre);
        s.mu_pin = pin_strength(p, s);
        break;
    case Protocol::StackRelease:
        s.kind = ProtocolKind::StackRelease;
        s.site = site_in_range(p, "site", M, centre);
        break;
    case Protocol::RepulsiveQuench:
        s.kind = ProtocolKind::RepulsiveQuench;
        if (!(s.chain.U < 0.0))
            throw ConfigError(Params::path("U"), "preparation interaction must be negative");
        s.U_evolve = p.real("U_evolve");
        s.site = site_in_range(p, "pin_site", M, centre);
        s.mu_pin = pin_strength(p, s);
        break;
    case Protocol::Ramp:
        s.kind = ProtocolKind::Ramp;
        s.site = site_in_range(p, "ramp_site", M, 1);
        s.mu_ramp = p.real("mu_ramp");
        if (s.mu_ramp < 0.0)
            throw ConfigError(Params::path("mu_ramp"), "must be >= 0");
        s.mu_pin = pin_strength(p, s);
        break;
    case Protocol::SourceDrain: {
        s.kind = ProtocolKind::SourceDrain;
        const double Jp = p.real("Jprime");
        if (Jp < 0.0)
            throw ConfigError(Params::path("Jprime"), "must be >= 0");
        s.sd = SourceDrainParams::from_detuning(p.real("delta", 0.0), Jp, s.N, omega01);
        break;
    }
    default:
        break;
    }
}

std::vector<std::string> summary_names(const ProtocolResult& r, std::vector<double>& values) {
    std::vector<std::string> names;
    for (const auto& [name, series] : r.scalars) {
        if (name == "energy" || name == "norm" || series.empty())
            continue;
        double mx = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        std::size_t finite = 0;
        for (double x : series) {
            if (!std::isfinite(x))
                continue;
            mx = std::max(mx, x);
            sum += x;
            ++finite;
        }
        names.push_back(name + "_max");
        values.push_back(finite ? mx : kNaN);
        names.push_back(name + "_mean");
        values.push_back(finite ? sum / static_cast<double>(finite) : kNaN);
        names.push_back(name + "_final");
        values.push_back(series.back());
    }
    return names;
}

JobOutput series_output(ProtocolResult r) {
    JobOutput out;
    out.summary_columns = summary_names(r, out.summary);
    out.summary_integer.assign(out.summary.size(), false);
    out.series = std::move(r);
    return out;
}

} // namespace

Job build_job(Protocol protocol, const json& parameters, std::uint64_t seed) {
    Job job;
    job.protocol = protocol;
    switch (protocol) {
    case Protocol::PinRelease:
    case Protocol::StackRelease:
    case Protocol::RepulsiveQuench:
    case Protocol::Ramp:
    case Protocol::SourceDrain: {
        const Params p(parameters, keys_for(protocol));
        fill_evolution(protocol, p, job.spec);
        break;
    }
    case Protocol::Dephased: {
        std::string base = "stack_release";
        if (parameters.contains("base")) {
            if (!parameters.at("base").is_string())
                throw ConfigError("parameters.base", "expected a string");
            base = parameters.at("base").get<std::string>();
        }
        Protocol base_kind;
        if (base == "stack_release")
            base_kind = Protocol::StackRelease;
        else if (base == "pin_release")
            base_kind = Protocol::PinRelease;
        else if (base == "ramp")
            base_kind = Protocol::Ramp;
        else
            throw ConfigError("parameters.base", "expected stack_release, pin_release or ramp");
        const Params p(parameters, keys_for(protocol, base));
        fill_evolution(base_kind, p, job.spec, true);
        job.dephasing.sigma_omega = p.real("sigma_omega");
        if (job.dephasing.sigma_omega < 0.0)
            throw ConfigError(Params::path("sigma_omega"), "must be >= 0");
        job.dephasing.n_trajectories = p.integer("n_trajectories", 100);
        if (job.dephasing.n_trajectories < 1)
            throw ConfigError(Params::path("n_trajectories"), "must be >= 1");
        job.dephasing.omega01 = p.real("omega01", 100.0);
        if (!(job.dephasing.omega01 > 0.0))
            throw ConfigError(Params::path("omega01"), "must be positive");
        job.dephasing.seed = seed;
        break;
    }
    case Protocol::VelocitySweep: {
        const Params p(parameters, keys_for(protocol));
        ProtocolSpec& s = job.spec;
        s.kind = ProtocolKind::PinRelease;
        s.chain = chain_params(p, s.N, p.real("omega01", 0.0));
        const int M = s.chain.site_count();
        if (M < 2)
            throw ConfigError(Params::path("M"), "velocity fits need M >= 2");
        s.site = site_in_range(p, "pin_site", M, (M + 1) / 2);
        s.mu_pin = pin_strength(p, s);
        s.settings.evolve = evolve_options(p);
        const FitWindow fallback = default_window(s.chain.U, M, std::sqrt(2.0) * s.chain.J);
        job.window.t_eps = p.real("t_eps", fallback.t_eps);
        job.window.t_star = p.real("t_star", fallback.t_star);
        if (!(job.window.t_eps >= 0.0 && job.window.t_star > job.window.t_eps))
            throw ConfigError(Params::path("t_star"), "window needs 0 <= t_eps < t_star");
        const double dt = p.real("dt", 0.02);
        s.settings.grid = time_grid(p, job.window.t_star + 4.0 * dt);
        break;
    }
    case Protocol::Spectrum: {
        const Params p(parameters, keys_for(protocol));
        job.spec.chain = chain_params(p, job.spec.N, p.real("omega01", 0.0));
        job.levels = p.integer("levels", 0);
        if (job.levels < 0)
            throw ConfigError(Params::path("levels"), "must be >= 0");
        const int threshold = p.integer("dense_threshold", static_cast<int>(kDefaultDenseThreshold));
        if (threshold < 1)
            throw ConfigError(Params::path("dense_threshold"), "must be >= 1");
        job.dense_threshold = static_cast<std::size_t>(threshold);
        break;
    }
    }
    return job;
}

std::vector<double> point_coordinates(const ExperimentConfig& cfg, std::size_t index) {
    std::vector<double> coords(cfg.axes.size());
    for (std::size_t a = cfg.axes.size(); a-- > 0;) {
        const auto& values = cfg.axes[a].values;
        coords[a] = values[index % values.size()];
        index /= values.size();
    }
    return coords;
}

json point_parameters(const ExperimentConfig& cfg, std::size_t index) {
    json params = cfg.parameters;
    const auto coords = point_coordinates(cfg, index);
    for (std::size_t a = 0; a < coords.size(); ++a)
        params[cfg.axes[a].name] = coords[a];
    return params;
}

JobOutput run_job(const Job& job, int threads) {
    switch (job.protocol) {
    case Protocol::Dephased: {
        DephasingOptions opts;
        opts.threads = threads;
        return series_output(run_dephased_protocol(job.spec, job.dephasing, opts).mean);
    }
    case Protocol::VelocitySweep: {
        const ProtocolResult r = run_protocol(job.spec);
        TimeSeries v{r.times, r.scalar("v")};
        JobOutput out;
        out.summary_columns = {"v_inf", "A", "Omega", "phi", "eta", "converged", "residual"};
        out.summary_integer = {false, false, false, false, false, true, false};
        try {
            const VelocityFit f = fit_velocity(v, job.window, FitOptions{job.spec.chain.U});
            out.summary = {f.v_inf, f.amplitude, f.omega, f.phase, f.eta, 1.0, f.residual_norm};
        } catch (const ConvergenceError& e) {
            out.summary = {kNaN, kNaN, kNaN, kNaN, kNaN, 0.0, e.residual()};
        }
        return out;
    }
    case Protocol::Spectrum: {
        const ChainParams& c = job.spec.chain;
        auto basis = std::make_shared<const FockBasis>(c.site_count(), job.spec.N);
        const auto H = build_chain_hamiltonian(basis, c);
        const auto eig = diagonalize(H, job.dense_threshold);
        const auto n = static_cast<std::size_t>(eig.eigenvalues.size());
        const std::size_t keep = job.levels > 0 ? std::min<std::size_t>(n, static_cast<std::size_t>(job.levels)) : n;
        JobOutput out;
        for (std::size_t k = 0; k < keep; ++k) {
            out.summary_columns.push_back("E" + std::to_string(k));
            out.summary.push_back(eig.eigenvalues[static_cast<Eigen::Index>(k)]);
        }
        out.summary_integer.assign(keep, false);
        return out;
    }
    default:
        return series_output(run_protocol(job.spec));
    }
}

} // namespace bhsim::app
