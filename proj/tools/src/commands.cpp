#include "bhsim_app/commands.hpp"

#include "bhsim_app/jobs.hpp"
#include "bhsim_app/output.hpp"

#include <bhsim/errors.hpp>
#include <bhsim/oracles.hpp>
#include <bhsim/parallel.hpp>
#include <bhsim/version.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>

namespace bhsim::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kIntegerKeys{"M", "N", "pin_site", "site", "ramp_site", "levels",
                                         "n_trajectories", "dense_threshold"};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Maps exceptions to exit codes; the message goes to @p log.
int guarded(std::ostream& log, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << "bhsim: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        log << "bhsim: runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

std::string point_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "p%06zu", i);
    return buf;
}

json metadata_base(const ExperimentConfig& cfg, int threads, double wall) {
    json m;
    m["bhsim_version"] = kVersion;
    m["config_digest"] = cfg.digest();
    m["config"] = cfg.resolved();
    m["seed"] = cfg.seed;
    m["threads"] = threads;
    m["wall_time_s"] = wall;
    return m;
}

struct PointRow {
    std::vector<std::string> columns;
    std::vector<bool> integer;
    std::vector<double> values;
};

std::optional<PointRow> load_marker(const fs::path& marker, const std::string& digest) {
    std::ifstream in(marker);
    if (!in)
        return std::nullopt;
    try {
        const json j = json::parse(in);
        if (j.at("config_digest") != digest)
            return std::nullopt;
        PointRow row;
        row.columns = j.at("columns").get<std::vector<std::string>>();
        row.integer = j.at("integer").get<std::vector<bool>>();
        for (const auto& v : j.at("values"))
            row.values.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
        if (row.values.size() != row.columns.size() || row.integer.size() != row.columns.size())
            return std::nullopt;
        return row;
    } catch (const json::exception&) {
        return std::nullopt;  // stale or truncated marker: recompute
    }
}

int execute_sweep(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
    const auto t0 = Clock::now();
    const std::size_t n = cfg.point_count();
    if (n == 0)
        throw ConfigError("sweep.axes", "grid is empty");

    // validate every point before any work starts
    std::vector<Job> jobs;
    jobs.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        jobs.push_back(build_job(cfg.protocol, point_parameters(cfg, i), cfg.seed));

    const int threads = resolve_thread_count(opts.threads);
    const int inner = n == 1 ? threads : 1;
    const std::string digest = cfg.digest();
    const std::string ext = extension(cfg.format);
    const fs::path points_dir = opts.out_dir / (cfg.output_stem + "_points");
    fs::create_directories(points_dir);

    std::vector<PointRow> rows(n);
    std::vector<char> reused(n, 0);
    std::mutex log_mutex;
    std::size_t done = 0;

    parallel_for(n, threads, [&](std::size_t i) {
        const fs::path marker = points_dir / (point_name(i) + ".done");
        if (auto row = load_marker(marker, digest)) {
            rows[i] = std::move(*row);
            reused[i] = 1;
            std::lock_guard lock(log_mutex);
            log << "bhsim: point " << i + 1 << "/" << n << " reused\n";
            ++done;
            return;
        }
        const auto tp = Clock::now();
        JobOutput out = run_job(jobs[i], inner);
        if (out.series) {
            const std::string stem = point_name(i);
            write_atomic(points_dir / (stem + "_density" + ext),
                         render(density_table(*out.series), make_header(cfg, "density " + stem), cfg.format));
            write_atomic(points_dir / (stem + "_scalars" + ext),
                         render(scalars_table(*out.series), make_header(cfg, "scalars " + stem), cfg.format));
        }
        PointRow row{out.summary_columns, out.summary_integer, out.summary};
        json mk;
        mk["config_digest"] = digest;
        mk["index"] = i;
        mk["coordinates"] = point_coordinates(cfg, i);
        mk["columns"] = row.columns;
        mk["integer"] = row.integer;
        mk["values"] = row.values;
        write_atomic(marker, mk.dump() + "\n");
        rows[i] = std::move(row);
        std::lock_guard lock(log_mutex);
        ++done;
        log << "bhsim: point " << i + 1 << "/" << n << " done in " << seconds_since(tp) << " s ("
            << done << " complete)\n";
    });

    // widest row defines the columns (spectra of different sectors differ in length)
    std::size_t widest = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (rows[i].columns.size() > rows[widest].columns.size())
            widest = i;
    Table table;
    for (const auto& a : cfg.axes) {
        table.columns.push_back(a.name);
        table.integer.push_back(kIntegerKeys.count(a.name) > 0);
    }
    for (std::size_t c = 0; c < rows[widest].columns.size(); ++c) {
        table.columns.push_back(rows[widest].columns[c]);
        table.integer.push_back(rows[widest].integer[c]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[i];
        if (!std::equal(r.columns.begin(), r.columns.end(), rows[widest].columns.begin()))
            throw std::runtime_error("sweep points produced incompatible columns");
        std::vector<double> line = point_coordinates(cfg, i);
        line.insert(line.end(), r.values.begin(), r.values.end());
        line.resize(table.columns.size(), std::numeric_limits<double>::quiet_NaN());
        table.rows.push_back(std::move(line));
    }

    const fs::path table_path = opts.out_dir / (cfg.output_stem + "_sweep" + ext);
    write_atomic(table_path, render(table, make_header(cfg, "sweep"), cfg.format));

    json meta = metadata_base(cfg, threads, seconds_since(t0));
    meta["points"] = n;
    meta["reused_points"] = std::count(reused.begin(), reused.end(), 1);
    meta["files"] = {table_path.filename().string(), points_dir.filename().string() + "/"};
    write_atomic(opts.out_dir / (cfg.output_stem + "_metadata.json"), meta.dump(1) + "\n");
    log << "bhsim: wrote " << table_path.string() << "\n";
    return kExitOk;
}

int execute_run(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
    const auto t0 = Clock::now();
    const Job job = build_job(cfg.protocol, cfg.parameters, cfg.seed);
    const int threads = resolve_thread_count(opts.threads);
    JobOutput out = run_job(job, threads);

    const std::string ext = extension(cfg.format);
    std::vector<std::string> files;
    auto emit = [&](const std::string& suffix, const Table& t) {
        const fs::path p = opts.out_dir / (cfg.output_stem + "_" + suffix + ext);
        write_atomic(p, render(t, make_header(cfg, suffix), cfg.format));
        files.push_back(p.filename().string());
        log << "bhsim: wrote " << p.string() << "\n";
    };

    json meta;
    if (out.series) {
        emit("density", density_table(*out.series));
        emit("scalars", scalars_table(*out.series));
        meta["protocol_metadata"] = to_json(out.series->metadata);
    } else {
        Table t;
        t.columns = {"level", "energy"};
        t.integer = {true, false};
        for (std::size_t k = 0; k < out.summary.size(); ++k)
            t.rows.push_back({static_cast<double>(k), out.summary[k]});
        emit("spectrum", t);
    }
    json base = metadata_base(cfg, threads, seconds_since(t0));
    base.update(meta);
    base["files"] = files;
    write_atomic(opts.out_dir / (cfg.output_stem + "_metadata.json"), base.dump(1) + "\n");
    return kExitOk;
}

// ---- oracles ---------------------------------------------------------------

using Values = std::map<std::string, double>;

struct OracleDef {
    std::string name;
    std::vector<std::string> required;
    Values defaults;
    std::vector<std::string> columns;
    std::function<std::vector<std::vector<double>>(const Values&)> eval;
};

int as_int(const Values& v, const std::string& key) {
    const double x = v.at(key);
    if (x != std::floor(x))
        throw ConfigError(key, "expected an integer");
    return static_cast<int>(x);
}

std::vector<double> time_axis(const Values& v) {
    const double t_max = v.at("t_max"), dt = v.at("dt");
    if (!(dt > 0.0) || !(t_max >= 0.0))
        throw ConfigError("dt", "need dt > 0 and t_max >= 0");
    return TimeGrid::until(t_max, dt).times();
}

std::vector<std::vector<double>> densities_rows(const oracles::SourceDrainDensities& d) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < d.times.size(); ++k)
        rows.push_back({d.times[k], d.n_source[k], d.n_drain[k], d.n_chain[k]});
    return rows;
}

const std::vector<OracleDef>& oracle_table() {
    using V = std::vector<std::vector<double>>;
    static const std::vector<OracleDef> defs{
        {"mu_band", {"U", "N"}, {{"J", 1.0}}, {"mu_band"},
         [](const Values& v) { return V{{oracles::mu_band(v.at("U"), as_int(v, "N"), v.at("J"))}}; }},
        {"soliton_width", {"mu_pin", "U", "N"}, {{"J", 1.0}}, {"width"},
         [](const Values& v) {
             return V{{oracles::soliton_width(v.at("mu_pin"), v.at("U"), as_int(v, "N"), v.at("J"))}};
         }},
        {"soliton_neighbour_amplitude", {"mu_pin", "U", "N"}, {{"J", 1.0}}, {"amplitude"},
         [](const Values& v) {
             return V{{oracles::soliton_neighbour_amplitude(v.at("mu_pin"), v.at("U"), as_int(v, "N"), v.at("J"))}};
         }},
        {"j_tilde", {"U", "N"}, {{"J", 1.0}}, {"j_tilde", "v_strong"},
         [](const Values& v) {
             const double jt = oracles::j_tilde(v.at("U"), as_int(v, "N"), v.at("J"));
             return V{{jt, std::sqrt(2.0) * jt}};
         }},
        {"u_critical", {"N"}, {{"J", 1.0}}, {"U_C"},
         [](const Values& v) { return V{{oracles::u_critical(as_int(v, "N"), v.at("J"))}}; }},
        {"tight_binding", {"M"}, {{"J", 1.0}, {"omega01", 0.0}}, {"level", "energy"},
         [](const Values& v) {
             const auto e = oracles::tight_binding_energies(as_int(v, "M"), v.at("J"), v.at("omega01"));
             V rows;
             for (std::size_t k = 0; k < e.size(); ++k)
                 rows.push_back({static_cast<double>(k), e[k]});
             return rows;
         }},
        {"resonant_sd", {"M", "Jprime", "N"}, {{"t_max", 100.0}, {"dt", 0.5}},
         {"time", "n_S", "n_D", "N_chain"},
         [](const Values& v) {
             return densities_rows(oracles::resonant_sd_densities(as_int(v, "M"), v.at("Jprime"),
                                                                  as_int(v, "N"), time_axis(v)));
         }},
        {"off_resonant_sd", {"M", "Jprime"}, {{"J", 1.0}},
         {"beta", "omega_plus", "omega_minus", "alpha_beat", "omega_minus_corrected"},
         [](const Values& v) {
             const auto r = oracles::off_resonant_sd(as_int(v, "M"), v.at("Jprime"), v.at("J"));
             return V{{r.beta, r.omega_plus, r.omega_minus, r.alpha_beat, r.omega_minus_corrected}};
         }},
        {"off_resonant_densities", {"M", "Jprime", "N"}, {{"J", 1.0}, {"t_max", 1000.0}, {"dt", 1.0}},
         {"time", "n_S", "n_D", "N_chain"},
         [](const Values& v) {
             const auto r = oracles::off_resonant_sd(as_int(v, "M"), v.at("Jprime"), v.at("J"));
             return densities_rows(r.densities(as_int(v, "N"), time_axis(v)));
         }},
        {"multiphoton_detuning", {"U", "N"}, {}, {"delta"},
         [](const Values& v) {
             return V{{oracles::multiphoton_resonance_detuning(v.at("U"), as_int(v, "N"))}};
         }},
        {"parity_crossover", {"M", "Jprime"}, {{"J", 1.0}}, {"ratio"},
         [](const Values& v) { return V{{oracles::parity_crossover(as_int(v, "M"), v.at("Jprime"), v.at("J"))}}; }},
    };
    return defs;
}

std::pair<std::string, std::string> split_assignment(const std::string& s, const std::string& flag) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
        throw ConfigError(flag, "expected name=value, got '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

double parse_double(const std::string& text, const std::string& path) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !std::isfinite(x))
        throw ConfigError(path, "not a number: '" + text + "'");
    return x;
}

SweepAxis parse_grid(const std::string& spec) {
    auto [name, body] = split_assignment(spec, "--grid");
    const std::string path = "--grid " + name;
    json axis;
    if (body.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (std::size_t pos; (pos = body.find(':', start)) != std::string::npos; start = pos + 1)
            parts.push_back(body.substr(start, pos - start));
        parts.push_back(body.substr(start));
        if (parts.size() != 3)
            throw ConfigError(path, "expected start:stop:step");
        axis = {{"start", parse_double(parts[0], path)},
                {"stop", parse_double(parts[1], path)},
                {"step", parse_double(parts[2], path)}};
    } else {
        json values = json::array();
        std::size_t start = 0;
        for (std::size_t pos;; start = pos + 1) {
            pos = body.find(',', start);
            const auto item = body.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
            if (!item.empty())
                values.push_back(parse_double(item, path));
            if (pos == std::string::npos)
                break;
        }
        axis = {{"values", values}};
    }
    return {name, expand_grid(axis, path)};
}

} // namespace

int run_command(const fs::path& config, const CommandOptions& options, std::ostream& log) {
    return guarded(log, [&] {
        const ExperimentConfig cfg = load_config(config, options.overrides);
        if (cfg.protocol == Protocol::VelocitySweep)
            return execute_sweep(cfg, options, log);
        if (!cfg.axes.empty())
            throw ConfigError("sweep", "config has grid axes; use `bhsim sweep`");
        return execute_run(cfg, options, log);
    });
}

int sweep_command(const fs::path& config, const CommandOptions& options, std::ostream& log) {
    return guarded(log, [&] {
        const ExperimentConfig cfg = load_config(config, options.overrides);
        if (cfg.axes.empty())
            throw ConfigError("sweep.axes", "required field missing");
        return execute_sweep(cfg, options, log);
    });
}

std::vector<std::string> oracle_names() {
    std::vector<std::string> names;
    for (const auto& d : oracle_table())
        names.push_back(d.name);
    return names;
}

int oracle_command(const std::string& name, const std::vector<std::string>& grid,
                   const std::vector<std::string>& set, OutputFormat format, std::ostream& out,
                   std::ostream& log) {
    return guarded(log, [&] {
        const auto& defs = oracle_table();
        const auto it = std::find_if(defs.begin(), defs.end(), [&](const OracleDef& d) { return d.name == name; });
        if (it == defs.end())
            throw ConfigError("oracle", "unknown oracle '" + name + "'");
        const OracleDef& def = *it;

        std::set<std::string> known(def.required.begin(), def.required.end());
        for (const auto& [k, _] : def.defaults)
            known.insert(k);

        Values fixed = def.defaults;
        std::vector<std::string> order;  // output column order for parameters
        ExperimentConfig shape;
        for (const auto& g : grid) {
            SweepAxis axis = parse_grid(g);
            if (!known.count(axis.name))
                throw ConfigError("--grid " + axis.name, "not a parameter of " + name);
            for (const auto& a : shape.axes)
                if (a.name == axis.name)
                    throw ConfigError("--grid " + axis.name, "given twice");
            order.push_back(axis.name);
            shape.axes.push_back(std::move(axis));
        }
        for (const auto& s : set) {
            auto [key, text] = split_assignment(s, "--set");
            if (!known.count(key))
                throw ConfigError("--set " + key, "not a parameter of " + name);
            fixed[key] = parse_double(text, "--set " + key);
            if (std::find(order.begin(), order.end(), key) == order.end())
                order.push_back(key);
        }
        for (const auto& r : def.required) {
            const bool gridded = std::any_of(shape.axes.begin(), shape.axes.end(),
                                             [&](const SweepAxis& a) { return a.name == r; });
            if (!gridded && !fixed.count(r))
                throw ConfigError(r, "required by oracle " + name + " (use --set or --grid)");
        }
        const std::size_t n = shape.point_count();
        if (n > kDefaultSweepCap)
            throw ConfigError("--grid", "grid has " + std::to_string(n) + " points, cap is " +
                                            std::to_string(kDefaultSweepCap));

        Table table;
        for (const auto& k : order) {
            table.columns.push_back(k);
            table.integer.push_back(kIntegerKeys.count(k) > 0);
        }
        for (const auto& c : def.columns) {
            table.columns.push_back(c);
            table.integer.push_back(c == "level");
        }
        for (std::size_t i = 0; i < n; ++i) {
            Values v = fixed;
            const auto coords = point_coordinates(shape, i);
            for (std::size_t a = 0; a < coords.size(); ++a)
                v[shape.axes[a].name] = coords[a];
            std::vector<std::vector<double>> rows;
            try {
                rows = def.eval(v);
            } catch (const DomainError& e) {
                throw ConfigError(name, e.what());
            }
            for (auto& r : rows) {
                std::vector<double> line;
                for (const auto& k : order)
                    line.push_back(v.at(k));
                line.insert(line.end(), r.begin(), r.end());
                table.rows.push_back(std::move(line));
            }
        }
        FileHeader header;
        header.entries = {{"bhsim", kVersion}, {"oracle", name}, {"time_unit", "1/J"}};
        out << render(table, header, format);
        return static_cast<int>(kExitOk);
    });
}

} // namespace bhsim::app
