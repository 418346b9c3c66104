#include "bhsim_app/commands.hpp"

#include <bhsim/version.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    using namespace bhsim::app;

    CLI::App app{"Bose-Hubbard transmon chain simulator"};
    app.set_version_flag("--version", bhsim::kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    CommandOptions opts;
    std::string out_dir = ".";
    int threads = 0;
    std::uint64_t seed = 0;
    std::string format;
    app.add_option("--out-dir", out_dir, "directory for result files")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (default: $BHSIM_THREADS, else 1)")
        ->check(CLI::NonNegativeNumber);
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    app.add_option("--format", format, "csv or json (overrides the config)")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string config;
    auto* run = app.add_subcommand("run", "run one experiment config");
    run->add_option("config", config, "experiment JSON")->required();
    auto* sweep = app.add_subcommand("sweep", "run a config over its grid axes");
    sweep->add_option("config", config, "experiment JSON")->required();

    std::string oracle;
    std::vector<std::string> grid, set;
    auto* orc = app.add_subcommand("oracle", "tabulate a closed-form reference");
    orc->add_option("name", oracle, "oracle name")->required();
    orc->add_option("--grid", grid, "axis as name=start:stop:step or name=v1,v2,...");
    orc->add_option("--set", set, "fixed parameter as name=value");
    orc->add_flag_callback("--list", [] {
        for (const auto& n : oracle_names())
            std::cout << n << "\n";
        std::exit(0);
    }, "print oracle names and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    opts.out_dir = out_dir;
    opts.threads = threads;
    if (*seed_opt)
        opts.overrides.seed = seed;
    if (!format.empty())
        opts.overrides.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;

    if (*run)
        return run_command(config, opts, std::cerr);
    if (*sweep)
        return sweep_command(config, opts, std::cerr);
    return oracle_command(oracle, grid, set, opts.overrides.format.value_or(OutputFormat::Csv),
                          std::cout, std::cerr);
}
