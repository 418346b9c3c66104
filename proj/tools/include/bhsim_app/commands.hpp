#pragma once

#include "bhsim_app/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace bhsim::app {

enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitConfig = 2 };

struct CommandOptions {
    std::filesystem::path out_dir = ".";
    int threads = 0;  ///< 0: BHSIM_THREADS, then 1
    Overrides overrides;
};

int run_command(const std::filesystem::path& config, const CommandOptions& options,
                std::ostream& log);
int sweep_command(const std::filesystem::path& config, const CommandOptions& options,
                  std::ostream& log);

/// @p grid entries: "name=start:stop:step" or "name=v1,v2,...". @p set entries: "name=value".
int oracle_command(const std::string& name, const std::vector<std::string>& grid,
                   const std::vector<std::string>& set, OutputFormat format, std::ostream& out,
                   std::ostream& log);

std::vector<std::string> oracle_names();

} // namespace bhsim::app
