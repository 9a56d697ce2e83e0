#pragma once

#include <iosfwd>
#include <optional>

#include "adex/cli/config.hpp"

namespace adex::cli {

// Command-line overrides layered on top of the config file.
struct CliOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
};

// Each command returns a process exit code; config problems are thrown as
// config_error and mapped by the caller.
int cmd_solve(const ConfigFile& cfg, const CliOptions& opts, std::ostream& out);
int cmd_simulate(const ConfigFile& cfg, const CliOptions& opts, std::ostream& out);
int cmd_frontier(const ConfigFile& cfg, const CliOptions& opts, std::ostream& out);
int cmd_selftest(const CliOptions& opts, std::ostream& out);

}  // namespace adex::cli
