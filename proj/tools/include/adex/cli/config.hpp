#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "adex/simulator.hpp"

namespace adex::cli {

// Reported with exit code 2; anything else escaping a command maps to 3.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSection {
  std::int64_t n = 0;
  std::int64_t trials = 1;
  std::uint64_t base_seed = 0;
};

struct FrontierGrid {
  double beta_start = 0.01;
  double beta_stop = 0.99;
  double beta_step = 0.001;

  std::vector<double> betas() const;
};

// Parsed experiment definition. Sections are optional at parse time; each
// command validates that the sections it needs are present.
struct ConfigFile {
  std::optional<Instance> instance;
  std::optional<CostModel> costs;
  std::optional<RuleConfig> rule;
  std::optional<StopKind> stop;
  std::optional<RunSection> run;
  std::optional<std::string> output_dir;
  std::optional<FrontierGrid> frontier;
  std::uint64_t hash = 0;  // FNV-1a of the raw config bytes
};

// Strict parser: unknown keys, keys that do not apply to the chosen kind,
// and values violating module preconditions are all config errors.
ConfigFile parse_config(const std::string& text);
ConfigFile load_config_file(const std::string& path);

}  // namespace adex::cli
