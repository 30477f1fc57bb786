#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "scarlab/config.hpp"

namespace scarlab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kResourceRefusal = 3,
  kNumericalFailure = 4,
};

struct Options {
  std::filesystem::path out_dir = "out";
  bool allow_large = false;
};

/// Known sections and keys; anything else in a config file is rejected.
void validate_config(const ConfigFile& config);

/// `section.key=value` overrides applied after the config file.
void apply_overrides(ConfigFile& config, const std::vector<std::string>& overrides);

int solve1d(const ConfigFile& config, const Options& opts, std::ostream& out);
int solve3d(const ConfigFile& config, const Options& opts, std::ostream& out);
int analyze(const ConfigFile& config, const Options& opts, std::ostream& out);
int orbit(const ConfigFile& config, const Options& opts, std::ostream& out);
int estimate(const ConfigFile& config, const Options& opts, std::ostream& out);
int report(const ConfigFile& config, const Options& opts, std::ostream& out);

/// Runs one subcommand by name, mapping exceptions to exit codes and
/// printing diagnostics to `err`.
int run(const std::string& command, const ConfigFile& config, const Options& opts,
        std::ostream& out, std::ostream& err);

}  // namespace scarlab::cli
