#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcag::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

/// Process environment via std::getenv.
std::optional<std::string> process_env(std::string_view name);

/// Settings resolved from flags, the config file and the environment, in
/// that order of precedence.
struct CliConfig {
  std::filesystem::path store_path;
  std::optional<std::filesystem::path> schema_path;
  std::optional<std::filesystem::path> mappings_path;
  std::string format = "csv";
};

/// `$LCAG_CONFIG`, else `$XDG_CONFIG_HOME/lcag/config`, else
/// `$HOME/.config/lcag/config`.
std::optional<std::filesystem::path> default_config_path(const EnvLookup& env);

/// Plain `key = value` lines; `#` starts a comment. Keys: store, schema,
/// mappings, format. Throws lcag::FormatError on malformed lines.
CliConfig parse_config(std::string_view text, CliConfig base = {});

/// Runs one command line (args[0] is the program name) and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = process_env);

}  // namespace lcag::cli
