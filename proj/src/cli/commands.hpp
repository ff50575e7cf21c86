#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "output.hpp"

namespace spherevol::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kBadInput = 1,
  kNotConverged = 2,
  kModuleError = 3,
  kReplayMismatch = 4,
};

struct CommandOutcome {
  nlohmann::json payload;     // deterministic results
  std::optional<Table> table; // CSV rendering, when tabular
  std::optional<unsigned long long> seed;
};

/// Reproducible record of one run. `argv` holds the subcommand and its
/// flags, minus --manifest/--json/--csv, so replaying it recomputes
/// `results` exactly for deterministic commands.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json parameters;
  std::optional<unsigned long long> seed;
  std::string tool_version;
  double wall_time_s = 0.0;
  nlohmann::json results;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

// Runs a subcommand given its arguments (without the program name).
// Results go to `out`, diagnostics to `err`; returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses and executes without printing; throws on any error.
CommandOutcome execute(const std::vector<std::string>& args);

const char* tool_version();

}  // namespace spherevol::cli
