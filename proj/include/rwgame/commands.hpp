#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace rwgame {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;

/// Command-line settings shared by every command.
struct RunConfig {
  std::string command;  // solve | sweep-pmax | trace-l2 | simulate | oracle
  std::string input;    // JSON game config
  std::string output;   // empty for standard output
  std::uint64_t seed = 1;
  int steps = 101;
  int grid = 1000;
  std::optional<double> tol_distortion;
  std::optional<double> tol_ratio;
  std::optional<double> p1;
  std::int64_t n = 1000;
  std::optional<std::string> mode;

  /// Throws ValidationError on steps < 2, grid < 2 or a missing input file
  /// for commands that read one.
  void validate() const;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string output;   // report body (JSON or CSV)
  std::string message;  // diagnostics for standard error
};

/// Dispatches on run.command. Validation failures come back as exit code 2
/// with the message naming the violated invariant.
CommandResult run_command(const RunConfig& run);

CommandResult run_solve(const RunConfig& run);
CommandResult run_sweep_pmax(const RunConfig& run);
CommandResult run_trace_l2(const RunConfig& run);
CommandResult run_simulate(const RunConfig& run);
CommandResult run_oracle(const RunConfig& run);

}  // namespace rwgame
