#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rwgame/commands.hpp"

int main(int argc, char** argv) {
  rwgame::RunConfig run;
  CLI::App app{"Rate-distortion game solver for two-encoder reversible watermarking"};
  app.add_option("command", run.command, "solve | sweep-pmax | trace-l2 | simulate | oracle")
      ->required()
      ->check(CLI::IsMember({"solve", "sweep-pmax", "trace-l2", "simulate", "oracle"}));
  app.add_option("--input", run.input, "JSON game config");
  app.add_option("--output", run.output, "Output path (default: standard output)");
  app.add_option("--seed", run.seed, "Seed for deviation sampling and simulation");
  app.add_option("--steps", run.steps, "Grid size of sweep-pmax and trace-l2");
  app.add_option("--grid", run.grid, "Deviation samples (oracle) or LP grid resolution");
  app.add_option("--tol-distortion", run.tol_distortion, "Relative distortion tolerance");
  app.add_option("--tol-ratio", run.tol_ratio, "Ratio-condition tolerance");
  app.add_option("--p1", run.p1, "Sub-cover probability for sweep-pmax");
  app.add_option("--n", run.n, "Bits per sub-cover for sweep-pmax");
  app.add_option("--mode", run.mode, "Override the config's game mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rwgame::kExitValidation;
  }

  const rwgame::CommandResult result = rwgame::run_command(run);
  if (!result.message.empty()) std::cerr << result.message << '\n';
  if (!result.output.empty()) {
    if (run.output.empty()) {
      std::cout << result.output;
    } else {
      std::ofstream out(run.output, std::ios::binary);
      if (!out) {
        std::cerr << "cannot write '" << run.output << "'\n";
        return rwgame::kExitValidation;
      }
      out << result.output;
    }
  }
  return result.exit_code;
}
