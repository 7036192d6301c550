#include "rwgame/commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rwgame/io.hpp"

namespace rwgame {

using nlohmann::ordered_json;

namespace {

bool reads_input(const std::string& command) { return command != "sweep-pmax"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("input: cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ConfigFile load(const RunConfig& run) {
  ConfigFile cfg = parse_config(read_file(run.input));
  if (run.mode) cfg.game.mode = parse_game_mode(*run.mode);
  return cfg;
}

SolverOptions solver_options(const RunConfig& run) {
  SolverOptions opts;
  if (run.tol_distortion) opts.distortion_tol = *run.tol_distortion;
  if (run.tol_ratio) opts.ratio_tol = *run.tol_ratio;
  return opts;
}

EquilibriumReport solve(const GameConfig& game, const RunConfig& run) {
  switch (game.mode) {
    case GameMode::kCoopSharedKey:
      return solve_coop_shared(game);
    case GameMode::kCoopNoKey:
      return solve_coop_nokey(game);
    case GameMode::kNonCooperative:
      break;
  }
  return solve_noncoop(game, solver_options(run));
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

CommandResult unconverged(CommandResult result, const EquilibriumReport& report) {
  if (!report.converged) {
    result.exit_code = kExitNonConvergence;
    result.message = "solver did not converge";
    for (const auto& d : report.diagnostics) result.message += "; " + d;
  }
  return result;
}

}  // namespace

void RunConfig::validate() const {
  if (steps < 2) throw ValidationError("run: steps must be >= 2 (got " + std::to_string(steps) + ")");
  if (grid < 2) throw ValidationError("run: grid must be >= 2 (got " + std::to_string(grid) + ")");
  if (reads_input(command)) {
    if (input.empty()) throw ValidationError("run: --input is required for " + command);
    if (!std::filesystem::exists(input)) throw ValidationError("run: input '" + input + "' does not exist");
  }
}

CommandResult run_command(const RunConfig& run) {
  try {
    run.validate();
    if (run.command == "solve") return run_solve(run);
    if (run.command == "sweep-pmax") return run_sweep_pmax(run);
    if (run.command == "trace-l2") return run_trace_l2(run);
    if (run.command == "simulate") return run_simulate(run);
    if (run.command == "oracle") return run_oracle(run);
    throw ValidationError("run: unknown command '" + run.command + "'");
  } catch (const ValidationError& e) {
    return {kExitValidation, "", e.what()};
  } catch (const std::domain_error& e) {
    return {kExitValidation, "", e.what()};
  }
}

CommandResult run_solve(const RunConfig& run) {
  const ConfigFile cfg = load(run);
  const EquilibriumReport report = solve(cfg.game, run);
  return unconverged({kExitOk, dump(to_json(report)), ""}, report);
}

CommandResult run_sweep_pmax(const RunConfig& run) {
  if (!run.p1) throw ValidationError("run: --p1 is required for sweep-pmax");
  return {kExitOk, sweep_csv(sweep_pmax(*run.p1, run.n, run.steps)), ""};
}

CommandResult run_trace_l2(const RunConfig& run) {
  const ConfigFile cfg = load(run);
  const TraceResult trace = trace_l2(cfg.game, run.steps);
  CommandResult result{kExitOk, trace_csv(trace), ""};
  auto point = [](const std::optional<Strategy>& x) {
    if (!x) return ordered_json(nullptr);
    ordered_json j = ordered_json::array();
    for (double v : x->v) j.push_back(round_output(v));
    return j;
  };
  ordered_json end;
  end["alice_endpoint"] = point(trace.alice_endpoint);
  end["bob_endpoint"] = point(trace.bob_endpoint);
  result.message = "endpoint " + end.dump();
  return result;
}

CommandResult run_simulate(const RunConfig& run) {
  ConfigFile cfg = load(run);
  StrategyProfile profile;
  if (cfg.profile) {
    profile = *cfg.profile;
  } else {
    const EquilibriumReport report = solve(cfg.game, run);
    if (!report.converged) return unconverged({}, report);
    profile = report.profile;
  }
  try {
    const SimulationReport sim = simulate_two_layer(cfg.game, profile, seeds_from(run.seed));
    return {kExitOk, dump(to_json(sim)), ""};
  } catch (const PayloadTooLarge& e) {
    return {kExitValidation, "", std::string("simulate: ") + e.what()};
  }
}

CommandResult run_oracle(const RunConfig& run) {
  const ConfigFile cfg = load(run);
  const GameConfig& game = cfg.game;
  const EquilibriumReport report = solve(game, run);
  const double tol = 1e-6 * static_cast<double>(game.cover.n);

  ordered_json j;
  j["mode"] = std::string(to_string(game.mode));
  j["grid"] = run.grid;
  j["seed"] = run.seed;
  j["tolerance"] = round_output(tol);
  j["solution"] = to_json(report);
  bool certified = false;
  if (game.mode == GameMode::kNonCooperative) {
    const DeviationReport dev = verify_equilibrium(game, report.profile, run.grid, run.seed);
    j["deviations"] = to_json(dev);
    certified = dev.max_gain_alice <= tol && dev.max_gain_bob <= tol;
  } else {
    const auto family = game.mode == GameMode::kCoopNoKey ? DeviationFamily::kAlphaBeta
                                                          : DeviationFamily::kGeneral;
    const CoopCheckReport check =
        coop_equilibrium_check(game, report.profile, run.grid, family, run.seed);
    j["deviation_family"] = family == DeviationFamily::kGeneral ? "general" : "alpha-beta";
    j["deviations"] = to_json(check);
    certified = check.stage1_passes(tol);
    j["stage2_passes"] = check.stage2_excess <= tol;
    if (family == DeviationFamily::kAlphaBeta) {
      // Reported only: the level family need not contain every improving move.
      const CoopCheckReport general =
          coop_equilibrium_check(game, report.profile, run.grid, DeviationFamily::kGeneral, run.seed);
      j["general_deviations"] = to_json(general);
      j["general_stage1_passes"] = general.stage1_passes(tol);
    }
    if (game.mode == GameMode::kCoopSharedKey && game.l() <= 4) {
      const KnapsackSolution grid = lp_oracle(game, run.grid);
      j["lp_oracle"] = to_json(grid);
      j["lp_oracle_gap"] = round_output(*report.cooperative_payoff - grid.objective);
    }
  }
  j["certified"] = certified;
  return unconverged({kExitOk, dump(j), ""}, report);
}

}  // namespace rwgame
