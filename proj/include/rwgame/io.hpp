#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwgame/coop.hpp"
#include "rwgame/embed_sim.hpp"
#include "rwgame/game.hpp"
#include "rwgame/noncoop.hpp"
#include "rwgame/report.hpp"

namespace rwgame {

/// Significant digits of every emitted floating-point number.
inline constexpr int kOutputDigits = 12;

/// Locale-independent shortest form at kOutputDigits significant digits.
std::string format_number(double x);

/// x rounded to kOutputDigits significant digits.
double round_output(double x);

/// A game configuration file, plus an optional explicit profile ("s", "t")
/// used by the simulate command.
struct ConfigFile {
  GameConfig game;
  std::optional<StrategyProfile> profile;
};

/// Schema:
///   { "n": int, "p": [real], "rho": [real] (optional), "d": real,
///     "mode": "noncoop" | "coop-shared-key" | "coop-no-key",
///     "s": [real] (optional), "t": [real] (optional) }
/// Without "rho" the cost defaults to H(p_1)/H(p_i), so rho_1 = 1.
/// Throws ValidationError on malformed input or violated invariants.
ConfigFile parse_config(const std::string& text);

nlohmann::ordered_json to_json(const EquilibriumReport& report);
nlohmann::ordered_json to_json(const DeviationReport& report);
nlohmann::ordered_json to_json(const CoopCheckReport& report);
nlohmann::ordered_json to_json(const KnapsackSolution& solution);
nlohmann::ordered_json to_json(const SimulationReport& report);

/// Header p_max,payoff_alice_per_n,payoff_bob_per_n.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Header s1,s2,t1,t2,PA,PB,DA,DB.
std::string trace_csv(const TraceResult& trace);

}  // namespace rwgame
