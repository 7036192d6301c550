#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rwgame/game.hpp"

namespace rwgame {

/// Per-sub-cover breakdown of an equilibrium.
struct SubcoverTerms {
  double alice_payoff = 0.0;
  double bob_payoff = 0.0;
  double alice_distortion = 0.0;  // d_i^A
  double bob_distortion = 0.0;    // d_i^B
};

/// A coordinate is clamped when it sits on the boundary of [0, 1].
struct ClampFlags {
  bool s = false;
  bool t = false;
};

struct SolverIterations {
  int alpha = 0;
  int beta = 0;
  int evaluations = 0;
};

/// Which payoff functionals a report is evaluated with. With a shared key the
/// players use disjoint positions and Bob causes no extraction errors.
enum class PayoffModel { kInterference, kSharedKey };

struct EquilibriumReport {
  GameMode mode = GameMode::kNonCooperative;
  StrategyProfile profile;
  double payoff_alice = 0.0;
  double payoff_bob = 0.0;
  double distortion_alice = 0.0;
  double distortion_bob = 0.0;
  std::optional<double> alpha;
  std::optional<double> beta;
  /// Cooperative objective (min payoff, or the shared-key sum); absent for
  /// the non-cooperative game.
  std::optional<double> cooperative_payoff;
  /// Combined fraction w = s + t of the shared-key solution.
  std::optional<std::vector<double>> combined_fraction;
  std::vector<SubcoverTerms> per_subcover;
  std::vector<ClampFlags> clamped;
  /// Max |S_j/S_k - rho_j/rho_k| and |T_j/T_k - rho_j/rho_k| over unclamped
  /// pairs. Zero when fewer than two coordinates are free.
  double ratio_residual = 0.0;
  double distortion_residual_alice = 0.0;
  double distortion_residual_bob = 0.0;
  SolverIterations iterations;
  bool converged = true;
  std::vector<std::string> diagnostics;
};

/// Fills payoffs, distortions, per-sub-cover terms and clamp flags for a
/// profile. Solver-specific fields are left at their defaults.
EquilibriumReport evaluate_profile(const GameConfig& cfg, const StrategyProfile& profile,
                                   PayoffModel model = PayoffModel::kInterference);

/// Payoffs under the given model.
Payoffs model_payoffs(const GameConfig& cfg, const StrategyProfile& profile, PayoffModel model);

}  // namespace rwgame
