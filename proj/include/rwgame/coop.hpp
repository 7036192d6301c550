#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rwgame/game.hpp"
#include "rwgame/report.hpp"

namespace rwgame {

/// Solution of a single-constraint box LP. At most one coordinate of w is
/// strictly inside (0, 1).
struct KnapsackSolution {
  std::vector<double> w;
  double objective = 0.0;
  double budget_used = 0.0;
  std::optional<std::size_t> fractional_index;
};

/// max sum values_i*w_i  s.t.  sum weights_i*w_i <= capacity, w in [0,1]^l.
///
/// Greedy continuous knapsack: items are taken in order of value/weight,
/// highest first, ties going to the lower index, and the item at which the
/// capacity binds is taken fractionally. Items with non-positive value are
/// never taken.
KnapsackSolution solve_continuous_knapsack(std::span<const double> values,
                                           std::span<const double> weights, double capacity);

/// The shared-key combined-fraction LP: values n/2*(1 - H(p_i)), weights
/// n/4*rho_i, capacity d.
KnapsackSolution shared_key_knapsack(const GameConfig& cfg);

/// Cooperative equilibrium with a shared position key. The players split the
/// combined fraction evenly: s* = t* = w*/2.
EquilibriumReport solve_coop_shared(const GameConfig& cfg);

/// Exhaustive search of the shared-key LP over the grid {0, 1/grid, ..., 1}^l.
/// Only for l <= 4.
KnapsackSolution lp_oracle(const GameConfig& cfg, int grid);

struct NoKeyOptions {
  double step_tol = 1e-6;
  int probe_points = 16;
  int fallback_grid = 256;
  int fallback_refinements = 2;
};

/// Cooperative equilibrium without a shared key: maximizes
/// min(P_A, P_B) over the (alpha, beta) family restricted to the budget.
EquilibriumReport solve_coop_nokey(const GameConfig& cfg, const NoKeyOptions& opts = {});

/// Feasible level box of the no-key game: [alpha_min, upper] x [beta_min, upper].
struct LevelBox {
  double alpha_min = 0.0;
  double beta_min = 0.0;
  double upper = 1.0;
};
LevelBox nokey_level_box(const GameConfig& cfg);

/// min(P_A, P_B) at (s(alpha), t(beta)).
double nokey_objective(const GameConfig& cfg, double alpha, double beta);

enum class DeviationFamily { kGeneral, kAlphaBeta };

struct CoopCheckReport {
  /// Largest increase of the cooperative payoff P found by a unilateral
  /// deviation (first condition).
  double stage1_gain_alice = 0.0;
  double stage1_gain_bob = 0.0;
  /// Among deviations that tie on P, the largest excess of the cross payoff
  /// (P_B after an Alice deviation, P_A after a Bob deviation) over
  /// max(P_A*, P_B*) (second condition).
  double stage2_excess = 0.0;
  std::size_t ties = 0;
  std::size_t samples = 0;

  bool stage1_passes(double tol) const {
    return stage1_gain_alice <= tol && stage1_gain_bob <= tol;
  }
  bool passes(double tol) const { return stage1_passes(tol) && stage2_excess <= tol; }
};

/// Samples unilateral deviations from a cooperative profile. The payoff model
/// follows cfg.mode: shared key uses P = sum n*min(s_i, t_i)*(1 - H(p_i)) and
/// positions disjoint from the partner's; no key uses P = min(P_A, P_B).
CoopCheckReport coop_equilibrium_check(const GameConfig& cfg, const StrategyProfile& profile,
                                       int grid, DeviationFamily family,
                                       std::uint64_t seed = 1, double tie_tol = 1e-9);

}  // namespace rwgame
