#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rwgame/game.hpp"
#include "rwgame/report.hpp"

namespace rwgame {

struct SolverOptions {
  /// Distortion residual, relative to the target when the target exceeds 1.
  double distortion_tol = 1e-9;
  double ratio_tol = 1e-6;
  int max_iterations = 200;
};

/// Equilibrium levels: S_1 = alpha for Alice, T_1 = beta for Bob.
struct AlphaBeta {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Bob's per-bit rate on a sub-cover Alice embedded into: 1 - H(p + s/2 - p*s).
double bob_unit_capacity(double p, double s);

/// Alice's per-bit rate on a sub-cover Bob embedded into: 1 - H(t/2) - H(p).
double alice_unit_capacity(double p, double t);

/// Smallest level at which both strategy_from_alpha and strategy_from_beta
/// are identically zero, and never less than 1.
double level_upper_bound(const CoverSpec& cover, const CostModel& cost);

/// s_i = clamp((H^-1(1 - alpha*rho_i/rho_1) - p_i) / (1/2 - p_i)); s_i = 0
/// when p_i = 1/2.
Strategy strategy_from_alpha(double alpha, const CoverSpec& cover, const CostModel& cost);

/// t_i = 2*H^-1(max(0, 1 - H(p_i) - beta*rho_i/rho_1)).
Strategy strategy_from_beta(double beta, const CoverSpec& cover, const CostModel& cost);

/// Bob's largest fair fraction per sub-cover, 2*H^-1(1 - H(p_i)).
Strategy fair_cap(const CoverSpec& cover);

/// Closed form for a single sub-cover: s = t = min(1, 2d/(n*rho_1)).
/// Unlike solve_noncoop this does not cap Bob at the fair fraction.
EquilibriumReport solve_l1(const GameConfig& cfg);

/// Result of a one-dimensional level search.
struct LevelSearch {
  double level = 0.0;
  double target = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Bisection for the level whose strategy spends min(d, distortion at level 0).
LevelSearch search_alpha(const GameConfig& cfg, const SolverOptions& opts = {});
LevelSearch search_beta(const GameConfig& cfg, const SolverOptions& opts = {});

/// Non-cooperative equilibrium for any l, via two independent level searches.
EquilibriumReport solve_noncoop(const GameConfig& cfg, const SolverOptions& opts = {});

/// Max ratio-condition violation over pairs of unclamped coordinates.
double ratio_residual(const GameConfig& cfg, const StrategyProfile& profile);

inline constexpr double kTraceResidualTol = 1e-8;

struct TracePoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double residual = 0.0;
  bool feasible = false;
};

struct TraceRow {
  StrategyProfile profile;
  Payoffs payoffs;
  double distortion_alice = 0.0;
  double distortion_bob = 0.0;
};

struct TraceResult {
  std::vector<TracePoint> alice_curve;  // (s_1, s_2) with S_1/S_2 = rho_1/rho_2
  std::vector<TracePoint> bob_curve;    // (t_1, t_2) with T_1/T_2 = rho_1/rho_2
  std::vector<TraceRow> rows;           // grid indices where both curves are feasible
  /// Points on each curve where the distortion reaches d. Absent when d lies
  /// outside the distortion range of the feasible part of the curve.
  std::optional<Strategy> alice_endpoint;
  std::optional<Strategy> bob_endpoint;
};

/// Samples the l = 2 ratio locus on a uniform grid of `steps` values of the
/// first coordinate.
TraceResult trace_l2(const GameConfig& cfg, int steps);

struct DeviationReport {
  double max_gain_alice = 0.0;
  double max_gain_bob = 0.0;
  std::size_t samples_alice = 0;
  std::size_t samples_bob = 0;
  Strategy best_alice_deviation;
  Strategy best_bob_deviation;
};

/// Samples budget-feasible unilateral deviations (random strategies rescaled
/// to the budget, plus the alpha or beta family) and reports the largest
/// payoff improvement per player. Bob's deviations respect the fair cap.
DeviationReport verify_equilibrium(const GameConfig& cfg, const StrategyProfile& profile,
                                   int grid, std::uint64_t seed = 1);

struct SweepRow {
  double p_max = 0.0;
  double alice_per_n = 0.0;
  double bob_per_n = 0.0;
};

/// l = 1 equilibrium payoffs divided by n for p_max on a uniform grid over [0, 1].
std::vector<SweepRow> sweep_pmax(double p1, std::int64_t n, int steps);

}  // namespace rwgame
