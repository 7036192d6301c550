#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "instances.hpp"
#include "rwgame/coop.hpp"
#include "rwgame/entropy.hpp"
#include "rwgame/noncoop.hpp"

using namespace rwgame;

namespace {

GameConfig worked(double d = 400, GameMode mode = GameMode::kCoopSharedKey) {
  GameConfig cfg;
  cfg.cover = {1000, {0.005, 0.05}};
  cfg.cost.rho = {2.0, 1.0};
  cfg.d = d;
  cfg.mode = mode;
  return cfg;
}

// Plain exhaustive search over the grid, no pruning.
double brute_force(const GameConfig& cfg, int grid) {
  const double n = static_cast<double>(cfg.cover.n);
  const std::size_t l = cfg.l();
  std::vector<double> val(l), wt(l);
  for (std::size_t i = 0; i < l; ++i) {
    val[i] = 0.5 * n * (1 - binary_entropy(cfg.cover.p[i]));
    wt[i] = 0.25 * n * cfg.cost.rho[i];
  }
  std::array<int, 3> k{};
  double best = 0;
  const int top2 = l > 2 ? grid : 0, top1 = l > 1 ? grid : 0;
  for (k[2] = 0; k[2] <= top2; ++k[2])
    for (k[1] = 0; k[1] <= top1; ++k[1])
      for (k[0] = 0; k[0] <= grid; ++k[0]) {
        double used = 0, obj = 0;
        for (std::size_t i = 0; i < l; ++i) {
          used += wt[i] * k[i] / grid;
          obj += val[i] * k[i] / grid;
        }
        if (used <= cfg.d) best = std::max(best, obj);
      }
  return best;
}

}  // namespace

TEST(Knapsack, GreedyByDensity) {
  const std::vector<double> v{1.0, 3.0, 2.0};
  const std::vector<double> w{1.0, 1.0, 1.0};
  const KnapsackSolution s = solve_continuous_knapsack(v, w, 1.5);
  EXPECT_EQ(s.w, (std::vector<double>{0.0, 1.0, 0.5}));
  EXPECT_DOUBLE_EQ(s.objective, 4.0);
  EXPECT_DOUBLE_EQ(s.budget_used, 1.5);
  ASSERT_TRUE(s.fractional_index);
  EXPECT_EQ(*s.fractional_index, 2u);
}

TEST(Knapsack, TiesGoToLowerIndex) {
  const std::vector<double> v{1.0, 1.0};
  const std::vector<double> w{1.0, 1.0};
  const KnapsackSolution s = solve_continuous_knapsack(v, w, 0.5);
  EXPECT_EQ(s.w, (std::vector<double>{0.5, 0.0}));
}

TEST(Knapsack, SkipsWorthlessItems) {
  const std::vector<double> v{0.0, 1.0};
  const std::vector<double> w{1.0, 1.0};
  const KnapsackSolution s = solve_continuous_knapsack(v, w, 5.0);
  EXPECT_EQ(s.w, (std::vector<double>{0.0, 1.0}));
  EXPECT_FALSE(s.fractional_index);
}

TEST(Knapsack, AtMostOneFractional) {
  Rng rng(31);
  for (int k = 0; k < 200; ++k) {
    const std::size_t l = 1 + rng.below(8);
    std::vector<double> v(l), w(l);
    double total = 0;
    for (std::size_t i = 0; i < l; ++i) {
      v[i] = rng.uniform();
      w[i] = 0.1 + rng.uniform();
      total += w[i];
    }
    const KnapsackSolution s = solve_continuous_knapsack(v, w, rng.uniform() * total);
    EXPECT_LE(std::count_if(s.w.begin(), s.w.end(), [](double x) { return x > 0 && x < 1; }), 1);
  }
}

TEST(SharedKey, WorkedInstance) {
  const EquilibriumReport r = solve_coop_shared(worked());
  ASSERT_TRUE(r.combined_fraction);
  EXPECT_NEAR((*r.combined_fraction)[0], 0.3, 1e-12);
  EXPECT_NEAR((*r.combined_fraction)[1], 1.0, 1e-12);
  EXPECT_NEAR(*r.cooperative_payoff, 499.9893175919528, 1e-9);
  EXPECT_NEAR(*r.cooperative_payoff, 500.0, 0.1);
  EXPECT_EQ(r.profile.s.v, r.profile.t.v);
  EXPECT_DOUBLE_EQ(r.payoff_alice, r.payoff_bob);
  EXPECT_NEAR(r.profile.s[0], 0.15, 1e-12);
}

TEST(SharedKey, ZeroBudget) {
  const EquilibriumReport r = solve_coop_shared(worked(0));
  EXPECT_EQ(*r.cooperative_payoff, 0.0);
  for (double v : r.profile.s.v) EXPECT_EQ(v, 0.0);
}

TEST(SharedKey, SaturatesAboveMaximum) {
  const EquilibriumReport r = solve_coop_shared(worked(5000));
  EXPECT_EQ(*r.combined_fraction, (std::vector<double>{1.0, 1.0}));
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(SharedKey, MonotoneInBudget) {
  double prev = -1;
  for (double d = 0; d <= 800; d += 20) {
    const double obj = *solve_coop_shared(worked(d)).cooperative_payoff;
    EXPECT_GE(obj, prev);
    prev = obj;
  }
}

TEST(SharedKey, DoubledBudgetFormulationIsEquivalent) {
  Rng rng(32);
  for (int k = 0; k < 50; ++k) {
    const GameConfig cfg = fixtures::random_game(rng, 1 + rng.below(5), GameMode::kCoopSharedKey);
    const KnapsackSolution a = shared_key_knapsack(cfg);
    const double n = static_cast<double>(cfg.cover.n);
    std::vector<double> v, w;
    for (std::size_t i = 0; i < cfg.l(); ++i) {
      v.push_back(n * (1 - binary_entropy(cfg.cover.p[i])));
      w.push_back(0.5 * n * cfg.cost.rho[i]);
    }
    const KnapsackSolution b = solve_continuous_knapsack(v, w, 2 * cfg.d);
    for (std::size_t i = 0; i < cfg.l(); ++i) EXPECT_NEAR(a.w[i], b.w[i], 1e-12);
    EXPECT_NEAR(2 * a.objective, b.objective, 1e-9 * b.objective + 1e-12);
  }
}

TEST(SharedKey, GridOracleAgreesWithBruteForce) {
  Rng rng(33);
  for (int k = 0; k < 10; ++k) {
    const std::size_t l = 1 + rng.below(3);
    const GameConfig cfg = fixtures::random_game(rng, l, GameMode::kCoopSharedKey, 0.0, 1.1);
    EXPECT_NEAR(lp_oracle(cfg, 40).objective, brute_force(cfg, 40), 1e-9);
  }
}

TEST(SharedKey, GridOracleRejectsLargeL) {
  Rng rng(34);
  EXPECT_THROW(lp_oracle(fixtures::random_game(rng, 5, GameMode::kCoopSharedKey), 10),
               ValidationError);
}

TEST(SharedKey, CheckerAcceptsSolution) {
  Rng rng(35);
  for (int k = 0; k < 10; ++k) {
    const GameConfig cfg = fixtures::random_game(rng, 1 + rng.below(4), GameMode::kCoopSharedKey);
    const EquilibriumReport r = solve_coop_shared(cfg);
    const CoopCheckReport c =
        coop_equilibrium_check(cfg, r.profile, 300, DeviationFamily::kGeneral, k);
    EXPECT_TRUE(c.passes(1e-6 * static_cast<double>(cfg.cover.n)));
    EXPECT_GT(c.samples, 0u);
  }
}

TEST(SharedKey, RejectsOtherModes) {
  EXPECT_THROW(solve_coop_shared(worked(400, GameMode::kNonCooperative)), ValidationError);
  EXPECT_THROW(solve_coop_nokey(worked(400, GameMode::kCoopSharedKey)), ValidationError);
}

TEST(NoKey, WorkedInstanceIsBalancedAndFeasible) {
  const GameConfig cfg = worked(400, GameMode::kCoopNoKey);
  const EquilibriumReport r = solve_coop_nokey(cfg);
  EXPECT_LE(r.distortion_alice, 400 * (1 + 1e-9));
  EXPECT_LE(r.distortion_bob, 400 * (1 + 1e-9));
  EXPECT_NEAR(*r.cooperative_payoff, std::min(r.payoff_alice, r.payoff_bob), 1e-9);
  ASSERT_TRUE(r.alpha && r.beta);
  EXPECT_NEAR(nokey_objective(cfg, *r.alpha, *r.beta), *r.cooperative_payoff, 1e-9);
}

TEST(NoKey, AtLeastTheNonCooperativeMinimum) {
  Rng rng(36);
  for (int k = 0; k < 10; ++k) {
    GameConfig cfg = fixtures::random_game(rng, 1 + rng.below(3), GameMode::kNonCooperative);
    const EquilibriumReport nc = solve_noncoop(cfg);
    cfg.mode = GameMode::kCoopNoKey;
    const EquilibriumReport r = solve_coop_nokey(cfg);
    EXPECT_GE(*r.cooperative_payoff,
              std::min(nc.payoff_alice, nc.payoff_bob) - 1e-6 * static_cast<double>(cfg.cover.n));
  }
}

TEST(NoKey, CheckerAcceptsSolution) {
  const GameConfig cfg = worked(400, GameMode::kCoopNoKey);
  const EquilibriumReport r = solve_coop_nokey(cfg);
  const CoopCheckReport c = coop_equilibrium_check(cfg, r.profile, 300, DeviationFamily::kAlphaBeta);
  EXPECT_TRUE(c.stage1_passes(1e-6 * 1000));
}

TEST(NoKey, ZeroBudget) {
  const EquilibriumReport r = solve_coop_nokey(worked(0, GameMode::kCoopNoKey));
  EXPECT_EQ(*r.cooperative_payoff, 0.0);
}

TEST(NoKey, LevelFamilyIsNotExhaustive) {
  // General deviations can raise min(P_A, P_B) off the (alpha, beta) family.
  const GameConfig cfg = worked(400, GameMode::kCoopNoKey);
  const EquilibriumReport r = solve_coop_nokey(cfg);
  const CoopCheckReport c = coop_equilibrium_check(cfg, r.profile, 1000, DeviationFamily::kGeneral);
  EXPECT_GT(c.stage1_gain_bob, 1.0);
}
