#include <algorithm>
#include <limits>

#include "deviation.hpp"
#include "rwgame/noncoop.hpp"

namespace rwgame {

DeviationReport verify_equilibrium(const GameConfig& cfg, const StrategyProfile& profile,
                                   int grid, std::uint64_t seed) {
  cfg.validate();
  check_profile(cfg, profile);
  if (grid < 1) throw ValidationError("verify_equilibrium: grid must be positive");

  const Payoffs base = total_payoffs(cfg, profile);
  const double upper = level_upper_bound(cfg.cover, cfg.cost);
  const std::size_t l = cfg.l();

  DeviationReport out;
  out.max_gain_alice = -std::numeric_limits<double>::infinity();
  out.max_gain_bob = -std::numeric_limits<double>::infinity();

  auto try_alice = [&](const Strategy& s) {
    const double gain = total_payoffs(cfg, {s, profile.t}).alice - base.alice;
    ++out.samples_alice;
    if (gain > out.max_gain_alice) {
      out.max_gain_alice = gain;
      out.best_alice_deviation = s;
    }
  };
  auto try_bob = [&](const Strategy& t) {
    const double gain = total_payoffs(cfg, {profile.s, t}).bob - base.bob;
    ++out.samples_bob;
    if (gain > out.max_gain_bob) {
      out.max_gain_bob = gain;
      out.best_bob_deviation = t;
    }
  };

  detail::DeviationSampler alice_draws(cfg, Strategy::ones(l), derive_seed(seed, 1));
  detail::DeviationSampler bob_draws(cfg, fair_cap(cfg.cover), derive_seed(seed, 2));
  for (int k = 0; k < grid; ++k) {
    try_alice(alice_draws.next());
    try_bob(bob_draws.next());
  }

  for (int k = 0; k < grid; ++k) {
    const double level = grid == 1 ? upper : upper * k / static_cast<double>(grid - 1);
    const Strategy s = strategy_from_alpha(level, cfg.cover, cfg.cost);
    if (detail::within_budget(s, cfg)) try_alice(s);
    const Strategy t = strategy_from_beta(level, cfg.cover, cfg.cost);
    if (detail::within_budget(t, cfg)) try_bob(t);
  }

  if (out.samples_alice == 0) out.max_gain_alice = 0.0;
  if (out.samples_bob == 0) out.max_gain_bob = 0.0;
  return out;
}

}  // namespace rwgame
