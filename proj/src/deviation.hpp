#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>

#include "rwgame/game.hpp"
#include "rwgame/rng.hpp"

namespace rwgame::detail {

/// Random strategies inside the box [0, cap] with distortion at most d. Half
/// of the draws are stretched to spend the whole budget (capped at the box),
/// and a third are restricted to a random subset of sub-covers.
class DeviationSampler {
 public:
  DeviationSampler(const GameConfig& cfg, Strategy cap, std::uint64_t seed)
      : cfg_(cfg), cap_(std::move(cap)), rng_(seed) {}

  Strategy next() {
    const std::size_t l = cap_.size();
    Strategy u = Strategy::zeros(l);
    const bool sparse = rng_.below(3) == 0;
    const std::size_t keep = rng_.below(l);
    for (std::size_t i = 0; i < l; ++i) {
      if (sparse && i != keep && rng_.bit()) continue;
      u[i] = rng_.uniform() * cap_[i];
    }
    const double du = distortion(u, cfg_.cover.n, cfg_.cost);
    if (du <= 0.0) return u;
    const bool stretch = rng_.bit();
    if (!stretch && du <= cfg_.d) return u;
    const double scale = cfg_.d / du;
    for (std::size_t i = 0; i < l; ++i) u[i] = std::min(cap_[i], scale * u[i]);
    return u;
  }

 private:
  const GameConfig& cfg_;
  Strategy cap_;
  Rng rng_;
};

inline bool within_budget(const Strategy& v, const GameConfig& cfg) {
  return distortion(v, cfg.cover.n, cfg.cost) <= cfg.d * (1.0 + 1e-12) + 1e-12;
}

}  // namespace rwgame::detail
