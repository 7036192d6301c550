#include "rwgame/game.hpp"

#include <cmath>
#include <sstream>

#include "rwgame/entropy.hpp"

namespace rwgame {

namespace {

template <typename... Args>
[[noreturn]] void fail(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  throw ValidationError(os.str());
}

}  // namespace

void CoverSpec::validate() const {
  if (n <= 0) fail("cover: n must be a positive bit count (got ", n, ")");
  if (p.empty()) fail("cover: at least one sub-cover is required (l >= 1)");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0 && p[i] <= 0.5)) {
      fail("cover: invariant 0 < p_i <= 1/2 violated at i=", i + 1, " (p_i=", p[i], ")");
    }
  }
  // H is increasing on (0, 1/2], so comparing p is comparing H(p).
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] < p[i - 1]) {
      fail("cover: invariant H(p_1) <= H(p_2) <= ... <= H(p_l) violated at i=", i + 1,
           " (p_", i, "=", p[i - 1], " > p_", i + 1, "=", p[i], ")");
    }
  }
}

void CostModel::validate() const {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) {
      fail("cost: invariant rho_i > 0 violated at i=", i + 1, " (rho_i=", rho[i], ")");
    }
  }
  for (std::size_t i = 1; i < rho.size(); ++i) {
    if (rho[i] > rho[i - 1]) {
      fail("cost: invariant rho_i >= rho_{i+1} violated at i=", i, " (", rho[i - 1], " < ",
           rho[i], ")");
    }
  }
}

void Strategy::validate() const {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) {
      fail("strategy: invariant 0 <= v_i <= 1 violated at i=", i + 1, " (v_i=", v[i], ")");
    }
  }
}

std::string_view to_string(GameMode mode) {
  switch (mode) {
    case GameMode::kNonCooperative:
      return "noncoop";
    case GameMode::kCoopSharedKey:
      return "coop-shared-key";
    case GameMode::kCoopNoKey:
      return "coop-no-key";
  }
  return "unknown";
}

GameMode parse_game_mode(std::string_view text) {
  if (text == "noncoop") return GameMode::kNonCooperative;
  if (text == "coop-shared-key") return GameMode::kCoopSharedKey;
  if (text == "coop-no-key") return GameMode::kCoopNoKey;
  fail("mode: expected one of noncoop, coop-shared-key, coop-no-key (got '", text, "')");
}

void GameConfig::validate() const {
  cover.validate();
  cost.validate();
  if (cost.size() != cover.l()) {
    fail("config: cost length (", cost.size(), ") must equal l (", cover.l(), ")");
  }
  if (!(d >= 0.0) || !std::isfinite(d)) fail("config: invariant d >= 0 violated (d=", d, ")");
}

double marginal_after_embedding(double p, double s) { return p + 0.5 * s - p * s; }

double alice_subpayoff(double n, double p, double s, double t) {
  return n * s * (1.0 - binary_entropy(0.5 * t) - binary_entropy(p));
}

double bob_subpayoff(double n, double p, double s, double t) {
  return n * t * (1.0 - binary_entropy(marginal_after_embedding(p, s)));
}

void check_profile(const GameConfig& cfg, const StrategyProfile& profile) {
  if (profile.s.size() != cfg.l() || profile.t.size() != cfg.l()) {
    fail("profile: strategy lengths (", profile.s.size(), ", ", profile.t.size(),
         ") must equal l (", cfg.l(), ")");
  }
  profile.s.validate();
  profile.t.validate();
}

Payoffs total_payoffs(const GameConfig& cfg, const StrategyProfile& profile) {
  check_profile(cfg, profile);
  const double n = static_cast<double>(cfg.cover.n);
  Payoffs out;
  for (std::size_t i = 0; i < cfg.l(); ++i) {
    out.alice += alice_subpayoff(n, cfg.cover.p[i], profile.s[i], profile.t[i]);
    out.bob += bob_subpayoff(n, cfg.cover.p[i], profile.s[i], profile.t[i]);
  }
  return out;
}

double distortion(const Strategy& strategy, std::int64_t n, const CostModel& cost) {
  if (strategy.size() != cost.size()) {
    fail("distortion: strategy length (", strategy.size(), ") must equal cost length (",
         cost.size(), ")");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < strategy.size(); ++i) total += strategy[i] * cost.rho[i];
  return 0.5 * static_cast<double>(n) * total;
}

double max_distortion(std::int64_t n, const CostModel& cost) {
  return distortion(Strategy::ones(cost.size()), n, cost);
}

CostModel default_cost(const CoverSpec& cover, double scale) {
  cover.validate();
  if (!(scale > 0.0)) fail("default_cost: scale must be positive (got ", scale, ")");
  CostModel cost;
  cost.rho.reserve(cover.l());
  for (double p : cover.p) {
    const double h = binary_entropy(p);
    if (h <= 0.0) fail("default_cost: H(p_i) = 0 gives an infinite cost");
    cost.rho.push_back(scale / h);
  }
  return cost;
}

Payoffs payoff_upper_bounds(const GameConfig& cfg, const StrategyProfile& profile) {
  check_profile(cfg, profile);
  const double n = static_cast<double>(cfg.cover.n);
  Payoffs out;
  for (std::size_t i = 0; i < cfg.l(); ++i) {
    const double room = 1.0 - binary_entropy(cfg.cover.p[i]);
    out.alice += n * profile.s[i] * room;
    out.bob += n * profile.t[i] * room;
  }
  return out;
}

}  // namespace rwgame
