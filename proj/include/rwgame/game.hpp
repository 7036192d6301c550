#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rwgame {

/// Raised when an input violates a model invariant. The message names the
/// violated invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The cover: l disjoint binary sub-covers of n bits each, sub-cover i having
/// minority-bit probability p[i]. Sub-covers are ordered smoothest first.
struct CoverSpec {
  std::int64_t n = 0;
  std::vector<double> p;

  std::size_t l() const { return p.size(); }

  /// Checks n > 0, l > 0, 0 < p_i <= 1/2 and H(p_1) <= ... <= H(p_l).
  void validate() const;
};

/// Per-sub-cover cost of flipping one bit. Positive and non-increasing.
struct CostModel {
  std::vector<double> rho;

  std::size_t size() const { return rho.size(); }
  void validate() const;
};

/// Fraction of each sub-cover a player selects for embedding.
struct Strategy {
  std::vector<double> v;

  Strategy() = default;
  explicit Strategy(std::vector<double> values) : v(std::move(values)) {}
  static Strategy zeros(std::size_t l) { return Strategy(std::vector<double>(l, 0.0)); }
  static Strategy ones(std::size_t l) { return Strategy(std::vector<double>(l, 1.0)); }

  std::size_t size() const { return v.size(); }
  double operator[](std::size_t i) const { return v[i]; }
  double& operator[](std::size_t i) { return v[i]; }

  void validate() const;
};

struct StrategyProfile {
  Strategy s;  // Alice
  Strategy t;  // Bob
};

enum class GameMode { kNonCooperative, kCoopSharedKey, kCoopNoKey };

std::string_view to_string(GameMode mode);
/// Accepts "noncoop", "coop-shared-key", "coop-no-key".
GameMode parse_game_mode(std::string_view text);

struct GameConfig {
  CoverSpec cover;
  CostModel cost;
  double d = 0.0;
  GameMode mode = GameMode::kNonCooperative;

  std::size_t l() const { return cover.l(); }
  void validate() const;
};

struct Payoffs {
  double alice = 0.0;
  double bob = 0.0;
};

/// Bob's view of a sub-cover after Alice embedded into a fraction s of it:
/// the minority-bit probability becomes p + s/2 - p*s.
double marginal_after_embedding(double p, double s);

/// Alice's pure payload from one sub-cover: n*s*(1 - H(t/2) - H(p)).
/// Negative when Bob's overwrites cost more than the reserved room.
double alice_subpayoff(double n, double p, double s, double t);

/// Bob's pure payload from one sub-cover: n*t*(1 - H(p + s/2 - p*s)).
double bob_subpayoff(double n, double p, double s, double t);

/// Sums of the per-sub-cover payoffs.
Payoffs total_payoffs(const GameConfig& cfg, const StrategyProfile& profile);

/// Additive distortion sum_i n*v_i/2 * rho_i.
double distortion(const Strategy& strategy, std::int64_t n, const CostModel& cost);

/// Distortion of the all-ones strategy.
double max_distortion(std::int64_t n, const CostModel& cost);

/// rho_i = scale / H(p_i).
CostModel default_cost(const CoverSpec& cover, double scale);

/// Interference-free payoffs sum_i n*s_i*(1 - H(p_i)) and the same for t.
Payoffs payoff_upper_bounds(const GameConfig& cfg, const StrategyProfile& profile);

/// Throws ValidationError unless both strategies are valid and have cfg.l()
/// entries.
void check_profile(const GameConfig& cfg, const StrategyProfile& profile);

}  // namespace rwgame
