#include "rwgame/noncoop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "rwgame/entropy.hpp"

namespace rwgame {

namespace {

double cost_ratio(const CostModel& cost, std::size_t i) { return cost.rho[i] / cost.rho[0]; }

// Bisection for a level in [0, upper] whose strategy distortion equals
// min(d, D(0)). D(level) is non-increasing and D(upper) == 0.
LevelSearch search_level(const std::function<Strategy(double)>& strategy_at,
                         const GameConfig& cfg, double upper, const SolverOptions& opts) {
  auto dist = [&](double level) { return distortion(strategy_at(level), cfg.cover.n, cfg.cost); };

  LevelSearch out;
  const double d_top = dist(0.0);
  out.target = std::min(cfg.d, d_top);
  const double tol = opts.distortion_tol * std::max(1.0, out.target);
  if (d_top <= cfg.d) {
    out.level = 0.0;
    out.residual = 0.0;
    return out;
  }

  // Bisect until the bracket collapses; the hi side always satisfies D <= target.
  double lo = 0.0;
  double hi = upper;
  double hi_dist = dist(hi);
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double d_mid = dist(mid);
    out.iterations = iter + 1;
    if (d_mid > out.target) {
      lo = mid;
    } else {
      hi = mid;
      hi_dist = d_mid;
    }
  }
  out.level = hi;
  out.residual = std::abs(hi_dist - out.target);
  out.converged = out.residual <= tol;
  return out;
}

void require_noncoop(const GameConfig& cfg, const char* who) {
  if (cfg.mode != GameMode::kNonCooperative) {
    throw ValidationError(std::string(who) + ": requires mode noncoop (got " +
                          std::string(to_string(cfg.mode)) + ")");
  }
}

}  // namespace

double bob_unit_capacity(double p, double s) {
  return 1.0 - binary_entropy(marginal_after_embedding(p, s));
}

double alice_unit_capacity(double p, double t) {
  return 1.0 - binary_entropy(0.5 * t) - binary_entropy(p);
}

double level_upper_bound(const CoverSpec& cover, const CostModel& cost) {
  double upper = 1.0;
  for (std::size_t i = 0; i < cover.l(); ++i) {
    upper = std::max(upper, (1.0 - binary_entropy(cover.p[i])) / cost_ratio(cost, i));
  }
  return upper;
}

Strategy strategy_from_alpha(double alpha, const CoverSpec& cover, const CostModel& cost) {
  Strategy s = Strategy::zeros(cover.l());
  for (std::size_t i = 0; i < cover.l(); ++i) {
    const double p = cover.p[i];
    if (p >= 0.5) continue;
    const double arg = 1.0 - alpha * cost_ratio(cost, i);
    if (arg <= binary_entropy(p)) continue;
    if (arg >= 1.0) {
      s[i] = 1.0;
      continue;
    }
    const double marginal = inverse_binary_entropy(arg, 0.0);
    s[i] = std::clamp((marginal - p) / (0.5 - p), 0.0, 1.0);
  }
  return s;
}

Strategy strategy_from_beta(double beta, const CoverSpec& cover, const CostModel& cost) {
  Strategy t = Strategy::zeros(cover.l());
  for (std::size_t i = 0; i < cover.l(); ++i) {
    const double arg = 1.0 - binary_entropy(cover.p[i]) - beta * cost_ratio(cost, i);
    if (arg <= 0.0) continue;
    t[i] = std::min(1.0, 2.0 * inverse_binary_entropy(std::min(arg, 1.0), 0.0));
  }
  return t;
}

Strategy fair_cap(const CoverSpec& cover) {
  Strategy cap = Strategy::zeros(cover.l());
  for (std::size_t i = 0; i < cover.l(); ++i) {
    cap[i] = 2.0 * inverse_binary_entropy(1.0 - binary_entropy(cover.p[i]), 0.0);
  }
  return cap;
}

EquilibriumReport solve_l1(const GameConfig& cfg) {
  cfg.validate();
  if (cfg.l() != 1) {
    throw ValidationError("solve_l1: requires exactly one sub-cover (l=" +
                          std::to_string(cfg.l()) + ")");
  }
  const double p_max =
      std::min(1.0, 2.0 * cfg.d / (static_cast<double>(cfg.cover.n) * cfg.cost.rho[0]));
  StrategyProfile profile{Strategy({p_max}), Strategy({p_max})};
  EquilibriumReport report = evaluate_profile(cfg, profile);
  if (alice_unit_capacity(cfg.cover.p[0], p_max) < 0.0) {
    report.diagnostics.push_back("alice payoff negative: p_max beyond the fair fraction");
  }
  return report;
}

LevelSearch search_alpha(const GameConfig& cfg, const SolverOptions& opts) {
  return search_level(
      [&](double a) { return strategy_from_alpha(a, cfg.cover, cfg.cost); }, cfg,
      level_upper_bound(cfg.cover, cfg.cost), opts);
}

LevelSearch search_beta(const GameConfig& cfg, const SolverOptions& opts) {
  return search_level(
      [&](double b) { return strategy_from_beta(b, cfg.cover, cfg.cost); }, cfg,
      level_upper_bound(cfg.cover, cfg.cost), opts);
}

double ratio_residual(const GameConfig& cfg, const StrategyProfile& profile) {
  check_profile(cfg, profile);
  const std::size_t l = cfg.l();
  std::vector<double> S(l), T(l);
  for (std::size_t i = 0; i < l; ++i) {
    S[i] = bob_unit_capacity(cfg.cover.p[i], profile.s[i]);
    T[i] = alice_unit_capacity(cfg.cover.p[i], profile.t[i]);
  }
  // A rate at zero means the coordinate sits at level 0 (Bob's fair cap),
  // which is a boundary like 0 and 1.
  constexpr double kRateFloor = 1e-9;
  auto free_coord = [](double x) { return x > 0.0 && x < 1.0; };
  double worst = 0.0;
  for (std::size_t j = 0; j < l; ++j) {
    for (std::size_t k = j + 1; k < l; ++k) {
      const double want = cfg.cost.rho[j] / cfg.cost.rho[k];
      if (free_coord(profile.s[j]) && free_coord(profile.s[k]) && S[j] > kRateFloor &&
          S[k] > kRateFloor) {
        worst = std::max(worst, std::abs(S[j] / S[k] - want));
      }
      if (free_coord(profile.t[j]) && free_coord(profile.t[k]) && T[j] > kRateFloor &&
          T[k] > kRateFloor) {
        worst = std::max(worst, std::abs(T[j] / T[k] - want));
      }
    }
  }
  return worst;
}

EquilibriumReport solve_noncoop(const GameConfig& cfg, const SolverOptions& opts) {
  cfg.validate();
  require_noncoop(cfg, "solve_noncoop");

  const LevelSearch a = search_alpha(cfg, opts);
  const LevelSearch b = search_beta(cfg, opts);
  StrategyProfile profile{strategy_from_alpha(a.level, cfg.cover, cfg.cost),
                          strategy_from_beta(b.level, cfg.cover, cfg.cost)};

  EquilibriumReport report = evaluate_profile(cfg, profile);
  report.alpha = a.level;
  report.beta = b.level;
  report.iterations.alpha = a.iterations;
  report.iterations.beta = b.iterations;
  report.distortion_residual_alice = a.residual;
  report.distortion_residual_bob = b.residual;
  report.ratio_residual = ratio_residual(cfg, profile);
  report.converged = a.converged && b.converged && report.ratio_residual <= opts.ratio_tol;

  if (!a.converged) report.diagnostics.push_back("alpha search did not reach the distortion tolerance");
  if (!b.converged) report.diagnostics.push_back("beta search did not reach the distortion tolerance");
  if (report.ratio_residual > opts.ratio_tol) {
    std::ostringstream os;
    os << "ratio residual " << report.ratio_residual << " exceeds " << opts.ratio_tol;
    report.diagnostics.push_back(os.str());
  }
  if (a.level > 1.0 || b.level > 1.0) {
    report.diagnostics.push_back("level above 1: search bracket extended past the unit interval");
  }
  if (cfg.d > a.target) report.diagnostics.push_back("alice budget saturated at the all-ones strategy");
  if (cfg.d > b.target) report.diagnostics.push_back("bob budget saturated at the fair cap");
  return report;
}

std::vector<SweepRow> sweep_pmax(double p1, std::int64_t n, int steps) {
  if (steps < 2) throw ValidationError("sweep_pmax: steps must be >= 2");
  if (n <= 0) throw ValidationError("sweep_pmax: n must be positive");
  if (!(p1 > 0.0 && p1 <= 0.5)) throw ValidationError("sweep_pmax: invariant 0 < p_1 <= 1/2 violated");
  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  const double nd = static_cast<double>(n);
  for (int k = 0; k < steps; ++k) {
    const double p_max = static_cast<double>(k) / static_cast<double>(steps - 1);
    rows[k] = {p_max, alice_subpayoff(nd, p1, p_max, p_max) / nd,
               bob_subpayoff(nd, p1, p_max, p_max) / nd};
  }
  return rows;
}

}  // namespace rwgame
