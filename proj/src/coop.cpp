#include "rwgame/coop.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "deviation.hpp"
#include "rwgame/entropy.hpp"
#include "rwgame/noncoop.hpp"

namespace rwgame {

namespace {

void require_mode(const GameConfig& cfg, GameMode mode, const char* who) {
  if (cfg.mode != mode) {
    throw ValidationError(std::string(who) + ": requires mode " + std::string(to_string(mode)) +
                          " (got " + std::string(to_string(cfg.mode)) + ")");
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

KnapsackSolution solve_continuous_knapsack(std::span<const double> values,
                                           std::span<const double> weights, double capacity) {
  if (values.size() != weights.size()) {
    throw ValidationError("knapsack: values and weights must have equal length");
  }
  const std::size_t l = values.size();
  std::vector<std::size_t> order(l);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] * weights[b] > values[b] * weights[a];
  });

  KnapsackSolution out;
  out.w.assign(l, 0.0);
  double remaining = std::max(0.0, capacity);
  for (std::size_t i : order) {
    if (values[i] <= 0.0 || remaining <= 0.0) break;
    if (weights[i] <= remaining) {
      out.w[i] = 1.0;
      remaining -= weights[i];
    } else {
      out.w[i] = remaining / weights[i];
      out.fractional_index = i;
      remaining = 0.0;
    }
  }
  for (std::size_t i = 0; i < l; ++i) {
    out.objective += values[i] * out.w[i];
    out.budget_used += weights[i] * out.w[i];
  }
  return out;
}

namespace {

struct SharedLp {
  std::vector<double> values;
  std::vector<double> weights;
};

SharedLp shared_lp(const GameConfig& cfg) {
  const double n = static_cast<double>(cfg.cover.n);
  SharedLp lp;
  for (std::size_t i = 0; i < cfg.l(); ++i) {
    lp.values.push_back(0.5 * n * (1.0 - binary_entropy(cfg.cover.p[i])));
    lp.weights.push_back(0.25 * n * cfg.cost.rho[i]);
  }
  return lp;
}

}  // namespace

KnapsackSolution shared_key_knapsack(const GameConfig& cfg) {
  const SharedLp lp = shared_lp(cfg);
  return solve_continuous_knapsack(lp.values, lp.weights, cfg.d);
}

EquilibriumReport solve_coop_shared(const GameConfig& cfg) {
  cfg.validate();
  require_mode(cfg, GameMode::kCoopSharedKey, "solve_coop_shared");

  const KnapsackSolution w = shared_key_knapsack(cfg);
  Strategy half = Strategy::zeros(cfg.l());
  for (std::size_t i = 0; i < cfg.l(); ++i) half[i] = 0.5 * w.w[i];

  EquilibriumReport report = evaluate_profile(cfg, {half, half}, PayoffModel::kSharedKey);
  report.cooperative_payoff = w.objective;
  report.combined_fraction = w.w;
  if (cfg.d > max_distortion(cfg.cover.n, cfg.cost)) {
    report.diagnostics.push_back("d above d_max: solution saturated at w = 1");
  }
  if (w.fractional_index) {
    report.diagnostics.push_back("fractional coordinate i=" + std::to_string(*w.fractional_index + 1));
  }
  return report;
}

KnapsackSolution lp_oracle(const GameConfig& cfg, int grid) {
  cfg.validate();
  const std::size_t l = cfg.l();
  if (l > 4) throw ValidationError("lp_oracle: at most 4 sub-covers (l=" + std::to_string(l) + ")");
  if (grid < 1) throw ValidationError("lp_oracle: grid must be positive");

  const SharedLp lp = shared_lp(cfg);
  const double g = static_cast<double>(grid);

  struct Best {
    double objective = -std::numeric_limits<double>::infinity();
    std::array<int, 4> k{};
  };
  auto better = [&](double obj, const std::array<int, 4>& k, const Best& b) {
    if (obj != b.objective) return obj > b.objective;
    return k < b.k;
  };

  // The last coordinate is set to the largest grid value that fits: the
  // objective is non-decreasing in every coordinate.
  auto last_coordinate = [&](double rem) {
    const double fit = std::floor(rem * g / lp.weights[l - 1]);
    return static_cast<int>(std::clamp(fit, 0.0, g));
  };

  // Upper bound on what coordinates from `depth` on can still add: their
  // total value, and the remaining budget spent at the best value density.
  std::array<double, 5> value_left{};
  std::array<double, 5> density_left{};
  for (std::size_t i = l; i-- > 0;) {
    value_left[i] = value_left[i + 1] + lp.values[i];
    density_left[i] = std::max(density_left[i + 1], lp.values[i] / lp.weights[i]);
  }
  auto bound = [&](std::size_t depth, double rem) {
    return std::min(value_left[depth], rem * density_left[depth]);
  };
  const double margin = 1e-9 * (value_left[0] + 1.0);

  auto run_worker = [&](int first, int stride) {
    Best best;
    std::array<int, 4> k{};
    auto visit_leaf = [&](double rem, double obj) {
      k[l - 1] = last_coordinate(rem);
      const double total = obj + lp.values[l - 1] * k[l - 1] / g;
      if (better(total, k, best)) {
        best.objective = total;
        best.k = k;
      }
    };
    auto recurse = [&](auto&& self, std::size_t depth, double rem, double obj) -> void {
      if (depth + 1 == l) {
        visit_leaf(rem, obj);
        return;
      }
      // Largest grid value that fits, walked downwards so good points come early.
      int top = static_cast<int>(std::clamp(std::floor(rem * g / lp.weights[depth]), 0.0, g));
      while (top > 0 && lp.weights[depth] * top / g > rem) --top;
      if (depth == 0) top -= ((top - first) % stride + stride) % stride;
      const int step = depth == 0 ? stride : 1;
      for (int kk = top; kk >= 0; kk -= step) {
        const double left = rem - lp.weights[depth] * kk / g;
        const double gained = obj + lp.values[depth] * kk / g;
        if (gained + bound(depth + 1, left) < best.objective - margin) continue;
        k[depth] = kk;
        self(self, depth + 1, left, gained);
      }
      k[depth] = 0;
    };
    recurse(recurse, 0, cfg.d, 0.0);
    return best;
  };

  Best best;
  if (l == 1) {
    best = run_worker(0, 1);
  } else {
    const int workers =
        static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 16u));
    std::vector<Best> partial(workers);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) {
      pool.emplace_back([&, w] { partial[w] = run_worker(w, workers); });
    }
    partial[0] = run_worker(0, workers);
    for (auto& th : pool) th.join();
    for (const Best& b : partial) {
      if (better(b.objective, b.k, best)) best = b;
    }
  }

  KnapsackSolution out;
  out.w.assign(l, 0.0);
  for (std::size_t i = 0; i < l; ++i) {
    out.w[i] = best.k[i] / g;
    out.objective += lp.values[i] * out.w[i];
    out.budget_used += lp.weights[i] * out.w[i];
    if (best.k[i] > 0 && best.k[i] < grid && !out.fractional_index) out.fractional_index = i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// No shared key

namespace {

// Smallest level whose strategy fits the budget. Distortion is non-increasing
// in the level and zero at `upper`.
template <typename StrategyAt>
double budget_floor(StrategyAt strategy_at, const GameConfig& cfg, double upper) {
  auto fits = [&](double level) {
    return distortion(strategy_at(level), cfg.cover.n, cfg.cost) <= cfg.d;
  };
  if (fits(0.0)) return 0.0;
  double lo = 0.0;
  double hi = upper;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (fits(mid) ? hi : lo) = mid;
  }
  return hi;
}

double min_payoff(const GameConfig& cfg, const Strategy& s, const Strategy& t) {
  const Payoffs pay = total_payoffs(cfg, {s, t});
  return std::min(pay.alice, pay.bob);
}

bool unimodal(const std::vector<double>& v) {
  const auto peak = std::max_element(v.begin(), v.end());
  const double eps = 1e-9 * std::max(1.0, std::abs(*peak));
  const std::size_t k = static_cast<std::size_t>(peak - v.begin());
  for (std::size_t i = 0; i < k; ++i) {
    if (v[i + 1] < v[i] - eps) return false;
  }
  for (std::size_t i = k; i + 1 < v.size(); ++i) {
    if (v[i + 1] > v[i] + eps) return false;
  }
  return true;
}

struct Point {
  double alpha = 0.0;
  double beta = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

class NoKeySearch {
 public:
  NoKeySearch(const GameConfig& cfg, const NoKeyOptions& opts)
      : cfg_(cfg), opts_(opts), box_(nokey_level_box(cfg)) {}

  const LevelBox& box() const { return box_; }
  int evaluations() const { return evaluations_; }
  int outer_iterations() const { return outer_iterations_; }
  int inner_iterations() const { return inner_iterations_; }
  bool probe_failed() const { return probe_failed_; }

  double eval(const Strategy& s, double beta) {
    ++evaluations_;
    return min_payoff(cfg_, s, strategy_from_beta(beta, cfg_.cover, cfg_.cost));
  }
  double eval(double alpha, double beta) {
    return eval(strategy_from_alpha(alpha, cfg_.cover, cfg_.cost), beta);
  }

  // Nested ternary search: the outer search runs over alpha, each outer
  // evaluation maximizes over beta.
  Point nested_ternary() {
    Point best;
    auto consider = [&](const Point& p) {
      if (p.value > best.value) best = p;
    };

    auto slice = [&](double alpha) {
      const Strategy s = strategy_from_alpha(alpha, cfg_.cover, cfg_.cost);
      Point local{alpha, box_.beta_min, -std::numeric_limits<double>::infinity()};
      std::vector<double> probe;
      for (int k = 0; k < opts_.probe_points; ++k) {
        const double b = lerp(box_.beta_min, box_.upper, k, opts_.probe_points);
        const double v = eval(s, b);
        probe.push_back(v);
        if (v > local.value) local = {alpha, b, v};
      }
      if (!unimodal(probe)) probe_failed_ = true;
      double lo = box_.beta_min;
      double hi = box_.upper;
      while (hi - lo > opts_.step_tol) {
        ++inner_iterations_;
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        const double f1 = eval(s, m1);
        const double f2 = eval(s, m2);
        if (f1 < f2) {
          lo = m1;
        } else {
          hi = m2;
        }
      }
      const double b = 0.5 * (lo + hi);
      const double v = eval(s, b);
      if (v > local.value) local = {alpha, b, v};
      return local;
    };

    std::vector<double> probe;
    for (int k = 0; k < opts_.probe_points; ++k) {
      const Point p = slice(lerp(box_.alpha_min, box_.upper, k, opts_.probe_points));
      probe.push_back(p.value);
      consider(p);
    }
    if (!unimodal(probe)) probe_failed_ = true;

    double lo = box_.alpha_min;
    double hi = box_.upper;
    while (hi - lo > opts_.step_tol) {
      ++outer_iterations_;
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      const Point p1 = slice(m1);
      const Point p2 = slice(m2);
      consider(p1);
      consider(p2);
      if (p1.value < p2.value) {
        lo = m1;
      } else {
        hi = m2;
      }
    }
    consider(slice(0.5 * (lo + hi)));
    return best;
  }

  // Dense grid over the box, zoomed around the incumbent, then a shrinking
  // compass search.
  Point grid_fallback() {
    double a_lo = box_.alpha_min, a_hi = box_.upper;
    double b_lo = box_.beta_min, b_hi = box_.upper;
    Point best;
    const int g = opts_.fallback_grid;
    for (int round = 0; round <= opts_.fallback_refinements; ++round) {
      for (int i = 0; i < g; ++i) {
        const double a = lerp(a_lo, a_hi, i, g);
        const Strategy s = strategy_from_alpha(a, cfg_.cover, cfg_.cost);
        for (int j = 0; j < g; ++j) {
          const double b = lerp(b_lo, b_hi, j, g);
          const double v = eval(s, b);
          if (v > best.value) best = {a, b, v};
        }
      }
      const double da = 2.0 * (a_hi - a_lo) / (g - 1);
      const double db = 2.0 * (b_hi - b_lo) / (g - 1);
      a_lo = std::max(box_.alpha_min, best.alpha - da);
      a_hi = std::min(box_.upper, best.alpha + da);
      b_lo = std::max(box_.beta_min, best.beta - db);
      b_hi = std::min(box_.upper, best.beta + db);
    }
    double step = std::max(a_hi - a_lo, b_hi - b_lo);
    while (step > opts_.step_tol) {
      bool moved = false;
      for (auto [da, db] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0},
                            {1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}, {-1.0, 1.0}}) {
        const double a = std::clamp(best.alpha + da * step, box_.alpha_min, box_.upper);
        const double b = std::clamp(best.beta + db * step, box_.beta_min, box_.upper);
        const double v = eval(a, b);
        if (v > best.value) {
          best = {a, b, v};
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    return best;
  }

 private:
  static double lerp(double lo, double hi, int k, int count) {
    if (count <= 1) return lo;
    return lo + (hi - lo) * k / static_cast<double>(count - 1);
  }

  const GameConfig& cfg_;
  NoKeyOptions opts_;
  LevelBox box_;
  int evaluations_ = 0;
  int outer_iterations_ = 0;
  int inner_iterations_ = 0;
  bool probe_failed_ = false;
};

}  // namespace

LevelBox nokey_level_box(const GameConfig& cfg) {
  LevelBox box;
  box.upper = level_upper_bound(cfg.cover, cfg.cost);
  box.alpha_min = budget_floor(
      [&](double a) { return strategy_from_alpha(a, cfg.cover, cfg.cost); }, cfg, box.upper);
  box.beta_min = budget_floor(
      [&](double b) { return strategy_from_beta(b, cfg.cover, cfg.cost); }, cfg, box.upper);
  return box;
}

double nokey_objective(const GameConfig& cfg, double alpha, double beta) {
  return min_payoff(cfg, strategy_from_alpha(alpha, cfg.cover, cfg.cost),
                    strategy_from_beta(beta, cfg.cover, cfg.cost));
}

EquilibriumReport solve_coop_nokey(const GameConfig& cfg, const NoKeyOptions& opts) {
  cfg.validate();
  require_mode(cfg, GameMode::kCoopNoKey, "solve_coop_nokey");

  NoKeySearch search(cfg, opts);
  Point best = search.nested_ternary();
  const bool fallback = search.probe_failed();
  if (fallback) {
    const Point alt = search.grid_fallback();
    if (alt.value > best.value) best = alt;
  }

  StrategyProfile profile{strategy_from_alpha(best.alpha, cfg.cover, cfg.cost),
                          strategy_from_beta(best.beta, cfg.cover, cfg.cost)};
  EquilibriumReport report = evaluate_profile(cfg, profile);
  report.alpha = best.alpha;
  report.beta = best.beta;
  report.cooperative_payoff = std::min(report.payoff_alice, report.payoff_bob);
  report.iterations.alpha = search.outer_iterations();
  report.iterations.beta = search.inner_iterations();
  report.iterations.evaluations = search.evaluations();
  report.ratio_residual = ratio_residual(cfg, profile);

  const double gap = report.payoff_alice - report.payoff_bob;
  report.diagnostics.push_back("tie gap P_A - P_B = " + fmt(gap));
  if (fallback) report.diagnostics.push_back("unimodality probe failed: grid fallback used");
  if (cfg.d > max_distortion(cfg.cover.n, cfg.cost)) {
    report.diagnostics.push_back("d above d_max: budget not binding");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Deviation check

CoopCheckReport coop_equilibrium_check(const GameConfig& cfg, const StrategyProfile& profile,
                                       int grid, DeviationFamily family, std::uint64_t seed,
                                       double tie_tol) {
  cfg.validate();
  check_profile(cfg, profile);
  if (grid < 1) throw ValidationError("coop_equilibrium_check: grid must be positive");
  if (cfg.mode == GameMode::kNonCooperative) {
    throw ValidationError("coop_equilibrium_check: requires a cooperative mode");
  }
  const bool shared = cfg.mode == GameMode::kCoopSharedKey;
  const std::size_t l = cfg.l();
  const double n = static_cast<double>(cfg.cover.n);

  std::vector<double> room(l);
  for (std::size_t i = 0; i < l; ++i) room[i] = 1.0 - binary_entropy(cfg.cover.p[i]);

  struct Eval {
    double alice, bob, joint;
  };
  auto evaluate = [&](const Strategy& s, const Strategy& t) {
    if (shared) {
      Eval e{0.0, 0.0, 0.0};
      for (std::size_t i = 0; i < l; ++i) {
        e.alice += n * s[i] * room[i];
        e.bob += n * t[i] * room[i];
        e.joint += n * std::min(s[i], t[i]) * room[i];
      }
      return e;
    }
    const Payoffs pay = total_payoffs(cfg, {s, t});
    return Eval{pay.alice, pay.bob, std::min(pay.alice, pay.bob)};
  };

  const Eval base = evaluate(profile.s, profile.t);
  const double best_single = std::max(base.alice, base.bob);
  const double tie_eps = tie_tol * std::max(1.0, std::abs(base.joint));

  CoopCheckReport out;
  out.stage1_gain_alice = -std::numeric_limits<double>::infinity();
  out.stage1_gain_bob = -std::numeric_limits<double>::infinity();
  out.stage2_excess = -std::numeric_limits<double>::infinity();

  auto record = [&](const Eval& e, bool alice_moved) {
    ++out.samples;
    const double gain = e.joint - base.joint;
    double& stage1 = alice_moved ? out.stage1_gain_alice : out.stage1_gain_bob;
    stage1 = std::max(stage1, gain);
    if (std::abs(gain) <= tie_eps) {
      ++out.ties;
      const double cross = alice_moved ? e.bob : e.alice;
      out.stage2_excess = std::max(out.stage2_excess, cross - best_single);
    }
  };

  // Shared key: each player may only use positions the partner left free.
  Strategy alice_cap = Strategy::ones(l);
  Strategy bob_cap = Strategy::ones(l);
  if (shared) {
    for (std::size_t i = 0; i < l; ++i) {
      alice_cap[i] = 1.0 - profile.t[i];
      bob_cap[i] = 1.0 - profile.s[i];
    }
  }
  auto in_box = [](const Strategy& v, const Strategy& cap) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] > cap[i] + 1e-15) return false;
    }
    return true;
  };

  if (family == DeviationFamily::kGeneral) {
    detail::DeviationSampler alice_draws(cfg, alice_cap, derive_seed(seed, 11));
    detail::DeviationSampler bob_draws(cfg, bob_cap, derive_seed(seed, 12));
    for (int k = 0; k < grid; ++k) {
      record(evaluate(alice_draws.next(), profile.t), true);
      record(evaluate(profile.s, bob_draws.next()), false);
    }
  }

  const LevelBox box = nokey_level_box(cfg);
  for (int k = 0; k < grid; ++k) {
    const double frac = grid == 1 ? 0.0 : k / static_cast<double>(grid - 1);
    const Strategy s =
        strategy_from_alpha(box.alpha_min + frac * (box.upper - box.alpha_min), cfg.cover, cfg.cost);
    if (in_box(s, alice_cap) && detail::within_budget(s, cfg)) record(evaluate(s, profile.t), true);
    const Strategy t =
        strategy_from_beta(box.beta_min + frac * (box.upper - box.beta_min), cfg.cover, cfg.cost);
    if (in_box(t, bob_cap) && detail::within_budget(t, cfg)) record(evaluate(profile.s, t), false);
  }

  if (!std::isfinite(out.stage1_gain_alice)) out.stage1_gain_alice = 0.0;
  if (!std::isfinite(out.stage1_gain_bob)) out.stage1_gain_bob = 0.0;
  if (!std::isfinite(out.stage2_excess)) out.stage2_excess = 0.0;
  return out;
}

}  // namespace rwgame
