// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "instances.hpp"
#include "rwgame/arith_coder.hpp"
#include "rwgame/commands.hpp"
#include "rwgame/coop.hpp"
#include "rwgame/embed_sim.hpp"
#include "rwgame/entropy.hpp"
#include "rwgame/noncoop.hpp"

using namespace rwgame;
using rwgame::fixtures::draw;

namespace {

// Tolerances and limits.
constexpr double kCrossing = 0.750;
constexpr double kCrossingTol = 0.01;
constexpr int kSweepSteps = 10000;
constexpr double kClosedFormTol = 1e-9;
constexpr double kRatioTol = 1e-6;
constexpr double kDistortionRelTol = 1e-9;
constexpr double kGainPerBit = 1e-6;
constexpr int kDeviationGrid = 1000;
constexpr int kLpGrid = 1000;
constexpr double kWorkedPayoff = 500.0;
constexpr double kWorkedPayoffTol = 0.1;
constexpr int kLevelGrid = 500;
constexpr double kNoKeyTolPerBit = 1e-3;
constexpr double kSlack = 1e-9;
constexpr double kSigmas = 4.0;
constexpr double kLengthRelTol = 0.01;
constexpr double kKernelTol = 1e-10;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

bool run(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out = body();
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs > limit_s) {
    out.pass = false;
    out.detail += "; runtime over limit";
  }
  std::printf("%s %d %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(),
              secs);
  std::fflush(stdout);
  return out.pass;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct SweepTable {
  std::vector<double> p, a, b;
};

SweepTable sweep_via_cli(double p1, int steps) {
  RunConfig rc;
  rc.command = "sweep-pmax";
  rc.p1 = p1;
  rc.n = 1000;
  rc.steps = steps;
  const CommandResult res = run_command(rc);
  SweepTable t;
  std::istringstream in(res.output);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    double x, ya, yb;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &ya, &yb) == 3) {
      t.p.push_back(x);
      t.a.push_back(ya);
      t.b.push_back(yb);
    }
  }
  return t;
}

Outcome crossing() {
  const SweepTable t = sweep_via_cli(0.005, kSweepSteps + 1);
  // First positive-to-non-positive transition after p_max = 0, interpolated.
  for (std::size_t i = 2; i < t.p.size(); ++i) {
    if (t.a[i - 1] > 0 && t.a[i] <= 0) {
      const double x = t.p[i - 1] + (t.p[i] - t.p[i - 1]) * t.a[i - 1] / (t.a[i - 1] - t.a[i]);
      return {std::abs(x - kCrossing) <= kCrossingTol, fmt("sign change at p_max = %.6f", x)};
    }
  }
  return {false, "no sign change"};
}

Outcome dominance() {
  int violations = 0;
  std::size_t rows = 0;
  for (double p1 : {0.005, 0.05}) {
    const SweepTable t = sweep_via_cli(p1, kSweepSteps + 1);
    rows += t.p.size();
    for (std::size_t i = 0; i < t.p.size(); ++i) violations += t.b[i] < t.a[i];
  }
  return {violations == 0 && rows > 0,
          std::to_string(violations) + " violations over " + std::to_string(rows) + " rows"};
}

Outcome closed_form() {
  Rng rng(3);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    GameConfig cfg;
    cfg.cover = fixtures::random_cover(rng, 1, fixtures::random_n(rng), 0.001, 0.45);
    cfg.cost.rho = {draw(rng, 0.5, 3.0)};
    // Budgets inside the region where Bob's fairness cap does not bind.
    const double cap = fair_cap(cfg.cover)[0];
    const double pmax = draw(rng, 0.0, cap);
    cfg.d = 0.5 * pmax * static_cast<double>(cfg.cover.n) * cfg.cost.rho[0];
    const EquilibriumReport a = solve_noncoop(cfg);
    const EquilibriumReport b = solve_l1(cfg);
    worst = std::max({worst, std::abs(a.profile.s[0] - b.profile.s[0]),
                      std::abs(a.profile.t[0] - b.profile.t[0])});
  }
  return {worst <= kClosedFormTol, fmt("max strategy difference %.3g", worst)};
}

Outcome ratio_conditions() {
  Rng rng(4);
  const std::size_t sizes[] = {2, 3, 5};
  int accepted = 0, draws = 0, failures = 0;
  double worst_ratio = 0.0, worst_dist = 0.0;
  while (accepted < 50 && draws < 10000) {
    ++draws;
    const std::size_t l = sizes[rng.below(3)];
    GameConfig cfg;
    cfg.cover = fixtures::random_cover(rng, l, fixtures::random_n(rng));
    cfg.cost = fixtures::random_cost(rng, l);
    // Both players can spend d: below the distortion of Bob's fair cap.
    cfg.d = draw(rng, 0.05, 0.95) * distortion(fair_cap(cfg.cover), cfg.cover.n, cfg.cost);
    const EquilibriumReport r = solve_noncoop(cfg);
    bool clamped = false;
    for (const auto& c : r.clamped) clamped = clamped || c.s || c.t;
    if (clamped) continue;
    ++accepted;
    const double target = std::min(cfg.d, max_distortion(cfg.cover.n, cfg.cost));
    const double dist = std::max(std::abs(r.distortion_alice - target),
                                 std::abs(r.distortion_bob - target)) / target;
    worst_ratio = std::max(worst_ratio, r.ratio_residual);
    worst_dist = std::max(worst_dist, dist);
    failures += r.ratio_residual > kRatioTol || dist > kDistortionRelTol;
  }
  return {accepted == 50 && failures == 0,
          std::to_string(accepted) + " instances, max ratio residual " +
              fmt("%.3g", worst_ratio) + ", max relative distortion error " +
              fmt("%.3g", worst_dist)};
}

Outcome certification() {
  Rng rng(5);
  int failures = 0;
  double worst = -1e300;
  for (int k = 0; k < 20; ++k) {
    const std::size_t l = 1 + rng.below(3);
    const GameConfig cfg = fixtures::random_game(rng, l, GameMode::kNonCooperative, 0.05, 1.1);
    const EquilibriumReport r = solve_noncoop(cfg);
    const DeviationReport dev = verify_equilibrium(cfg, r.profile, kDeviationGrid, 100 + k);
    const double gain = std::max(dev.max_gain_alice, dev.max_gain_bob) /
                        static_cast<double>(cfg.cover.n);
    worst = std::max(worst, gain);
    failures += gain > kGainPerBit;
  }
  return {failures == 0, std::to_string(failures) + " of 20 instances improvable, max gain/n " +
                             fmt("%.3g", worst)};
}

Outcome shared_key() {
  Rng rng(6);
  int failures = 0, multi_fractional = 0;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t l = 1 + rng.below(4);
    const GameConfig cfg = fixtures::random_game(rng, l, GameMode::kCoopSharedKey, 0.0, 1.1);
    const KnapsackSolution greedy = shared_key_knapsack(cfg);
    const KnapsackSolution grid = lp_oracle(cfg, kLpGrid);
    double best_rate = 0.0;
    for (double p : cfg.cover.p) best_rate = std::max(best_rate, 1.0 - binary_entropy(p));
    const double tol = static_cast<double>(cfg.cover.n) * best_rate / kLpGrid;
    const double gap = greedy.objective - grid.objective;
    worst = std::max(worst, std::abs(gap));
    failures += std::abs(gap) > tol;
    int fractional = 0;
    for (double w : greedy.w) fractional += w > 0.0 && w < 1.0;
    multi_fractional += fractional > 1;
  }
  GameConfig worked;
  worked.cover = {1000, {0.005, 0.05}};
  worked.cost.rho = {2.0, 1.0};
  worked.d = 400;
  worked.mode = GameMode::kCoopSharedKey;
  const EquilibriumReport r = solve_coop_shared(worked);
  const auto& w = *r.combined_fraction;
  const bool worked_ok = std::abs(w[0] - 0.3) <= kSlack && std::abs(w[1] - 1.0) <= kSlack &&
                         std::abs(*r.cooperative_payoff - kWorkedPayoff) <= kWorkedPayoffTol;
  return {failures == 0 && multi_fractional == 0 && worked_ok,
          std::to_string(failures) + " oracle mismatches (max gap " + fmt("%.3g", worst) + "), " +
              std::to_string(multi_fractional) + " with >1 fractional, worked w = (" +
              fmt("%.6f", w[0]) + ", " + fmt("%.6f", w[1]) + ") payoff " +
              fmt("%.4f", *r.cooperative_payoff)};
}

Outcome no_key() {
  Rng rng(7);
  int failures = 0;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const std::size_t l = 1 + rng.below(3);
    const GameConfig cfg = fixtures::random_game(rng, l, GameMode::kCoopNoKey, 0.05, 1.1);
    const EquilibriumReport r = solve_coop_nokey(cfg);

    // Independent oracle: the budget-feasible points of a uniform level grid.
    const double upper = level_upper_bound(cfg.cover, cfg.cost);
    const double limit = cfg.d + kSlack * std::max(1.0, cfg.d);
    std::vector<double> alphas, betas;
    for (int i = 0; i < kLevelGrid; ++i) {
      const double x = upper * i / (kLevelGrid - 1);
      if (distortion(strategy_from_alpha(x, cfg.cover, cfg.cost), cfg.cover.n, cfg.cost) <= limit)
        alphas.push_back(x);
      if (distortion(strategy_from_beta(x, cfg.cover, cfg.cost), cfg.cover.n, cfg.cost) <= limit)
        betas.push_back(x);
    }
    double best = -1e300;
    for (double a : alphas)
      for (double b : betas) best = std::max(best, nokey_objective(cfg, a, b));

    const double gap = *r.cooperative_payoff - best;
    const double n = static_cast<double>(cfg.cover.n);
    worst = std::max(worst, std::abs(gap) / n);
    const bool fits = r.distortion_alice <= limit && r.distortion_bob <= limit;
    failures += std::abs(gap) > kNoKeyTolPerBit * n || !fits;
  }
  return {failures == 0,
          std::to_string(failures) + " of 10 failing, max |gap|/n " + fmt("%.3g", worst)};
}

Outcome simulation() {
  GameConfig cfg;
  cfg.cover = {1000000, {0.005}};
  cfg.cost.rho = {1.0};
  cfg.d = 250000;
  const StrategyProfile profile{Strategy({0.5}), Strategy({0.5})};
  int passed = 0, flip_ok = 0, marginal_ok = 0, length_ok = 0;
  double worst_len = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SimulationReport r = simulate_two_layer(cfg, profile, seeds_from(seed));
    const bool f = std::abs(r.flip_rate.z) <= kSigmas;
    const bool m = std::abs(r.marginal_after_alice.z) <= kSigmas;
    const double rel = std::abs(static_cast<double>(r.alice_compressed_bits) -
                                r.alice_compressed_predicted) / r.alice_compressed_predicted;
    const bool len = rel <= kLengthRelTol;
    worst_len = std::max(worst_len, rel);
    flip_ok += f;
    marginal_ok += m;
    length_ok += len;
    passed += f && m && len && r.restored_exactly;
  }
  return {passed >= 19, std::to_string(passed) + "/20 seeds pass (flip " +
                            std::to_string(flip_ok) + ", marginal " +
                            std::to_string(marginal_ok) + ", length " +
                            std::to_string(length_ok) + ", worst length error " +
                            fmt("%.2f%%", 100 * worst_len) + ")"};
}

Outcome reversibility() {
  Rng rng(9);
  int done = 0, failures = 0, redraws = 0;
  while (done < 100) {
    const std::size_t n = 1 + rng.below(100000);
    const double p = draw(rng, 0.0, 0.5);
    const double fa = rng.uniform(), fb = rng.uniform();
    const BitSequence cover = generate_cover(n, p, rng.next());
    const std::uint64_t ka = rng.next(), kb = rng.next();
    try {
      const std::ptrdiff_t cap_a = embed_layer(cover, fa, ka, {}).capacity();
      BitSequence pa(static_cast<std::size_t>(rng.below(cap_a + 1)));
      for (auto& b : pa) b = rng.bit();
      const EmbedResult a = embed_layer(cover, fa, ka, pa);
      const std::ptrdiff_t cap_b = embed_layer(a.marked, fb, kb, {}).capacity();
      BitSequence pb(static_cast<std::size_t>(rng.below(cap_b + 1)));
      for (auto& b : pb) b = rng.bit();
      const EmbedResult b = embed_layer(a.marked, fb, kb, pb);
      const ExtractResult xb = extract_layer(b.marked, fb, kb, pb.size());
      const ExtractResult xa = extract_layer(xb.restored, fa, ka, pa.size());
      failures += xb.payload != pb || xa.payload != pa || xa.restored != cover;
      ++done;
    } catch (const PayloadTooLarge&) {
      ++redraws;  // code alone exceeds the selected positions
    }
  }
  return {failures == 0, std::to_string(failures) + " failures in 100 two-layer roundtrips (" +
                             std::to_string(redraws) + " draws without room redrawn)"};
}

Outcome kernel() {
  Rng rng(10);
  double sym = 0.0, round = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double p = rng.uniform();
    sym = std::max(sym, std::abs(binary_entropy(p) - binary_entropy(1.0 - p)));
    const double h = rng.uniform();
    round = std::max(round, std::abs(binary_entropy(inverse_binary_entropy(h)) - h));
  }
  int bound_violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const std::size_t l = 1 + rng.below(5);
    const GameConfig cfg = fixtures::random_game(rng, l, GameMode::kNonCooperative);
    StrategyProfile prof{Strategy::zeros(l), Strategy::zeros(l)};
    for (std::size_t i = 0; i < l; ++i) {
      prof.s[i] = rng.uniform();
      prof.t[i] = rng.uniform();
    }
    const Payoffs pay = total_payoffs(cfg, prof);
    const Payoffs ub = payoff_upper_bounds(cfg, prof);
    bound_violations += pay.alice > ub.alice + kSlack || pay.bob > ub.bob + kSlack;
  }
  return {sym <= kKernelTol && round <= kKernelTol && bound_violations == 0,
          "symmetry " + fmt("%.3g", sym) + ", roundtrip " + fmt("%.3g", round) + ", " +
              std::to_string(bound_violations) + " bound violations"};
}

}  // namespace

int main() {
  int failed = 0;
  failed += !run(1, "sweep crossing p1=0.005", 1.0, crossing);
  failed += !run(2, "sweep dominance P_B >= P_A", 0.0, dominance);
  failed += !run(3, "l=1 closed form", 1.0, closed_form);
  failed += !run(4, "ratio conditions", 5.0, ratio_conditions);
  failed += !run(5, "equilibrium certification", 30.0, certification);
  failed += !run(6, "shared-key knapsack", 30.0, shared_key);
  failed += !run(7, "no-key level search", 60.0, no_key);
  failed += !run(8, "two-layer simulation", 60.0, simulation);
  failed += !run(9, "reversibility", 0.0, reversibility);
  failed += !run(10, "numerical kernel", 0.0, kernel);
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
