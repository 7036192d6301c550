#include "rwgame/report.hpp"

#include "rwgame/entropy.hpp"

namespace rwgame {

namespace {

bool on_boundary(double x) { return x <= 0.0 || x >= 1.0; }

double alice_term(double n, double p, double s, double t, PayoffModel model) {
  if (model == PayoffModel::kSharedKey) return n * s * (1.0 - binary_entropy(p));
  return alice_subpayoff(n, p, s, t);
}

double bob_term(double n, double p, double s, double t, PayoffModel model) {
  if (model == PayoffModel::kSharedKey) return n * t * (1.0 - binary_entropy(p));
  return bob_subpayoff(n, p, s, t);
}

}  // namespace

Payoffs model_payoffs(const GameConfig& cfg, const StrategyProfile& profile, PayoffModel model) {
  if (model == PayoffModel::kInterference) return total_payoffs(cfg, profile);
  return payoff_upper_bounds(cfg, profile);
}

EquilibriumReport evaluate_profile(const GameConfig& cfg, const StrategyProfile& profile,
                                   PayoffModel model) {
  check_profile(cfg, profile);
  EquilibriumReport report;
  report.mode = cfg.mode;
  report.profile = profile;
  const double n = static_cast<double>(cfg.cover.n);
  for (std::size_t i = 0; i < cfg.l(); ++i) {
    const double p = cfg.cover.p[i];
    const double s = profile.s[i];
    const double t = profile.t[i];
    SubcoverTerms terms;
    terms.alice_payoff = alice_term(n, p, s, t, model);
    terms.bob_payoff = bob_term(n, p, s, t, model);
    terms.alice_distortion = 0.5 * n * s * cfg.cost.rho[i];
    terms.bob_distortion = 0.5 * n * t * cfg.cost.rho[i];
    report.payoff_alice += terms.alice_payoff;
    report.payoff_bob += terms.bob_payoff;
    report.per_subcover.push_back(terms);
    report.clamped.push_back({on_boundary(s), on_boundary(t)});
  }
  report.distortion_alice = distortion(profile.s, cfg.cover.n, cfg.cost);
  report.distortion_bob = distortion(profile.t, cfg.cover.n, cfg.cost);
  return report;
}

}  // namespace rwgame
