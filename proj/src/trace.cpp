#include <algorithm>
#include <cmath>
#include <optional>

#include "rwgame/entropy.hpp"
#include "rwgame/noncoop.hpp"

namespace rwgame {

namespace {

struct Locus {
  double p1, p2;
  double ratio;  // rho_1 / rho_2

  // Alice's curve: given s_1, the s_2 with S_1/S_2 = ratio.
  TracePoint alice(double s1) const {
    TracePoint pt{s1, 0.0, 0.0, false};
    const double S1 = bob_unit_capacity(p1, s1);
    const double S2 = S1 / ratio;
    if (!(S2 > 0.0) || S2 > 1.0 - binary_entropy(p2)) return pt;
    const double marginal = inverse_binary_entropy(1.0 - S2, 0.0);
    const double s2 = (marginal - p2) / (0.5 - p2);
    if (s2 < 0.0 || s2 > 1.0) return pt;
    pt.x2 = s2;
    pt.residual = std::abs(S1 / bob_unit_capacity(p2, s2) - ratio);
    pt.feasible = pt.residual <= kTraceResidualTol;
    return pt;
  }

  // Bob's curve: given t_1, the t_2 with T_1/T_2 = ratio.
  TracePoint bob(double t1) const {
    TracePoint pt{t1, 0.0, 0.0, false};
    const double T1 = alice_unit_capacity(p1, t1);
    if (!(T1 > 0.0)) return pt;
    const double arg = 1.0 - binary_entropy(p2) - T1 / ratio;
    if (arg < 0.0) return pt;
    const double t2 = 2.0 * inverse_binary_entropy(arg, 0.0);
    if (t2 > 1.0) return pt;
    const double T2 = alice_unit_capacity(p2, t2);
    if (!(T2 > 0.0)) return pt;
    pt.x2 = t2;
    pt.residual = std::abs(T1 / T2 - ratio);
    pt.feasible = pt.residual <= kTraceResidualTol;
    return pt;
  }
};

// Moves along a curve from its first feasible sample towards its last until
// the distortion reaches d.
template <typename CurveFn>
std::optional<Strategy> endpoint(const std::vector<TracePoint>& samples, CurveFn curve,
                                 const GameConfig& cfg) {
  auto first = std::find_if(samples.begin(), samples.end(), [](auto& p) { return p.feasible; });
  auto last = std::find_if(samples.rbegin(), samples.rend(), [](auto& p) { return p.feasible; });
  if (first == samples.end()) return std::nullopt;

  auto dist = [&](const TracePoint& pt) {
    return distortion(Strategy({pt.x1, pt.x2}), cfg.cover.n, cfg.cost);
  };
  double lo = first->x1;
  double hi = last->x1;
  double d_lo = dist(*first);
  double d_hi = dist(*last);
  if (d_lo > d_hi) {
    std::swap(lo, hi);
    std::swap(d_lo, d_hi);
  }
  if (cfg.d < d_lo || cfg.d > d_hi) return std::nullopt;

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const TracePoint pt = curve(mid);
    if (!pt.feasible) break;
    if (dist(pt) < cfg.d) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const TracePoint pt = curve(0.5 * (lo + hi));
  if (!pt.feasible) return std::nullopt;
  return Strategy({pt.x1, pt.x2});
}

}  // namespace

TraceResult trace_l2(const GameConfig& cfg, int steps) {
  cfg.validate();
  if (cfg.l() != 2) {
    throw ValidationError("trace_l2: requires exactly two sub-covers (l=" +
                          std::to_string(cfg.l()) + ")");
  }
  if (steps < 2) throw ValidationError("trace_l2: steps must be >= 2");

  const Locus locus{cfg.cover.p[0], cfg.cover.p[1], cfg.cost.rho[0] / cfg.cost.rho[1]};
  TraceResult out;
  out.alice_curve.reserve(steps);
  out.bob_curve.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(steps - 1);
    out.alice_curve.push_back(locus.alice(x));
    out.bob_curve.push_back(locus.bob(x));
  }

  for (int k = 0; k < steps; ++k) {
    const TracePoint& a = out.alice_curve[k];
    const TracePoint& b = out.bob_curve[k];
    if (!a.feasible || !b.feasible) continue;
    TraceRow row;
    row.profile = {Strategy({a.x1, a.x2}), Strategy({b.x1, b.x2})};
    row.payoffs = total_payoffs(cfg, row.profile);
    row.distortion_alice = distortion(row.profile.s, cfg.cover.n, cfg.cost);
    row.distortion_bob = distortion(row.profile.t, cfg.cover.n, cfg.cost);
    out.rows.push_back(std::move(row));
  }

  out.alice_endpoint =
      endpoint(out.alice_curve, [&](double x) { return locus.alice(x); }, cfg);
  out.bob_endpoint = endpoint(out.bob_curve, [&](double x) { return locus.bob(x); }, cfg);
  return out;
}

}  // namespace rwgame
