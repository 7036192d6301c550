#include "rwgame/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

#include "rwgame/entropy.hpp"

namespace rwgame {

using nlohmann::ordered_json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, kOutputDigits);
  return std::string(buf, res.ptr);
}

double round_output(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  const std::string text = format_number(x);
  double out = x;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

namespace {

ordered_json num(double x) { return round_output(x); }

ordered_json nums(const std::vector<double>& xs) {
  ordered_json arr = ordered_json::array();
  for (double x : xs) arr.push_back(num(x));
  return arr;
}

ordered_json opt(const std::optional<double>& x) {
  return x ? num(*x) : ordered_json(nullptr);
}

std::vector<double> real_array(const nlohmann::json& doc, const char* key) {
  const auto& node = doc.at(key);
  if (!node.is_array()) throw ValidationError(std::string("config: '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : node) {
    if (!v.is_number()) {
      throw ValidationError(std::string("config: '") + key + "' must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

ConfigFile parse_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config: top level must be an object");
  for (const char* key : {"n", "p", "d"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("config: missing '") + key + "'");
  }
  if (!doc["n"].is_number_integer()) throw ValidationError("config: 'n' must be an integer");
  if (!doc["d"].is_number()) throw ValidationError("config: 'd' must be a number");

  ConfigFile cfg;
  cfg.game.cover.n = doc["n"].get<std::int64_t>();
  cfg.game.cover.p = real_array(doc, "p");
  cfg.game.d = doc["d"].get<double>();
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ValidationError("config: 'mode' must be a string");
    cfg.game.mode = parse_game_mode(doc["mode"].get<std::string>());
  }
  cfg.game.cover.validate();
  if (doc.contains("rho")) {
    cfg.game.cost.rho = real_array(doc, "rho");
  } else {
    cfg.game.cost = default_cost(cfg.game.cover, binary_entropy(cfg.game.cover.p[0]));
  }
  cfg.game.validate();

  if (doc.contains("s") || doc.contains("t")) {
    if (!doc.contains("s") || !doc.contains("t")) {
      throw ValidationError("config: 's' and 't' must be given together");
    }
    StrategyProfile profile{Strategy(real_array(doc, "s")), Strategy(real_array(doc, "t"))};
    check_profile(cfg.game, profile);
    cfg.profile = std::move(profile);
  }
  return cfg;
}

ordered_json to_json(const EquilibriumReport& r) {
  ordered_json j;
  j["mode"] = std::string(to_string(r.mode));
  j["s"] = nums(r.profile.s.v);
  j["t"] = nums(r.profile.t.v);
  j["w"] = r.combined_fraction ? nums(*r.combined_fraction) : ordered_json(nullptr);
  j["payoff_alice"] = num(r.payoff_alice);
  j["payoff_bob"] = num(r.payoff_bob);
  j["cooperative_payoff"] = opt(r.cooperative_payoff);
  j["distortion_alice"] = num(r.distortion_alice);
  j["distortion_bob"] = num(r.distortion_bob);
  j["alpha"] = opt(r.alpha);
  j["beta"] = opt(r.beta);
  ordered_json per = ordered_json::array();
  for (std::size_t i = 0; i < r.per_subcover.size(); ++i) {
    const auto& t = r.per_subcover[i];
    per.push_back({{"A", num(t.alice_payoff)},
                   {"B", num(t.bob_payoff)},
                   {"dA", num(t.alice_distortion)},
                   {"dB", num(t.bob_distortion)},
                   {"s_clamped", r.clamped[i].s},
                   {"t_clamped", r.clamped[i].t}});
  }
  j["per_subcover"] = per;
  j["ratio_residual"] = num(r.ratio_residual);
  j["distortion_residual_alice"] = num(r.distortion_residual_alice);
  j["distortion_residual_bob"] = num(r.distortion_residual_bob);
  j["iterations"] = {{"alpha", r.iterations.alpha},
                     {"beta", r.iterations.beta},
                     {"evaluations", r.iterations.evaluations}};
  j["converged"] = r.converged;
  j["diagnostics"] = r.diagnostics;
  return j;
}

ordered_json to_json(const DeviationReport& r) {
  return {{"max_gain_alice", num(r.max_gain_alice)},
          {"max_gain_bob", num(r.max_gain_bob)},
          {"samples_alice", r.samples_alice},
          {"samples_bob", r.samples_bob}};
}

ordered_json to_json(const CoopCheckReport& r) {
  return {{"stage1_gain_alice", num(r.stage1_gain_alice)},
          {"stage1_gain_bob", num(r.stage1_gain_bob)},
          {"stage2_excess", num(r.stage2_excess)},
          {"ties", r.ties},
          {"samples", r.samples}};
}

ordered_json to_json(const KnapsackSolution& s) {
  ordered_json j;
  j["w"] = nums(s.w);
  j["objective"] = num(s.objective);
  j["budget_used"] = num(s.budget_used);
  j["fractional_index"] =
      s.fractional_index ? ordered_json(*s.fractional_index + 1) : ordered_json(nullptr);
  return j;
}

namespace {

ordered_json to_json(const Measurement& m) {
  return {{"measured", num(m.measured)},
          {"predicted", num(m.predicted)},
          {"std_error", num(m.std_error)},
          {"z", num(m.z)}};
}

}  // namespace

ordered_json to_json(const SimulationReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["p"] = num(r.p);
  j["s"] = num(r.s);
  j["t"] = num(r.t);
  j["alice_positions"] = r.alice_positions;
  j["bob_positions"] = r.bob_positions;
  j["cover_frequency"] = to_json(r.cover_frequency);
  j["marginal_after_alice"] = to_json(r.marginal_after_alice);
  j["flip_rate"] = to_json(r.flip_rate);
  j["alice_compressed_bits"] = r.alice_compressed_bits;
  j["alice_compressed_predicted"] = num(r.alice_compressed_predicted);
  j["bob_compressed_bits"] = r.bob_compressed_bits;
  j["bob_compressed_predicted"] = num(r.bob_compressed_predicted);
  j["alice_capacity_estimate"] = num(r.alice_capacity_estimate);
  j["alice_capacity_model"] = num(r.alice_capacity_model);
  j["bob_capacity_estimate"] = num(r.bob_capacity_estimate);
  j["bob_capacity_model"] = num(r.bob_capacity_model);
  j["restored_exactly"] = r.restored_exactly;
  return j;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "p_max,payoff_alice_per_n,payoff_bob_per_n\n";
  for (const auto& row : rows) {
    out += format_number(row.p_max) + ',' + format_number(row.alice_per_n) + ',' +
           format_number(row.bob_per_n) + '\n';
  }
  return out;
}

std::string trace_csv(const TraceResult& trace) {
  std::string out = "s1,s2,t1,t2,PA,PB,DA,DB\n";
  for (const auto& row : trace.rows) {
    const double fields[] = {row.profile.s[0],   row.profile.s[1],   row.profile.t[0],
                             row.profile.t[1],   row.payoffs.alice,  row.payoffs.bob,
                             row.distortion_alice, row.distortion_bob};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i) out += ',';
      out += format_number(fields[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace rwgame
