#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "trackselect/harness.hpp"

namespace trackselect {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json matrix_to_json(const Mat4& m) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
  return rows;
}

Mat4 matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("config: p0 must be 4x4");
  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    const auto row = j.at(r).get<std::vector<double>>();
    if (row.size() != 4) throw std::invalid_argument("config: p0 must be 4x4");
    for (int c = 0; c < 4; ++c) m(r, c) = row[c];
  }
  return m;
}

}  // namespace

json config_to_json(const ScenarioConfig& cfg) {
  json radars = json::array();
  for (const auto& r : cfg.radars) {
    radars.push_back({{"x", r.x},
                      {"y", r.y},
                      {"beams", r.beams},
                      {"sigma_a", r.sigma_a},
                      {"sigma_r_base", r.sigma_r_base}});
  }
  json targets = json::array();
  for (const auto& t : cfg.targets) {
    targets.push_back({{"x", t.x}, {"y", t.y}, {"vx", t.vx}, {"vy", t.vy}});
  }
  json j = {{"schema_version", kConfigSchemaVersion},
            {"radars", std::move(radars)},
            {"b_interval", {cfg.b_min, cfg.b_max}},
            {"targets", std::move(targets)},
            {"p0", matrix_to_json(cfg.p0)},
            {"noisy_initial_estimates", cfg.noisy_initial_estimates},
            {"t_u", cfg.t_u},
            {"sigma_w_sq", cfg.sigma_w_sq},
            {"c", cfg.c},
            {"horizon", cfg.horizon},
            {"n_runs", cfg.n_runs},
            {"dynamics",
             {{"alpha", cfg.dynamics.alpha},
              {"k_reinit", cfg.dynamics.k_reinit},
              {"static_ranks", cfg.dynamics.static_ranks}}},
            {"strategy", std::string(strategy_name(cfg.strategy))},
            {"output", cfg.output},
            {"seed", cfg.seed}};
  if (cfg.b_override) j["b_override"] = *cfg.b_override;
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  const int version = j.value("schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion) {
    throw std::invalid_argument("config: unsupported schema_version " + std::to_string(version));
  }
  ScenarioConfig cfg = default_scenario();
  if (j.contains("radars")) {
    cfg.radars.clear();
    int id = 0;
    for (const auto& r : j.at("radars")) {
      RadarSite site;
      site.id = id++;
      site.x = r.at("x").get<double>();
      site.y = r.at("y").get<double>();
      site.beams = r.value("beams", 2);
      site.sigma_a = r.value("sigma_a", 0.002);
      site.sigma_r_base = r.value("sigma_r_base", 0.015);
      cfg.radars.push_back(site);
    }
  }
  if (j.contains("b_interval")) {
    const auto iv = j.at("b_interval").get<std::vector<double>>();
    if (iv.size() != 2) throw std::invalid_argument("config: b_interval needs two values");
    cfg.b_min = iv[0];
    cfg.b_max = iv[1];
  }
  if (j.contains("b_override") && !j.at("b_override").is_null()) {
    cfg.b_override = j.at("b_override").get<std::vector<std::vector<double>>>();
  }
  if (j.contains("targets")) {
    cfg.targets.clear();
    for (const auto& t : j.at("targets")) {
      cfg.targets.push_back({t.at("x").get<double>(), t.at("y").get<double>(),
                             t.at("vx").get<double>(), t.at("vy").get<double>()});
    }
  }
  if (j.contains("p0")) cfg.p0 = matrix_from_json(j.at("p0"));
  cfg.noisy_initial_estimates = j.value("noisy_initial_estimates", cfg.noisy_initial_estimates);
  cfg.t_u = j.value("t_u", cfg.t_u);
  cfg.sigma_w_sq = j.value("sigma_w_sq", cfg.sigma_w_sq);
  cfg.c = j.value("c", cfg.c);
  cfg.horizon = j.value("horizon", cfg.horizon);
  cfg.n_runs = j.value("n_runs", cfg.n_runs);
  if (j.contains("dynamics")) {
    const json& d = j.at("dynamics");
    cfg.dynamics.alpha = d.value("alpha", cfg.dynamics.alpha);
    cfg.dynamics.k_reinit = d.value("k_reinit", cfg.dynamics.k_reinit);
    cfg.dynamics.static_ranks = d.value("static_ranks", cfg.dynamics.static_ranks);
  }
  if (j.contains("strategy")) cfg.strategy = parse_strategy(j.at("strategy").get<std::string>());
  cfg.output = j.value("output", cfg.output);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

void write_metrics_csv(std::ostream& os, std::span<const MonteCarloResult> results) {
  os << "run,slot,strategy,trace_sum\n";
  for (const auto& res : results) {
    const std::string name(strategy_name(res.strategy));
    for (std::size_t r = 0; r < res.runs.size(); ++r) {
      const auto& slots = res.runs[r].slots;
      for (std::size_t k = 0; k < slots.size(); ++k) {
        os << r << ',' << k << ',' << name << ',' << format_double(slots[k].trace_sum) << '\n';
      }
    }
  }
}

json summary_to_json(std::span<const MonteCarloResult> results) {
  json strategies = json::array();
  for (const auto& res : results) {
    strategies.push_back({{"strategy", std::string(strategy_name(res.strategy))},
                          {"n_runs", res.runs.size()},
                          {"horizon", res.summary.mean.size()},
                          {"tail_mean", res.summary.tail_mean},
                          {"tail_stderr", res.summary.tail_stderr},
                          {"update_steps", res.updates.steps},
                          {"monotonicity_violations", res.updates.violations},
                          {"max_trace_increase", res.updates.max_trace_increase},
                          {"mean", res.summary.mean},
                          {"stderr", res.summary.stderr_}});
  }
  return {{"schema_version", kMetricsSchemaVersion}, {"strategies", std::move(strategies)}};
}

}  // namespace trackselect
