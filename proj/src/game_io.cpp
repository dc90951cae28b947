#include "trackselect/game_io.hpp"

#include <stdexcept>

namespace trackselect {

using nlohmann::json;

json game_to_json(const GameSpec& spec) {
  const GainTable& g = spec.gains;
  json table;
  if (g.is_radar_specific()) {
    json radars = json::array();
    for (int i = 0; i < g.n_radars(); ++i) {
      json targets = json::array();
      for (int j = 0; j < g.n_targets(); ++j) {
        const auto inc = g.increments(i, j);
        targets.push_back(std::vector<double>(inc.begin(), inc.end()));
      }
      radars.push_back(std::move(targets));
    }
    table["radar_increments"] = std::move(radars);
  } else {
    json targets = json::array();
    for (int j = 0; j < g.n_targets(); ++j) {
      const auto inc = g.increments(0, j);
      targets.push_back(std::vector<double>(inc.begin(), inc.end()));
    }
    table["increments"] = std::move(targets);
  }
  return {{"schema_version", kGameSchemaVersion},
          {"n_radars", spec.n_radars},
          {"n_targets", spec.n_targets},
          {"m", spec.m},
          {"c", spec.c},
          {"gain_table", std::move(table)}};
}

GameSpec game_from_json(const json& j) {
  const int version = j.value("schema_version", kGameSchemaVersion);
  if (version != kGameSchemaVersion) {
    throw std::invalid_argument("game JSON: unsupported schema_version " + std::to_string(version));
  }
  GameSpec spec;
  spec.n_radars = j.at("n_radars").get<int>();
  spec.n_targets = j.at("n_targets").get<int>();
  spec.m = j.at("m").get<int>();
  spec.c = j.value("c", 0.1);
  const json& table = j.at("gain_table");
  if (table.contains("radar_increments")) {
    spec.gains = GainTable::radar_specific(
        table.at("radar_increments").get<std::vector<std::vector<std::vector<double>>>>());
  } else {
    spec.gains = GainTable::shared(table.at("increments").get<std::vector<std::vector<double>>>(),
                                   spec.n_radars);
  }
  spec.validate();
  return spec;
}

json profile_to_json(const StrategyProfile& s) {
  json rows = json::array();
  for (int i = 0; i < s.n_radars(); ++i) {
    rows.push_back(std::vector<int>(s.row(i).begin(), s.row(i).end()));
  }
  return rows;
}

json report_to_json(const PropositionReport& rep) {
  json ce = json::array();
  for (const auto& s : rep.counterexamples) ce.push_back(profile_to_json(s));
  json out = {{"proposition", rep.proposition},
          {"holds", rep.holds},
          {"profiles", rep.profiles},
          {"nash", rep.nash},
          {"pareto_nash", rep.pareto_nash},
          {"predicted", rep.predicted},
          {"distinct_full_nash_profiles", rep.distinct_full_nash},
          {"distinct_full_nash_ordered", rep.distinct_full_nash_ordered},
          {"ordered_formula", rep.ordered_formula},
          {"counterexamples", std::move(ce)},
          {"findings", rep.findings}};
  if (rep.proposition == 2) {
    out["level_filling_violations"] = rep.level_filling_violations;
    out["greedy_is_nash"] = rep.greedy_is_nash;
  }
  return out;
}

}  // namespace trackselect
