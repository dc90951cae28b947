#pragma once

#include <json.hpp>

#include "trackselect/game.hpp"

namespace trackselect {

inline constexpr int kGameSchemaVersion = 1;

// {"schema_version", "n_radars", "n_targets", "m", "c",
//  "gain_table": {"increments": [[...] per target]}                 shared
//             or {"radar_increments": [[[...] per target] per radar]} radar-specific}
nlohmann::json game_to_json(const GameSpec& spec);
GameSpec game_from_json(const nlohmann::json& j);

nlohmann::json profile_to_json(const StrategyProfile& s);
nlohmann::json report_to_json(const PropositionReport& rep);

}  // namespace trackselect
