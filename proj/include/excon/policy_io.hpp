#pragma once

#include "excon/weitzman.hpp"

#include <json.hpp>

namespace excon {

std::string_view to_string(PrizeAction action);
PrizeAction parse_action(std::string_view name);

/// {"zero_cost": [...], "phases": [{"cap", "boxes", "stop_above", "actions"}],
///  "never_opened": [...]}, with actions keyed "box.prize".
nlohmann::json to_json(const ResolvedPolicy& policy);
ResolvedPolicy policy_from_json(const nlohmann::json& doc, const Instance& instance);

}  // namespace excon
